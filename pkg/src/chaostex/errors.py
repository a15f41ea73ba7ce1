"""Exception types shared across the package.

The CLI maps these onto exit codes: DataError -> 3, NumericalError -> 4.
"""


class DataError(ValueError):
    """Invalid input data or a violated data contract."""


class NumericalError(RuntimeError):
    """A numerical routine failed (singular system, no convergence, ...)."""
