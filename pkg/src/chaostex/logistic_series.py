"""Power-series analysis of logistic-map iteration.

For a handful of growth parameters the logistic map x -> mu*x*(1-x) has an
exact closed form; mu=4 gives x_n = (1 - cos(2^n * arccos(1 - 2*x0))) / 2.
For general mu > 1 one can look for a conjugacy F with
x_n = F(mu^(n/2) * F^{-1}(x0)), F(0) = 0, and represent F as an even power
series F(x) = x^2 + a4*x^4 + a6*x^6 + ... whose coefficient magnitudes obey
a convolution recursion. This module builds those coefficients, evaluates
the truncated series and its explicit quartic inverse, the first-omitted-
term truncation bound, a fully expanded second-order closed approximation
of x_n, and comparison reports of all of the above against direct
iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .maps import ChaoticMapSpec, MapFamily, orbit

Branch = str  # "plus" | "minus"


def _check_branch(branch: Branch) -> int:
    if branch == "plus":
        return 1
    if branch == "minus":
        return -1
    raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


@dataclass(frozen=True)
class PowerSeries:
    """Even power series sum_n a_{2n} x^{2n} with a2 = 1.

    ``coefficients[i]`` holds the signed coefficient of x^(2*(i+1)). Odd
    coefficients and the constant term are identically zero. Signs
    alternate starting positive at x^2; magnitudes follow the recursion
    |a_{2n}| = sum_{j=1}^{n-1} |a_{2j}| |a_{2n-2j}| / (mu^(n-1) - 1).
    """

    mu: float
    coefficients: tuple[float, ...]
    order: int

    def evaluate(self, x: float) -> float:
        """Evaluate the truncated series with compensated summation."""
        terms = [a * x ** (2 * (j + 1)) for j, a in enumerate(self.coefficients)]
        return math.fsum(terms)

    def evaluate_many(self, x) -> np.ndarray:
        return np.array([self.evaluate(v) for v in np.asarray(x, dtype=np.float64).ravel()])


def series_coefficients(mu: float, order: int) -> PowerSeries:
    """Signed series coefficients up to x^order.

    Requires mu > 1 (the recursion divides by mu^(n-1) - 1) and an even
    order >= 2. The recursion fixes magnitudes only; signs are imposed to
    alternate, matching the second-order form x^2 - x^4/(mu-1).
    """
    if mu <= 1.0:
        raise DataError(f"series coefficients require mu > 1, got {mu}")
    if order < 2 or order % 2 != 0:
        raise ValueError(f"order must be an even integer >= 2, got {order}")
    n_terms = order // 2
    magnitudes = [1.0]  # |a_2|
    for n in range(2, n_terms + 1):
        acc = sum(magnitudes[j - 1] * magnitudes[n - j - 1] for j in range(1, n))
        magnitudes.append(acc / (mu ** (n - 1) - 1.0))
    signed = tuple(m if n % 2 == 0 else -m for n, m in enumerate(magnitudes))
    return PowerSeries(mu=mu, coefficients=signed, order=order)


def truncation_bound(mu: float, x: float, order: int = 4) -> float:
    """First-omitted-term bound for the order-4 truncation, |a6| * x^6.

    Valid for the alternating series at mu > 1, where
    |a6| = 2 / ((mu-1)^2 (mu+1)). Only order 4 has a derived bound.
    """
    if order != 4:
        raise NotImplementedError(f"truncation bound is only derived for order 4, got {order}")
    if mu <= 1.0:
        raise DataError(f"truncation bound requires mu > 1, got {mu}")
    a6 = 2.0 / ((mu - 1.0) ** 2 * (mu + 1.0))
    return abs(a6 * x ** 6)


def invert_series_order4(value: float, mu: float, branch: Branch = "minus") -> float:
    """Explicit inverse of the order-4 series x^2 - x^4/(mu-1).

    With z = x^2 and alpha = 1/(mu-1) the series is the biquadratic
    F = z - alpha z^2, so z = (1 +/- sqrt(1 - 4*alpha*F)) / (2*alpha).
    The minus branch maps 0 to 0 and is the default.
    """
    sign = _check_branch(branch)
    if mu <= 1.0:
        raise DataError(f"series inverse requires mu > 1, got {mu}")
    alpha = 1.0 / (mu - 1.0)
    radicand = 1.0 - 4.0 * alpha * value
    if radicand < 0.0:
        raise DataError(
            f"series inverse undefined: value {value} exceeds (mu-1)/4 = {(mu - 1.0) / 4.0}"
        )
    z = (1.0 + sign * math.sqrt(radicand)) / (2.0 * alpha)
    if z < 0.0:
        raise DataError(f"series inverse undefined on branch {branch!r} for value {value}")
    return math.sqrt(z)


def closed_approx_xn(x0: float, mu: float, n: int, branch: Branch = "minus") -> float:
    """Second-order closed approximation of the n-th logistic iterate.

    x_n ~= (mu^(n+1) - mu^n)/2 * (1 +/- s)
         - (mu^(2n+1) - mu^(2n))/2 * (1 +/- s - 2*x0/(mu-1))
    with s = sqrt(1 - 4*x0/(mu-1)). The growth term mu^(2n) dominates
    quickly, so values for larger n can explode; callers get the raw
    number.
    """
    sign = _check_branch(branch)
    if mu <= 1.0:
        raise DataError(f"closed approximation requires mu > 1, got {mu}")
    radicand = 1.0 - 4.0 * x0 / (mu - 1.0)
    if radicand < 0.0:
        raise DataError(
            f"closed approximation undefined: x0 {x0} exceeds (mu-1)/4 = {(mu - 1.0) / 4.0}"
        )
    s = math.sqrt(radicand)
    first = (mu ** (n + 1) - mu ** n) / 2.0 * (1.0 + sign * s)
    second = (mu ** (2 * n + 1) - mu ** (2 * n)) / 2.0 * (
        1.0 + sign * s - 2.0 * x0 / (mu - 1.0)
    )
    return first - second


def exact_mu4_xn(x0: float, n: int) -> float:
    """Exact n-th iterate of the mu=4 logistic map via the cosine form."""
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0 must lie in [0,1], got {x0}")
    return 0.5 * (1.0 - math.cos(2.0 ** n * math.acos(1.0 - 2.0 * x0)))


@dataclass(frozen=True)
class StepComparison:
    step: int
    direct: float
    series: float
    closed: float
    abs_error: float  # |series - direct|


@dataclass(frozen=True)
class SeriesOrbitReport:
    x0: float
    mu: float
    order: int
    branch: Branch
    rows: tuple[StepComparison, ...] = field(default_factory=tuple)


def series_orbit_check(x0: float, mu: float, n: int, order: int = 4,
                       branch: Branch = "minus") -> SeriesOrbitReport:
    """Compare series-predicted iterates against direct iteration.

    The prediction is x_k = F(mu^(k/2) * F^{-1}(x0)) with the order-4
    series and its explicit inverse. No accuracy is promised beyond the
    truncation bound near k=1; the report simply records the errors,
    together with the closed second-order approximation for reference.
    """
    if order != 4:
        raise NotImplementedError(f"orbit check uses the explicit order-4 inverse, got order {order}")
    series = series_coefficients(mu, order)
    f_inv = invert_series_order4(x0, mu, branch)
    direct = orbit(x0, ChaoticMapSpec(MapFamily.LOGISTIC, mu=mu), n)
    rows = []
    for k in range(n + 1):
        predicted = series.evaluate(mu ** (k / 2.0) * f_inv)
        closed = closed_approx_xn(x0, mu, k, branch)
        rows.append(StepComparison(
            step=k,
            direct=float(direct[k]),
            series=predicted,
            closed=closed,
            abs_error=abs(predicted - float(direct[k])),
        ))
    return SeriesOrbitReport(x0=x0, mu=mu, order=order, branch=branch, rows=tuple(rows))


def x0_factor_partial_sums(mu: float, k_max: int, x0) -> np.ndarray:
    """Partial sums over k of (1 - sqrt(1 - 4*x0/(mu-1)))^k, k = 1..k_max.

    This isolates how the starting point feeds the closed approximation;
    the growth parameter enters only through the valid x0 range.
    """
    if mu <= 1.0:
        raise DataError(f"requires mu > 1, got {mu}")
    x0 = np.asarray(x0, dtype=np.float64)
    radicand = 1.0 - 4.0 * x0 / (mu - 1.0)
    if np.any(radicand < 0.0):
        raise DataError(f"x0 grid exceeds (mu-1)/4 = {(mu - 1.0) / 4.0}")
    t = 1.0 - np.sqrt(radicand)
    return sum(t ** k for k in range(1, k_max + 1))


@dataclass(frozen=True)
class LinearityReport:
    mu: float
    k_max: int
    x0: np.ndarray
    sums: np.ndarray
    slope: float
    intercept: float
    r_squared: float


def x0_linearity_probe(mu: float, k_max: int = 10, x0_max: float | None = None,
                       n_points: int = 256) -> LinearityReport:
    """Fit a line to the x0-factor partial sums over an x0 grid.

    Near x0 = (mu-1)/4 the summand approaches 1 and the partial sum blows
    up towards k_max, so r_squared over the full domain is dominated by
    that endpoint; restrict x0_max to probe the quasi-linear core.
    """
    if x0_max is None:
        x0_max = (mu - 1.0) / 4.0
    x0 = np.linspace(0.0, x0_max, n_points)
    sums = x0_factor_partial_sums(mu, k_max, x0)
    design = np.column_stack([x0, np.ones_like(x0)])
    (slope, intercept), *_ = np.linalg.lstsq(design, sums, rcond=None)
    predicted = design @ (slope, intercept)
    ss_res = float(((sums - predicted) ** 2).sum())
    ss_tot = float(((sums - sums.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LinearityReport(mu=mu, k_max=k_max, x0=x0, sums=sums,
                           slope=float(slope), intercept=float(intercept),
                           r_squared=r_squared)
