"""Chaotic interval maps and their iteration over point clouds.

Six classic one-dimensional maps on [0,1] (circle, Gauss, logistic, sine,
Singer, tent), each with a default parameterization that places it in a
chaotic regime, plus an identity map used as a non-chaotic baseline.
Every step is clamped back to [0,1]: the Singer and tent maps can exceed 1
by a few ulp at branch boundaries, and downstream consumers require the
unit cube.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .embedding import PointCloud


class MapFamily(str, enum.Enum):
    CIRCLE = "circle"
    GAUSS = "gauss"
    LOGISTIC = "logistic"
    SINE = "sine"
    SINGER = "singer"
    TENT = "tent"
    # Degenerate baseline, not chaotic. Keeps the descriptor pipeline usable
    # as a plain-LBP reference without a separate code path.
    IDENTITY = "identity"


# Default parameters sit in each family's chaotic regime. User-supplied
# values are accepted as-is; chaoticity is not validated.
DEFAULT_PARAMS: dict[MapFamily, dict[str, float]] = {
    MapFamily.CIRCLE: {"mu": 0.2, "nu": 0.5},
    MapFamily.GAUSS: {},
    MapFamily.LOGISTIC: {"mu": 3.8},
    MapFamily.SINE: {"mu": 4.0},
    MapFamily.SINGER: {"mu": 1.07},
    MapFamily.TENT: {},
    MapFamily.IDENTITY: {},
}

# 1/x in the Gauss map overflows for tiny x; anything this close to zero is
# treated as the exact fixed point at 0.
_GAUSS_ZERO_TOL = 1e-12

_MU_REQUIRED = (MapFamily.LOGISTIC, MapFamily.SINE, MapFamily.SINGER)


@dataclass(frozen=True)
class ChaoticMapSpec:
    """A map family plus its parameters.

    ``mu`` is the growth parameter; ``nu`` is the circle-map coupling and is
    ignored by every other family. Omitted parameters fall back to the
    family default.
    """

    family: MapFamily
    mu: float | None = None
    nu: float | None = None

    def __post_init__(self):
        family = MapFamily(self.family)
        object.__setattr__(self, "family", family)
        defaults = DEFAULT_PARAMS[family]
        if self.mu is None:
            object.__setattr__(self, "mu", defaults.get("mu"))
        if self.nu is None:
            object.__setattr__(self, "nu", defaults.get("nu"))
        if family in _MU_REQUIRED and (self.mu is None or self.mu <= 0):
            raise ValueError(f"{family.value} map requires mu > 0, got {self.mu}")

    def config_string(self) -> str:
        """Inverse of :func:`parse_map_spec`."""
        params = []
        if self.mu is not None:
            params.append(f"mu={self.mu:g}")
        if self.family is MapFamily.CIRCLE and self.nu is not None:
            params.append(f"nu={self.nu:g}")
        if params:
            return f"{self.family.value}:{','.join(params)}"
        return self.family.value


def parse_map_spec(text: str) -> ChaoticMapSpec:
    """Parse a config string like ``logistic:mu=3.8`` or ``circle:mu=0.2,nu=0.5``.

    Family names are case-insensitive; parameters are optional.
    """
    name, _, param_text = text.strip().partition(":")
    try:
        family = MapFamily(name.strip().lower())
    except ValueError:
        known = ", ".join(f.value for f in MapFamily)
        raise ValueError(f"unknown map family {name!r} (known: {known})") from None
    kwargs: dict[str, float] = {}
    for item in filter(None, (s.strip() for s in param_text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip().lower()
        if not sep or key not in ("mu", "nu"):
            raise ValueError(f"bad map parameter {item!r}, expected mu=... or nu=...")
        kwargs[key] = float(value)
    return ChaoticMapSpec(family, **kwargs)


def _raw_step(x: np.ndarray, spec: ChaoticMapSpec) -> np.ndarray:
    """Apply one unclamped map step elementwise."""
    family = spec.family
    if family is MapFamily.CIRCLE:
        return (x + spec.mu - (spec.nu / (2.0 * np.pi)) * np.sin(2.0 * np.pi * x)) % 1.0
    if family is MapFamily.GAUSS:
        near_zero = np.abs(x) <= _GAUSS_ZERO_TOL
        safe = np.where(near_zero, 1.0, x)
        return np.where(near_zero, 0.0, (1.0 / safe) % 1.0)
    if family is MapFamily.LOGISTIC:
        return spec.mu * x * (1.0 - x)
    if family is MapFamily.SINE:
        return (spec.mu / 4.0) * np.sin(np.pi * x)
    if family is MapFamily.SINGER:
        return spec.mu * x * (7.86 + x * (-23.31 + x * (28.75 - 13.302875 * x)))
    if family is MapFamily.TENT:
        return np.where(x < 0.7, x / 0.7, (10.0 / 3.0) * (1.0 - x))
    return np.asarray(x, dtype=np.float64)


def step(x: float, spec: ChaoticMapSpec) -> float:
    """One map step for a scalar state, clamped to [0,1]."""
    if not math.isfinite(x):
        raise ValueError(f"map input must be finite, got {x!r}")
    # Route through the array kernel so scalar and cloud iteration are
    # bit-identical.
    out = _raw_step(np.array([x], dtype=np.float64), spec)
    return float(np.clip(out, 0.0, 1.0)[0])


def step_array(x: np.ndarray, spec: ChaoticMapSpec) -> np.ndarray:
    """Elementwise map step over an arbitrary array, clamped to [0,1]."""
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        bad = x[~np.isfinite(x)].ravel()[0]
        raise ValueError(f"map input must be finite, got {bad!r}")
    return np.clip(_raw_step(x, spec), 0.0, 1.0)


def step_cloud(cloud: PointCloud, spec: ChaoticMapSpec) -> PointCloud:
    """Apply the map to every coordinate of every point in the cloud."""
    points = np.asarray(cloud.points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError(f"point cloud must have 3 columns, got shape {points.shape}")
    return PointCloud(step_array(points, spec), cloud.height, cloud.width)


def orbit(x0: float, spec: ChaoticMapSpec, n: int) -> np.ndarray:
    """Iterate the map ``n`` times from ``x0``; returns [x0, x1, ..., xn]."""
    if n < 0:
        raise ValueError(f"orbit length must be >= 0, got {n}")
    if not math.isfinite(x0):
        raise ValueError(f"map input must be finite, got {x0!r}")
    out = np.empty(n + 1, dtype=np.float64)
    out[0] = x0
    x = x0
    for k in range(1, n + 1):
        x = step(x, spec)
        out[k] = x
    return out
