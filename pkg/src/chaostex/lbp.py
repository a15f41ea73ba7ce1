"""Rotation-invariant uniform local binary patterns.

A pixel is coded by thresholding samples on a circle of radius R against
the pixel itself. Patterns with at most two circular 0/1 transitions
("uniform" patterns) are coded by their number of ones (0..P); everything
else is merged into a single bin, code P+1. Off-grid circle samples use
bilinear interpolation; ties count as "greater or equal" (H(0)=1).

Pixels without a complete circular neighborhood inside the image are
skipped rather than padded, and the histogram is normalized by the number
of coded pixels so images of different sizes remain comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError

# Sampling offsets this close to a grid position are snapped onto it, so
# axis-aligned samples read pixels directly instead of interpolating.
_GRID_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class LbpParams:
    """Circular neighborhood: ``points`` samples on a circle of ``radius``."""

    points: int = 8
    radius: float = 1.0

    def __post_init__(self):
        if self.points < 4:
            raise ValueError(f"need at least 4 sampling points, got {self.points}")
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")

    @property
    def n_bins(self) -> int:
        return self.points + 2


def code_pixel(neighborhood, center: float) -> int:
    """Code one pixel from its circle samples.

    Bits are b_p = 1 iff g_p >= g_c; the uniformity measure is the number
    of circular transitions |b_p - b_{p-1}| including the wrap-around pair.
    Uniform patterns (<= 2 transitions) return the count of ones, others
    return P+1.
    """
    g = np.asarray(neighborhood, dtype=np.float64)
    if g.ndim != 1 or g.size < 4:
        raise ValueError(f"neighborhood must be a flat sequence of >= 4 values, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("neighborhood contains non-finite values")
    bits = (g >= center).astype(np.int64)
    transitions = int(np.abs(np.diff(bits)).sum()) + abs(int(bits[-1]) - int(bits[0]))
    if transitions <= 2:
        return int(bits.sum())
    return g.size + 1


def sample_offsets(params: LbpParams) -> tuple[np.ndarray, np.ndarray]:
    """(row, col) offsets of the P circle samples, angle 2*pi*p/P each."""
    p = np.arange(params.points, dtype=np.float64)
    theta = 2.0 * np.pi * p / params.points
    dr = -params.radius * np.sin(theta)
    dc = params.radius * np.cos(theta)
    return _snap(dr), _snap(dc)


def _snap(d: np.ndarray) -> np.ndarray:
    rounded = np.round(d)
    return np.where(np.abs(d - rounded) < _GRID_SNAP_TOL, rounded, d)


def _shifted_samples(arr: np.ndarray, margin: int, dr: float, dc: float) -> np.ndarray:
    """Values at (r+dr, c+dc) for every interior pixel (r, c), vectorized.

    The incremental form v00 + fr*(v10-v00) + ... is exact on constant
    patches, which keeps ties exact there.
    """
    h, w = arr.shape
    ih, iw = h - 2 * margin, w - 2 * margin
    r0 = int(np.floor(dr))
    c0 = int(np.floor(dc))
    fr = dr - r0
    fc = dc - c0
    br = margin + r0
    bc = margin + c0
    v00 = arr[br:br + ih, bc:bc + iw]
    sample = v00
    if fr > 0.0:
        v10 = arr[br + 1:br + 1 + ih, bc:bc + iw]
        sample = sample + fr * (v10 - v00)
    if fc > 0.0:
        v01 = arr[br:br + ih, bc + 1:bc + 1 + iw]
        sample = sample + fc * (v01 - v00)
    if fr > 0.0 and fc > 0.0:
        v11 = arr[br + 1:br + 1 + ih, bc + 1:bc + 1 + iw]
        sample = sample + fr * fc * (v11 - v10 - v01 + v00)
    return sample


def lbp_histogram(image, params: LbpParams = LbpParams()) -> np.ndarray:
    """Normalized histogram of pixel codes; length P+2, sums to 1."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"image must be 2D, got shape {arr.shape}")
    margin = int(np.ceil(params.radius))
    h, w = arr.shape
    if h < 2 * margin + 1 or w < 2 * margin + 1:
        raise DataError(
            f"image {h}x{w} too small for radius {params.radius}: "
            f"no pixel has a complete neighborhood"
        )
    ih, iw = h - 2 * margin, w - 2 * margin
    center = arr[margin:margin + ih, margin:margin + iw]
    n_points = params.points

    dr, dc = sample_offsets(params)
    bits = np.empty((n_points, ih, iw), dtype=np.int8)
    for p in range(n_points):
        bits[p] = _shifted_samples(arr, margin, dr[p], dc[p]) >= center

    transitions = np.abs(np.diff(bits, axis=0)).sum(axis=0, dtype=np.int64)
    transitions += np.abs(bits[-1] - bits[0])
    ones = bits.sum(axis=0, dtype=np.int64)
    codes = np.where(transitions <= 2, ones, n_points + 1)

    hist = np.bincount(codes.ravel(), minlength=params.n_bins).astype(np.float64)
    return hist / codes.size
