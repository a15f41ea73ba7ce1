"""Image <-> normalized 3D point cloud conversion, and image blending.

A grayscale image with m rows and n columns becomes an mn x 3 matrix of
(row, col, intensity) triples, all normalized into [0,1]. After the cloud
has been scrambled by a chaotic map the inverse direction is no longer
trivial: several points may claim the same pixel and whole pixels may end
up unclaimed, so reconstruction uses a rank-placement rule (see
:func:`reconstruct`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Coordinates that agree to this many decimal digits are treated as the
# same value when computing sorted-unique ranks.
COORD_DECIMALS = 12


def validate_image(image) -> np.ndarray:
    """Coerce to a float64 2D array and check intensity bounds."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"image must be a nonempty 2D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite intensities")
    lo, hi = arr.min(), arr.max()
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"intensities must lie in [0,1], got range [{lo}, {hi}]")
    return arr


@dataclass(frozen=True)
class PointCloud:
    """mn x 3 matrix of (row, col, intensity) coordinates in [0,1].

    ``height`` and ``width`` carry the source image dimensions so that a
    scrambled cloud can be reconstructed onto the original grid.
    """

    points: np.ndarray
    height: int
    width: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"point cloud must be (k, 3), got shape {pts.shape}")
        if pts.shape[0] != self.height * self.width:
            raise ValueError(
                f"point count {pts.shape[0]} != height*width = "
                f"{self.height * self.width}"
            )
        if pts.size and (pts.min() < 0.0 or pts.max() > 1.0):
            raise ValueError("point cloud coordinates must lie in [0,1]")
        object.__setattr__(self, "points", pts)


def embed(image) -> PointCloud:
    """Map an image onto 3D space, intensity as the third coordinate.

    Pixel (i, j) (1-based) lands at row p = (i-1)*n + j of the cloud with
    coordinates (i/m, j/n, I(i, j)).
    """
    arr = validate_image(image)
    m, n = arr.shape
    rows = np.repeat(np.arange(1, m + 1, dtype=np.float64) / m, n)
    cols = np.tile(np.arange(1, n + 1, dtype=np.float64) / n, m)
    points = np.column_stack([rows, cols, arr.ravel()])
    return PointCloud(points, m, n)


def _cell_indices(values: np.ndarray, size: int) -> np.ndarray:
    """Rank coordinates by sorted unique value and spread ranks over 1..size.

    A coordinate whose value has rank r among the k distinct values of its
    axis is assigned cell ceil(r * size / k).
    """
    _, inverse = np.unique(np.round(values, COORD_DECIMALS), return_inverse=True)
    k = int(inverse.max()) + 1
    ranks = inverse.astype(np.int64) + 1
    return (ranks * size + k - 1) // k


def reconstruct(cloud: PointCloud) -> np.ndarray:
    """Rebuild an image of the cloud's source dimensions.

    Each point is placed at the cell given by the rank of its two spatial
    coordinates (see :func:`_cell_indices`). Points colliding in one cell
    are averaged; the averaging accumulates values in sorted order so the
    result does not depend on the row order of the cloud. Cells that
    receive no point inherit the most recent assigned value in row-major
    scan order, and a leading hole takes the cloud's mean intensity.

    Round-trips exactly: ``reconstruct(embed(img)) == img``.
    """
    m, n = cloud.height, cloud.width
    pts = cloud.points
    rows = _cell_indices(pts[:, 0], m)
    cols = _cell_indices(pts[:, 1], n)
    flat_cells = (rows - 1) * n + (cols - 1)
    values = pts[:, 2]

    # Sort by (cell, intensity): gives contiguous cell segments and a
    # permutation-independent summation order within each segment.
    order = np.lexsort((values, flat_cells))
    cells_sorted = flat_cells[order]
    values_sorted = values[order]
    starts = np.flatnonzero(np.r_[True, np.diff(cells_sorted) > 0])
    sums = np.add.reduceat(values_sorted, starts)
    counts = np.diff(np.r_[starts, len(values_sorted)])

    image = np.full(m * n, np.nan)
    image[cells_sorted[starts]] = sums / counts
    if np.isnan(image[0]):
        image[0] = values_sorted.sum() / len(values_sorted)
    assigned = ~np.isnan(image)
    last = np.where(assigned, np.arange(m * n), 0)
    np.maximum.accumulate(last, out=last)
    image = image[last]
    return np.clip(image.reshape(m, n), 0.0, 1.0)


def blend(a, b, w: float) -> np.ndarray:
    """Pixelwise convex combination (1-w)*a + w*b.

    w=0 returns ``a`` exactly and w=1 returns ``b`` exactly.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"blend shape mismatch: {a.shape} vs {b.shape}")
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"blend weight must lie in [0,1], got {w}")
    return np.clip((1.0 - w) * a + w * b, 0.0, 1.0)
