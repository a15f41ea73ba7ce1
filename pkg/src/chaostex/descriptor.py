"""Chaos-map texture descriptor: feature assembly and PCA reduction.

The descriptor embeds an image as a point cloud, iterates a chaotic map
over the cloud (the cloud is carried across iterations, not re-embedded),
reconstructs an image after each iteration, and walks intermediate blend
steps between consecutive reconstructions. Every blended image contributes
one LBP histogram per configured (points, radius) pair, concatenated in
deterministic (scale, iteration, blend step, params) order.

Feature length = n_scales * n_iter * (1/delta + 1) * sum(P + 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import blend, embed, reconstruct, validate_image
from .errors import DataError
from .lbp import LbpParams, lbp_histogram
from .maps import ChaoticMapSpec, step_cloud


@dataclass(frozen=True)
class DescriptorConfig:
    map_spec: ChaoticMapSpec
    n_iter: int = 10
    delta: float = 0.1
    lbp_params: tuple[LbpParams, ...] = (LbpParams(),)
    scales: tuple[float, ...] = (1.0,)
    pca_dims: int | str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "lbp_params", tuple(self.lbp_params))
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (0,1], got {self.delta}")
        steps = round(1.0 / self.delta)
        if abs(steps * self.delta - 1.0) > 1e-9:
            raise ValueError(f"1/delta must be integral, got delta={self.delta}")
        if not self.scales or any(not 0.0 < s <= 1.0 for s in self.scales):
            raise ValueError(f"scales must be a nonempty subset of (0,1], got {self.scales}")
        if not self.lbp_params:
            raise ValueError("need at least one LBP parameter pair")
        if self.pca_dims != "auto" and (not isinstance(self.pca_dims, int) or self.pca_dims < 1):
            raise ValueError(f"pca_dims must be 'auto' or a positive int, got {self.pca_dims!r}")

    @property
    def blend_steps(self) -> int:
        """Number of blend increments per iteration (= 1/delta)."""
        return round(1.0 / self.delta)

    def to_dict(self) -> dict:
        return {
            "map": self.map_spec.config_string(),
            "n_iter": self.n_iter,
            "delta": self.delta,
            "lbp": [[p.points, p.radius] for p in self.lbp_params],
            "scales": list(self.scales),
            "pca_dims": self.pca_dims,
        }


@dataclass(frozen=True)
class FeatureBlock:
    """One histogram's position inside the concatenated feature vector.

    ``alpha`` is the effective chaos depth of the blended image the
    histogram was taken from: iteration index plus blend fraction.
    """

    scale: float
    iteration: int
    blend_index: int
    params: LbpParams
    offset: int
    length: int
    alpha: float


def feature_layout(config: DescriptorConfig) -> list[FeatureBlock]:
    blocks = []
    offset = 0
    for scale in config.scales:
        for k in range(1, config.n_iter + 1):
            for i in range(config.blend_steps + 1):
                for params in config.lbp_params:
                    blocks.append(FeatureBlock(
                        scale=scale, iteration=k, blend_index=i, params=params,
                        offset=offset, length=params.n_bins,
                        alpha=k + i * config.delta,
                    ))
                    offset += params.n_bins
    return blocks


def feature_length(config: DescriptorConfig) -> int:
    bins = sum(p.n_bins for p in config.lbp_params)
    return len(config.scales) * config.n_iter * (config.blend_steps + 1) * bins


def feature_names(config: DescriptorConfig) -> list[str]:
    names = []
    for block in feature_layout(config):
        prefix = (f"s{block.scale:g}_k{block.iteration:02d}_i{block.blend_index:02d}"
                  f"_P{block.params.points}R{block.params.radius:g}")
        names.extend(f"{prefix}_b{b:02d}" for b in range(block.length))
    return names


def _area_weights(n_in: int, n_out: int) -> np.ndarray:
    """Overlap weights mapping n_in cells onto n_out coarser cells."""
    scale = n_in / n_out
    weights = np.zeros((n_out, n_in))
    for u in range(n_out):
        lo = u * scale
        hi = (u + 1) * scale
        t0 = int(np.floor(lo))
        t1 = min(int(np.ceil(hi)), n_in)
        for t in range(t0, t1):
            weights[u, t] = min(hi, t + 1.0) - max(lo, float(t))
    return weights / scale


def resize_by_factor(image: np.ndarray, factor: float) -> np.ndarray:
    """Downsample by area averaging; factor 1 returns the input unchanged."""
    if not 0.0 < factor <= 1.0:
        raise ValueError(f"resize factor must lie in (0,1], got {factor}")
    if factor == 1.0:
        return image
    m, n = image.shape
    out_m = max(1, round(m * factor))
    out_n = max(1, round(n * factor))
    resized = _area_weights(m, out_m) @ image @ _area_weights(n, out_n).T
    return np.clip(resized, 0.0, 1.0)


def iterate_images(image, map_spec: ChaoticMapSpec, n_iter: int) -> list[np.ndarray]:
    """[I_0, ..., I_{n_iter}]: reconstructions of the iterated point cloud.

    The cloud state is what gets iterated; each I_k is a snapshot
    reconstruction of the cloud after k map applications.
    """
    arr = validate_image(image)
    images = [arr]
    cloud = embed(arr)
    for _ in range(n_iter):
        cloud = step_cloud(cloud, map_spec)
        images.append(reconstruct(cloud))
    return images


def extract(image, config: DescriptorConfig) -> np.ndarray:
    """Full descriptor vector for one image."""
    arr = validate_image(image)
    parts = []
    for scale in config.scales:
        scaled = resize_by_factor(arr, scale)
        h, w = scaled.shape
        for params in config.lbp_params:
            margin = int(np.ceil(params.radius))
            if h < 2 * margin + 1 or w < 2 * margin + 1:
                raise DataError(
                    f"scale {scale:g} yields a {h}x{w} image, too small for "
                    f"LBP radius {params.radius}"
                )
        images = iterate_images(scaled, config.map_spec, config.n_iter)
        steps = config.blend_steps
        for k in range(1, config.n_iter + 1):
            previous, current = images[k - 1], images[k]
            for i in range(steps + 1):
                mixed = blend(previous, current, i / steps)
                for params in config.lbp_params:
                    parts.append(lbp_histogram(mixed, params))
    vector = np.concatenate(parts)
    assert vector.size == feature_length(config)
    return vector


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # (n_components, n_features)
    explained_variance: np.ndarray
    explained_ratio: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def fit_pca(features: np.ndarray, n_components: int | str = "auto",
            cap: int | None = None) -> PcaModel:
    """Principal components of a (samples, features) matrix.

    Integer ``n_components`` is clipped to min(n_components, samples - 1,
    n_features). "auto" keeps the smallest count reaching 99% explained
    variance, additionally bounded by ``cap`` when given (the training
    pipeline passes train size minus class count).
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"features must be 2D, got shape {x.shape}")
    n_samples, n_features = x.shape
    if n_samples < 2:
        raise DataError(f"PCA needs at least 2 samples, got {n_samples}")
    mean = x.mean(axis=0)
    centered = x - mean
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    variance = singular ** 2 / (n_samples - 1)
    total = variance.sum()
    ratio = variance / total if total > 0 else np.zeros_like(variance)

    if n_components == "auto":
        if total <= 0.0:
            raise DataError("PCA 'auto' undefined: features have zero variance")
        d = int(np.searchsorted(np.cumsum(ratio), 0.99)) + 1
        if cap is not None:
            d = min(d, max(1, cap))
    else:
        d = int(n_components)
        if d < 1:
            raise ValueError(f"n_components must be >= 1, got {n_components}")
    d = min(d, n_samples - 1, n_features)

    components = vt[:d].copy()
    # Canonical sign: largest-magnitude entry of each component positive.
    for row in components:
        pivot = row[np.argmax(np.abs(row))]
        if pivot < 0:
            row *= -1.0
    return PcaModel(mean=mean, components=components,
                    explained_variance=variance[:d], explained_ratio=ratio[:d])


def apply_pca(model: PcaModel, vectors: np.ndarray) -> np.ndarray:
    """Project one vector or a matrix of row vectors."""
    x = np.asarray(vectors, dtype=np.float64)
    if x.shape[-1] != model.mean.size:
        raise ValueError(
            f"vector length {x.shape[-1]} does not match model dimension {model.mean.size}"
        )
    return (x - model.mean) @ model.components.T
