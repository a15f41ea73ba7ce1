"""Chaos-map texture descriptors.

Grayscale textures are embedded as normalized (row, col, intensity) point
clouds, scrambled by iterated chaotic interval maps, reconstructed, and
described by rotation-invariant uniform LBP histograms collected along the
blend path between consecutive reconstructions. A PCA + linear
discriminant pipeline turns the descriptors into a texture classifier, and
a power-series toolbox analyzes the logistic map that drives the
scrambling.
"""

from .descriptor import (
    DescriptorConfig,
    PcaModel,
    apply_pca,
    extract,
    feature_layout,
    feature_length,
    fit_pca,
    iterate_images,
)
from .embedding import PointCloud, blend, embed, reconstruct
from .errors import DataError, NumericalError
from .lbp import LbpParams, code_pixel, lbp_histogram
from .lda import LdaModel, cross_validate_lambda, fit_lda, predict
from .logistic_series import (
    PowerSeries,
    closed_approx_xn,
    exact_mu4_xn,
    series_coefficients,
    series_orbit_check,
    truncation_bound,
)
from .maps import ChaoticMapSpec, MapFamily, orbit, parse_map_spec, step, step_cloud

__all__ = [
    "ChaoticMapSpec",
    "DataError",
    "DescriptorConfig",
    "LbpParams",
    "LdaModel",
    "MapFamily",
    "NumericalError",
    "PcaModel",
    "PointCloud",
    "PowerSeries",
    "apply_pca",
    "blend",
    "closed_approx_xn",
    "code_pixel",
    "cross_validate_lambda",
    "embed",
    "exact_mu4_xn",
    "extract",
    "feature_layout",
    "feature_length",
    "fit_lda",
    "fit_pca",
    "iterate_images",
    "lbp_histogram",
    "orbit",
    "parse_map_spec",
    "predict",
    "reconstruct",
    "series_coefficients",
    "series_orbit_check",
    "step",
    "step_cloud",
    "truncation_bound",
]

__version__ = "0.1.0"
