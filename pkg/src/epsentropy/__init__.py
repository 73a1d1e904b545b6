"""Epsilon-entropies and capacity dimension of Gaussian measures.

Two entropies are computed for a centred Gaussian state: Kolmogorov's
(an infimum of mutual entropy over nearby channels) and Ohya's (the same
infimum taken over the maximum mutual entropy of each channel's output class),
under the random-variable norm and the total-variation norm.
"""

from .dimension import (
    DimensionEstimate,
    DimMethod,
    Norm,
    SweepRow,
    capacity_dimension,
    entropy_sweep,
    geometric_grid,
)
from .gaussian_core import (
    CompoundCovariance,
    GaussianChannel,
    GaussianMeasure,
    apply_channel,
    centered,
    compound_covariance,
    covariance_spectrum,
    make_channel,
    make_measure,
    mutual_entropy,
    scalar_channel,
)
from .kolmogorov import WaterFillResult, optimal_test_channel, s_k_rv, s_k_tv, water_fill
from .metrics import (
    TvBranch,
    gaussian_cdf,
    rv_distortion,
    tv_branch,
    tv_exact,
    tv_first_order,
    tv_invert,
)
from .ohya import JMode, j_exact, j_first_order, max_mutual_entropy_tv, ohya_tv, s_o_rv, s_o_tv
from .oracle import OracleReport, brute_force_j, brute_force_sk, oracle_tv, quadrature_tv

__version__ = "0.1.0"
