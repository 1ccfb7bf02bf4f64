"""Numerical Chern-Weil laboratory on the Riemann sphere.

Everything here works with sampled metrics on two charts, finite-difference
curvature, and quadrature; it is the floating-point counterpart of the
exact calculus in the parent package, tied to it through the power-sum
templates extracted from the symbolic side.
"""

from .grids import CHARTS, ChartGrid
from .fd import ORDERS, d_z, d_zbar, diff1, diff2, laplacian, stencil_reach
from .metrics import (
    InvalidMetricError,
    MetricSample,
    direct_sum,
    fubini_study_line,
    line_bundle_metric,
    transition_residual,
    zero_rank_metric,
)
from .forms import (
    ChartMismatchError,
    NumericForm,
    chart_tolerance,
    ddc,
    integrate_p1,
    overlap_residual,
    partition_weight,
    resample,
    poly_step_down,
    smooth_step_down,
)
from .curvature import (
    CharForm,
    ConnectionCurvature,
    PowerSumTemplate,
    char_form,
    chart_conjugation_residual,
    connection_curvature,
    first_chern_line,
    power_sum_template,
)
from .logweight import integrate_log_weight
from .deformation import (
    EXP_CLAMP,
    PLATEAU,
    BottChernResult,
    Cutoff,
    DeformationDatum,
    DownstairsReport,
    FiberGrid,
    SequenceError,
    bott_chern_numeric,
    default_fiber_grid,
    metric_change_datum,
    sigma_block_metrics,
    split_datum,
    verify_downstairs,
)
from .product import (
    PatchGrid4,
    ProductIdentityReport,
    generic_product_metric,
    product_identity_residuals,
)

__all__ = [
    "CHARTS",
    "ChartGrid",
    "ORDERS",
    "stencil_reach",
    "diff1",
    "diff2",
    "d_z",
    "d_zbar",
    "laplacian",
    "InvalidMetricError",
    "MetricSample",
    "fubini_study_line",
    "line_bundle_metric",
    "zero_rank_metric",
    "direct_sum",
    "transition_residual",
    "ChartMismatchError",
    "NumericForm",
    "resample",
    "poly_step_down",
    "smooth_step_down",
    "partition_weight",
    "overlap_residual",
    "chart_tolerance",
    "integrate_p1",
    "ddc",
    "ConnectionCurvature",
    "connection_curvature",
    "chart_conjugation_residual",
    "PowerSumTemplate",
    "power_sum_template",
    "CharForm",
    "char_form",
    "first_chern_line",
    "integrate_log_weight",
    "Cutoff",
    "PLATEAU",
    "EXP_CLAMP",
    "FiberGrid",
    "default_fiber_grid",
    "SequenceError",
    "DeformationDatum",
    "metric_change_datum",
    "split_datum",
    "sigma_block_metrics",
    "BottChernResult",
    "bott_chern_numeric",
    "DownstairsReport",
    "verify_downstairs",
    "PatchGrid4",
    "ProductIdentityReport",
    "product_identity_residuals",
    "generic_product_metric",
]
