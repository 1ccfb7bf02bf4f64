"""chernlab: exact characteristic-class calculus and a numerical Chern-Weil lab.

The symbolic half models truncated cohomology rings of projective spaces,
projective bundles, and the universal rank-2 base, evaluates additive and
multiplicative characteristic classes exactly over the rationals, and checks
push-forward identities (Euler characteristics, tower identities, the two
error-transfer operators and their inversion).

The numeric half samples hermitian metrics on bundles over P1 on two-chart
grids, produces curvature and characteristic forms by finite differences,
and builds secondary classes by a deformation integral over an auxiliary P1
with a logarithmic weight, verifying their defining properties on grids.
"""

from .exact_algebra import (
    GeneratorSet,
    GradedElement,
    IncompatibleRingError,
    Rational,
    SeriesError,
    UnivariateSeries,
    ge_exp,
    ge_inverse,
    render_graded,
    render_series,
    series_compose,
    series_div,
    series_exp,
    series_log,
    series_mul,
    todd_series,
)
from .char_classes import (
    CharSeries,
    FormalBundle,
    apply_class,
    bundle_difference,
    bundle_dual,
    bundle_sum,
    chern_character,
    power_sums,
    todd_class,
    twist_by_line,
)
from .spaces import (
    IntegrationError,
    MapModel,
    SpaceModel,
    compose_maps,
    grassmannian_quotient_classes,
    integrate,
    projective_bundle,
    projective_space,
    pullback,
    pushforward,
    rank2_a_class,
    segre_classes,
    universal_rank2_base,
)
from .rr_engine import (
    ErrOperatorResult,
    NoSolutionError,
    RSolution,
    TowerCheckResult,
    WellDefinednessError,
    err_transfer_O,
    err_transfer_Ominus1,
    euler_characteristic,
    hrr_table,
    solve_R,
    tower_identity_check,
)

__version__ = "0.1.0"
