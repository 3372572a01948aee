"""Observable-weighted ray spaces and generalized geometric phases.

Numerical toolkit for the geometry a quantum system exhibits when an
observable, rather than the identity, weighs its overlaps: classification of
states by the sign of (psi, O psi), the two unit quadrics and their ray
spaces, the connection and its holonomy (the generalized geometric phase),
the symplectic form and indefinite metric those ray spaces carry, and their
pseudo-Kahler description in inhomogeneous coordinates.  Everything reduces
to the familiar Fubini-Study geometry and ordinary geometric phase when the
observable is the identity.
"""

__version__ = "0.1.0"

from .classify import (
    NormalizedState,
    ONormClass,
    RayPoint,
    StateTag,
    classify,
    normalize_o,
    quadric_residual,
    ray_from_vector,
    ray_of,
)
from .connection import (
    ChartPoint,
    TangentSplit,
    chart_point,
    chart_state,
    chart_variations,
    connection,
    covariant_derivative,
    horizontal_project,
    is_horizontal,
    is_tangent,
    split,
)
from .core import (
    DEFAULT_TOL,
    ChartDomainError,
    DegenerateOverlapError,
    DimensionMismatchError,
    NullStateError,
    NumericalDomainError,
    ObsPhaseError,
    Observable,
    SingularityError,
    ToleranceConfig,
    ValidationError,
    angle_distance,
    as_state,
    eigendecompose,
    identity_observable,
    inner,
    o_inner,
    o_norm,
    principal_angle,
)
from .curves import (
    bloch_circle,
    bloch_octant,
    bloch_state,
    geodesic_polygon,
    hyperboloid_cap,
    hyperboloid_loop,
    sample_loop,
)
from .holonomy import (
    DiscreteCurve,
    PhaseResult,
    discrete_pancharatnam,
    gauge_transform,
    loop_phase,
    three_point_phase,
)
from .kahler import (
    KahlerChart,
    chart_loop_phase,
    compatibility_check,
    form_coeffs,
    from_chart,
    kahler_potential,
    metric_coeffs,
    potential_hessian_fd,
    to_chart,
    two_state_chart,
)
from .raygeom import (
    RayTangent,
    metric,
    ray_distance_sq,
    ray_tangent,
    symplectic_form,
    trace_split,
)
from .surface import (
    StokesConvergence,
    StokesReport,
    SurfaceMesh,
    boundary_curve,
    stokes_convergence,
    stokes_report,
    surface_phase,
)
from .verify import DEFAULT_SEED, run_verification

__all__ = [
    "__version__",
    # errors and substrate
    "ObsPhaseError",
    "ValidationError",
    "DimensionMismatchError",
    "NumericalDomainError",
    "NullStateError",
    "ChartDomainError",
    "DegenerateOverlapError",
    "SingularityError",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "Observable",
    "as_state",
    "inner",
    "o_inner",
    "o_norm",
    "eigendecompose",
    "identity_observable",
    "principal_angle",
    "angle_distance",
    # classification and rays
    "StateTag",
    "ONormClass",
    "NormalizedState",
    "RayPoint",
    "classify",
    "normalize_o",
    "quadric_residual",
    "ray_of",
    "ray_from_vector",
    # connection and charts
    "TangentSplit",
    "ChartPoint",
    "is_tangent",
    "is_horizontal",
    "horizontal_project",
    "connection",
    "split",
    "covariant_derivative",
    "chart_point",
    "chart_state",
    "chart_variations",
    # holonomy
    "PhaseResult",
    "DiscreteCurve",
    "loop_phase",
    "discrete_pancharatnam",
    "three_point_phase",
    "gauge_transform",
    # ray-space geometry
    "RayTangent",
    "ray_tangent",
    "symplectic_form",
    "metric",
    "trace_split",
    "ray_distance_sq",
    # pseudo-Kahler charts
    "KahlerChart",
    "to_chart",
    "from_chart",
    "kahler_potential",
    "metric_coeffs",
    "form_coeffs",
    "potential_hessian_fd",
    "compatibility_check",
    "chart_loop_phase",
    "two_state_chart",
    # surfaces
    "SurfaceMesh",
    "StokesReport",
    "StokesConvergence",
    "boundary_curve",
    "surface_phase",
    "stokes_report",
    "stokes_convergence",
    # curve families
    "sample_loop",
    "hyperboloid_loop",
    "hyperboloid_cap",
    "bloch_state",
    "bloch_circle",
    "bloch_octant",
    "geodesic_polygon",
    # verification
    "DEFAULT_SEED",
    "run_verification",
]
