"""magsurf: magnetic geodesics on parametrized surfaces.

Integrates curves of prescribed geodesic curvature on surfaces in
Euclidean R^3 and Minkowski R^{2,1}, finds closed magnetic geodesics by
an orientation-flip shooting method, and computes the admissible
approach directions at lightlike singular points of graph surfaces.
"""

from .ambient import Signature, cross, dot, norm, vec
from .dynamics import ParamState, kappa_residual, rhs, rhs_conformal, rhs_general, speed_sq
from .errors import (
    BracketError,
    ConformalDegenerateError,
    DegenerateJetError,
    FlatPointError,
    LostCrossingError,
    MagsurfError,
    NotLightlikeError,
    SingularSystemError,
)
from .integrate import (
    IntegratorConfig,
    StopReason,
    Trajectory,
    dense_eval,
    integrate,
    locate_event,
)
from .closure import (
    ClosedOrbit,
    Crossing,
    ShootingFamily,
    find_self_intersections,
    orbit_report,
    shoot,
)
from .singular import (
    DirectionReport,
    FanReport,
    LightlikePointData,
    RayResult,
    admissible_directions,
    approach_fan_experiment,
    direction_report,
    maximal_enneper_lightlike_data,
    normalize_frame,
)
from .surfaces import (
    GraphSurface,
    KappaField,
    SurfaceJet,
    SurfaceSpec,
    catalog,
    first_fundamental,
    get_surface,
    lightlike_defect,
    maximal_enneper_graph,
    normal,
)

__version__ = "1.0.0"

__all__ = [
    "Signature", "vec", "dot", "cross", "norm",
    "ParamState", "speed_sq", "rhs", "rhs_general", "rhs_conformal", "kappa_residual",
    "MagsurfError", "DegenerateJetError", "SingularSystemError",
    "ConformalDegenerateError", "NotLightlikeError", "FlatPointError",
    "BracketError", "LostCrossingError",
    "IntegratorConfig", "StopReason", "Trajectory", "integrate", "dense_eval",
    "locate_event",
    "Crossing", "ShootingFamily", "ClosedOrbit", "find_self_intersections",
    "shoot", "orbit_report",
    "LightlikePointData", "DirectionReport", "normalize_frame",
    "admissible_directions", "direction_report", "RayResult", "FanReport",
    "approach_fan_experiment", "maximal_enneper_lightlike_data",
    "SurfaceJet", "SurfaceSpec", "KappaField", "GraphSurface", "catalog",
    "get_surface", "first_fundamental", "normal", "lightlike_defect",
    "maximal_enneper_graph",
    "__version__",
]
