"""Grafting ideal polygons, measured laminations on crowns, arc matchings and
asymptotic values of polynomial Schwarzian equations."""
from .config import get_tolerances, set_tolerances, tolerances
from .crown import (
    CrownLamination,
    CrownShape,
    CuspToBoundary,
    CuspToCusp,
    DualMetricGraph,
    TwistChart,
    boundary_measure,
    chart_join,
    chart_split,
    coords_to_lamination,
    in_wedge,
    lamination_to_coords,
    to_dual_graph,
    wedge_index,
)
from .errors import CrowngraftError, DomainError, NumericalError, SchemaError
from .grafting import (
    TipConfiguration,
    fiber_check,
    fiber_enumerate,
    graft_forward,
    graft_invert,
    normalize_tips,
    tip_deviation,
)
from .kernel import BACKEND
from .matching import (
    ArcRow,
    CrownEnd,
    GluingScene,
    SurfaceArc,
    brute_force_match,
    glue_crown_to_surface,
    minimal_match,
)
from .moebius import INF, MoebiusMap, SpherePoint, chi, elliptic, map_from_triples, sphere
from .polygon import (
    CrossRatioCoords,
    DiagonalSet,
    IdealPolygon,
    WeightedDiagonals,
    coords_to_polygon,
    dual_tree,
    fan_triangulation,
    polygon_to_coords,
)
from .schwarzian import (
    PolynomialQD,
    schwarzian_fd,
    stokes_geometry,
    subdominant_solution,
    tip_estimates,
    tips,
)

__version__ = "0.1.0"
