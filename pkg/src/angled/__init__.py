"""Complete hyperbolic structures on cusped 3-manifolds by volume maximization."""

from .angles import build_constraints, initial_point, rank_and_dimension, tangent_basis
from .curves import CurveSet, intersection_number, leading_trailing_vector
from .errors import AngledError
from .fixtures import load_fixture
from .geometry import holonomy, lobachevsky, shapes, volume
from .solver import SolveOptions, SolveReport, Status, dehn_slice, solve, verify_metric
from .triangulation import Triangulation, parse_triangulation

__all__ = [
    "AngledError", "CurveSet", "SolveOptions", "SolveReport", "Status", "Triangulation",
    "build_constraints", "dehn_slice", "holonomy", "initial_point", "intersection_number",
    "leading_trailing_vector", "load_fixture", "lobachevsky", "parse_triangulation",
    "rank_and_dimension", "shapes", "solve", "tangent_basis", "verify_metric", "volume",
]
__version__ = "0.1.0"
