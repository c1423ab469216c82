"""Computational laboratory for closed hyperbolic surfaces: holonomy from
Fenchel-Nielsen coordinates, certified curve enumeration, short pants
decompositions, annular twist calculus, and degeneration diagnostics."""

from .errors import (
    LabError, DomainError, TrivialCurveError, NumericalError,
    NotHyperbolicError, BudgetError, IndeterminateError, NoCrossingError,
    SharedEndpointError, NoEssentialCurveError, BoundViolation,
)
from .surface import (
    SurfaceSpec, CurveClass, PantsEdge, PantsGraph, FNPoint,
    MeasuredMulticurve, standard_pants_graph, partial_relator,
    reference_point, dehn_twist, dumps_fn_point, loads_fn_point,
    dumps_multicurve, loads_multicurve,
)
from .fuchsian import FuchsianRep, holonomy, translation_length, trace_length
from .geodesics import (
    is_simple, geometric_intersection, multicurve_intersection,
    enumerate_geodesics,
)
from .annular import (
    AnnularCover, ArcClass, annular_cover, lift_arcs,
    algebraic_intersection, arc_distance, relative_twist,
)
from .bers import bers_constant, PantsDecomposition, bounded_pants_decomposition
from .flatmodel import FlatSurface, flat_intersection, flat_self_intersection
from .boundary import (
    make_sequence, ratio_diagnostic, length_gap_diagnostic,
    lamination_proxy, hausdorff_distance, limit_containment_check,
    twist_divergence_check,
)
from .surgery import surgered_simple_curve
from .curvegraph import curve_graph_distance_upper

__version__ = "1.0.0"

__all__ = [
    "LabError", "DomainError", "TrivialCurveError", "NumericalError",
    "NotHyperbolicError", "BudgetError", "IndeterminateError",
    "NoCrossingError", "SharedEndpointError", "NoEssentialCurveError",
    "BoundViolation",
    "SurfaceSpec", "CurveClass", "PantsEdge", "PantsGraph", "FNPoint",
    "MeasuredMulticurve", "standard_pants_graph", "partial_relator",
    "reference_point", "dehn_twist", "dumps_fn_point", "loads_fn_point",
    "dumps_multicurve", "loads_multicurve",
    "FuchsianRep", "holonomy", "translation_length", "trace_length",
    "is_simple", "geometric_intersection", "multicurve_intersection",
    "enumerate_geodesics",
    "AnnularCover", "ArcClass", "annular_cover", "lift_arcs",
    "algebraic_intersection", "arc_distance", "relative_twist",
    "bers_constant", "PantsDecomposition", "bounded_pants_decomposition",
    "FlatSurface", "flat_intersection", "flat_self_intersection",
    "make_sequence", "ratio_diagnostic", "length_gap_diagnostic",
    "lamination_proxy", "hausdorff_distance", "limit_containment_check",
    "twist_divergence_check",
    "surgered_simple_curve", "curve_graph_distance_upper",
]
