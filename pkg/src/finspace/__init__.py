"""Exact homotopy invariants of finite T0-spaces and Khalimsky circles."""

from .space import (
    DownSet,
    FiniteSpace,
    KhalimskyCircle,
    KhalimskyInterval,
    OrderMap,
    build_space,
    check_continuous,
    constant_map,
    identity_map,
    khalimsky_circle,
    khalimsky_interval,
    product,
    projections,
)
from .homotopy import (
    HomotopyVerdict,
    beat_points,
    comparable,
    core,
    fence_bfs,
    hom_components,
    homotopic,
    is_contractible,
    minimal_iso_check,
    nullhomotopic_in,
)
from .circles import (
    CircleMap,
    IntervalMap,
    LiftRecord,
    classify_homotopic,
    degree,
    lift,
    monotone_normalize,
    recognize_circle,
)
from .complexes import (
    SimplicialComplex,
    face_poset,
    order_complex,
)

__version__ = "0.1.0"

__all__ = [
    "DownSet",
    "FiniteSpace",
    "KhalimskyCircle",
    "KhalimskyInterval",
    "OrderMap",
    "build_space",
    "check_continuous",
    "constant_map",
    "identity_map",
    "khalimsky_circle",
    "khalimsky_interval",
    "product",
    "projections",
    "HomotopyVerdict",
    "beat_points",
    "comparable",
    "core",
    "fence_bfs",
    "hom_components",
    "homotopic",
    "is_contractible",
    "minimal_iso_check",
    "nullhomotopic_in",
    "CircleMap",
    "IntervalMap",
    "LiftRecord",
    "classify_homotopic",
    "degree",
    "lift",
    "monotone_normalize",
    "recognize_circle",
    "SimplicialComplex",
    "face_poset",
    "order_complex",
]
