"""Finite locally ordered spaces: ordered bases, locally increasing maps,
directed cylinders and the coequalizers obtained by collapsing a section."""

from .basis import OrderedBasis, is_equivalent, is_strictly_equivalent, validate_basis
from .circles import Cylinder, DirectedCircle, DiscreteCircle, SplitCircle, parse_base, parse_circle
from .coeq import QuotientSpace, build_quotient, decide_coequalizer, factor_through
from .losp import LocallyOrderedSpace, LocMap, compute_K, is_locally_increasing
from .order import FinSpace, Poset, transitive_closure

__all__ = [
    "Cylinder", "DirectedCircle", "DiscreteCircle", "FinSpace", "LocMap", "LocallyOrderedSpace",
    "OrderedBasis", "Poset", "QuotientSpace", "SplitCircle", "build_quotient", "compute_K",
    "decide_coequalizer", "factor_through", "is_equivalent", "is_locally_increasing",
    "is_strictly_equivalent", "parse_base", "parse_circle", "transitive_closure", "validate_basis",
]
