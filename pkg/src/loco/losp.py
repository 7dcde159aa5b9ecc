"""Locally ordered spaces, locally increasing maps, and collapsed levels.

A locally ordered space is stored as one representative ordered basis.
Local increase is decided literally from the definition; two independent
deciders (the characterisation for strict targets, and a fast pointwise
one) exist for cross-checking and for exhaustive enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .basis import (OrderedBasis, in_saturation, minimal_saturation_order,
                    validate_basis)
from .order import FinSpace, Poset, label, sort_points


class InvalidSpace(ValueError):
    pass


@dataclass(frozen=True)
class LocallyOrderedSpace:
    basis: OrderedBasis
    name: str = field(default="", compare=False)

    def __post_init__(self):
        violation = validate_basis(self.basis)
        if violation is not None:
            raise InvalidSpace(f"invalid ordered basis: {violation.kind} at {violation.point!r}")

    @property
    def space(self) -> FinSpace:
        return self.basis.space

    @property
    def points(self) -> frozenset:
        return self.basis.space.points

    @property
    def strict(self) -> bool:
        return self.basis.strict

    def __len__(self):
        return len(self.basis.space.points)

    def to_json(self):
        return self.basis.to_json()


def _monotone(f: Mapping, small: Poset, target: Poset) -> bool:
    order = target.order
    return all((f[a], f[b]) in order for a, b in small.strict_pairs)


@dataclass(frozen=True)
class PointWitness:
    """Outcome of the local-increase test at one source point.

    ``table`` maps the index of each target element around ``f(x)`` to the
    index of a source element realising it; ``failed`` is the first target
    element for which no source element works.
    """

    point: object
    table: dict
    failed: int | None = None

    def __bool__(self):
        return self.failed is None


def is_locally_increasing_at(f: Mapping, x, src: LocallyOrderedSpace, tgt: LocallyOrderedSpace) -> PointWitness:
    sb, tb = src.basis, tgt.basis
    fx = f[x]
    table = {}
    for j in tb.containing[fx]:
        target = tb.elements[j]
        for i in sb.containing[x]:
            b = sb.elements[i]
            if all(f[p] in target.carrier for p in b.carrier) and _monotone(f, b, target):
                table[j] = i
                break
        else:
            return PointWitness(x, table, j)
    return PointWitness(x, table)


def is_continuous_at(f: Mapping, x, src: FinSpace, tgt: FinSpace) -> bool:
    u = tgt.min_open[f[x]]
    return all(f[p] in u for p in src.min_open[x])


def is_continuous(f: Mapping, src: FinSpace, tgt: FinSpace) -> bool:
    return all(is_continuous_at(f, x, src, tgt) for x in src.points)


def is_locally_increasing(f: Mapping, src: LocallyOrderedSpace, tgt: LocallyOrderedSpace) -> bool:
    return all(is_locally_increasing_at(f, x, src, tgt) for x in sort_points(src.points))


def is_locally_increasing_strict_target(f: Mapping, src: LocallyOrderedSpace, tgt: LocallyOrderedSpace,
                                        x=None) -> bool:
    """Decide local increase through continuity plus one increasing open poset.

    Only valid for strict targets.  The open poset is searched among posets
    carried by min_open(x); restricting any witness to that carrier keeps it
    a witness, and the least admissible order there is the best candidate.
    """
    if not tgt.strict:
        raise ValueError("target basis must be strict")
    points = sort_points(src.points) if x is None else [x]
    for p in points:
        if not is_continuous_at(f, p, src.space, tgt.space):
            return False
        carrier = src.space.min_open[p]
        order = minimal_saturation_order(src.basis, carrier)
        if order is None:
            return False
        candidate = Poset(carrier, order)
        assert in_saturation(candidate, src.basis)
        if not any(all(f[q] in b0.carrier for q in carrier) and _monotone(f, candidate, b0)
                   for b0 in tgt.basis.elements):
            return False
    return True


def is_locally_increasing_fast(f: Mapping, src: LocallyOrderedSpace, tgt: LocallyOrderedSpace) -> bool:
    """Pointwise test: continuity at x and monotonicity between least local orders."""
    so, to = src.basis.pointwise_orders, tgt.basis.pointwise_orders
    smin, tmin = src.space.min_open, tgt.space.min_open
    for x in src.points:
        fx = f[x]
        u = tmin[fx]
        if any(f[p] not in u for p in smin[x]):
            return False
        order = to[fx]
        if any((f[a], f[b]) not in order for a, b in so[x] if a != b):
            return False
    return True


class LocMap:
    """A map between locally ordered spaces with its per-point witnesses."""

    def __init__(self, source: LocallyOrderedSpace, target: LocallyOrderedSpace, mapping: Mapping, name: str = ""):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        self.name = name
        if set(self.mapping) != set(source.points):
            raise ValueError("map must be defined on every source point")
        if not set(self.mapping.values()) <= target.points:
            raise ValueError("map leaves the target")

    def __call__(self, x):
        return self.mapping[x]

    def __getitem__(self, x):
        return self.mapping[x]

    @cached_property
    def witnesses(self) -> dict:
        out = {x: is_locally_increasing_at(self.mapping, x, self.source, self.target)
               for x in sort_points(self.source.points)}
        if all(out.values()):
            assert is_continuous(self.mapping, self.source.space, self.target.space)
        return out

    @property
    def is_locally_increasing(self) -> bool:
        return all(self.witnesses.values())

    def first_failure(self) -> PointWitness | None:
        for w in self.witnesses.values():
            if not w:
                return w
        return None

    @property
    def is_continuous(self) -> bool:
        return is_continuous(self.mapping, self.source.space, self.target.space)

    def compose(self, first: "LocMap") -> "LocMap":
        """``self`` after ``first``."""
        return LocMap(first.source, self.target, {x: self.mapping[y] for x, y in first.mapping.items()})

    def to_json(self):
        return {"map": {label(x): label(self.mapping[x]) for x in sort_points(self.mapping)}}


def identity_map(X: LocallyOrderedSpace) -> LocMap:
    return LocMap(X, X, {x: x for x in X.points}, "id")


# --------------------------------------------------------------------------
# collapsed levels of maps out of products


class NotAProduct(ValueError):
    pass


def product_factors(points) -> tuple:
    pts = set(points)
    if not all(isinstance(p, tuple) and len(p) == 2 for p in pts):
        raise NotAProduct("source points are not pairs")
    first = {p[0] for p in pts}
    second = {p[1] for p in pts}
    if len(pts) != len(first) * len(second):
        raise NotAProduct("source points do not form a full product")
    return frozenset(first), frozenset(second)


def compute_K(f: Mapping) -> frozenset:
    """Levels t whose whole section {(s, t)} is sent to a single point."""
    circle, levels = product_factors(f.keys())
    return frozenset(t for t in levels if len({f[(s, t)] for s in circle}) == 1)


def is_strongly_connected(X: LocallyOrderedSpace) -> bool:
    """Every ordered pair of points is joined by a chain increasing inside members."""
    succ = {x: set() for x in X.points}
    for b in X.basis.elements:
        for a, c in b.strict_pairs:
            succ[a].add(c)
    for start in X.points:
        seen, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != X.points:
            return False
    return True


@dataclass
class KVerdict:
    K: frozenset
    holds: bool
    hypotheses: dict

    def to_json(self):
        return {"K": [label(t) for t in sort_points(self.K)], "holds": self.holds,
                "hypotheses": dict(self.hypotheses)}


def check_K_open(f: Mapping, circle: LocallyOrderedSpace, base: FinSpace) -> KVerdict:
    K = compute_K(f)
    hyp = {"compact": True, "strongly_connected": is_strongly_connected(circle)}
    return KVerdict(K, base.is_open(K), hyp)


def check_K_closed(f: Mapping, circle: FinSpace, base: FinSpace, target: FinSpace,
                   any_space: bool = False) -> KVerdict:
    """Closedness of K(f) for a continuous f.

    The hypotheses are a locally Hausdorff target and a connected circle
    model; with ``any_space`` the connectedness requirement is traded for a
    Hausdorff target.
    """
    K = compute_K(f)
    hyp = {"continuous": is_continuous(f, _product(circle, base), target),
           "target_locally_hausdorff": target.is_locally_hausdorff()}
    if any_space:
        hyp["target_hausdorff"] = target.is_hausdorff()
    else:
        hyp["circle_connected"] = circle.is_connected()
    return KVerdict(K, base.is_closed(K), hyp)


def _product(a: FinSpace, b: FinSpace) -> FinSpace:
    from .order import product_space
    return product_space(a, b)
