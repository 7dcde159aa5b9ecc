"""Finite posets and finite topological spaces.

A finite topological space is stored as the map sending each point to the
smallest open set containing it.  Everything downstream (closures, clopen
scans, product topologies, closedness of relations) is computed from that
map; full enumeration of the open sets is available but bounded because it
is exponential.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple

Point = Hashable
Pair = tuple  # (Point, Point)

DEFAULT_OPEN_BOUND = 20


def point_key(p):
    """Total sort key over the point types used in this package."""
    if isinstance(p, tuple):
        return (2, 0, "", tuple(point_key(q) for q in p))
    if isinstance(p, bool):
        return (0, int(p), "", ())
    if isinstance(p, int):
        return (0, p, "", ())
    return (1, 0, str(p), ())


def sort_points(points: Iterable[Point]) -> list:
    return sorted(points, key=point_key)


def pair_key(pair):
    return (point_key(pair[0]), point_key(pair[1]))


def subset_key(subset):
    return (len(subset), [point_key(p) for p in sort_points(subset)])


def label(p) -> str:
    """String label of a point, used in JSON and DOT output."""
    if isinstance(p, tuple):
        return "(" + ",".join(label(q) for q in p) + ")"
    return str(p)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_json(self):
        return {"axiom": self.axiom, "witness": [label(w) for w in self.witness]}


class OrderError(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(f"{violation.axiom} violated at {violation.witness!r}")
        self.violation = violation


class SpaceError(ValueError):
    pass


class EnumerationBound(RuntimeError):
    """Raised when open-set enumeration is refused for a space that is too large."""


# --------------------------------------------------------------------------
# posets


@dataclass(frozen=True)
class Poset:
    """A finite carrier with a reflexive partial order given as a pair set.

    The constructor does not validate; use :meth:`from_pairs` or
    :func:`validate_poset` on untrusted input.
    """

    carrier: frozenset
    order: frozenset

    @classmethod
    def from_pairs(cls, carrier: Iterable[Point], pairs: Iterable[Pair] = (),
                   reflexive: bool = True) -> "Poset":
        carrier = frozenset(carrier)
        order = set(map(tuple, pairs))
        if reflexive:
            order.update((x, x) for x in carrier)
        result = validate_poset(carrier, order)
        if isinstance(result, Violation):
            raise OrderError(result)
        return result

    @classmethod
    def discrete(cls, carrier: Iterable[Point]) -> "Poset":
        carrier = frozenset(carrier)
        return cls(carrier, frozenset((x, x) for x in carrier))

    @classmethod
    def chain(cls, items: Iterable[Point]) -> "Poset":
        items = list(items)
        return cls(frozenset(items),
                   frozenset((items[i], items[j]) for i in range(len(items))
                             for j in range(i, len(items))))

    def le(self, a, b) -> bool:
        return (a, b) in self.order

    def __len__(self):
        return len(self.carrier)

    def __contains__(self, x):
        return x in self.carrier

    def restrict(self, subset: Iterable[Point]) -> "Poset":
        subset = frozenset(subset) & self.carrier
        return Poset(subset, frozenset(p for p in self.order
                                       if p[0] in subset and p[1] in subset))

    @cached_property
    def strict_pairs(self) -> frozenset:
        return frozenset(p for p in self.order if p[0] != p[1])

    def sorted_carrier(self) -> list:
        return sort_points(self.carrier)

    def hasse_edges(self) -> list:
        """Covering pairs, sorted."""
        edges = []
        for a, b in self.strict_pairs:
            if not any((a, c) in self.order and (c, b) in self.order
                       for c in self.carrier if c != a and c != b):
                edges.append((a, b))
        return sorted(edges, key=pair_key)

    def to_json(self):
        return {"carrier": [label(x) for x in self.sorted_carrier()],
                "pairs": [[label(a), label(b)]
                          for a, b in sorted(self.strict_pairs, key=pair_key)]}


def check_poset(carrier: Iterable[Point], pairs: Iterable[Pair]) -> Violation | None:
    """First violated axiom of a candidate partial order, or ``None``."""
    carrier = frozenset(carrier)
    rel = set(map(tuple, pairs))
    for a, b in sorted(rel, key=pair_key):
        if a not in carrier or b not in carrier:
            return Violation("carrier", (a, b))
    for x in sort_points(carrier):
        if (x, x) not in rel:
            return Violation("reflexivity", (x, x))
    for a, b in sorted(rel, key=pair_key):
        if a != b and (b, a) in rel:
            return Violation("antisymmetry", (a, b))
    succ = _successors(carrier, rel)
    for a in sort_points(carrier):
        for b in sort_points(succ[a]):
            for c in sort_points(succ[b]):
                if c not in succ[a]:
                    return Violation("transitivity", (a, c))
    return None


def validate_poset(carrier: Iterable[Point], pairs: Iterable[Pair]) -> Poset | Violation:
    carrier = frozenset(carrier)
    pairs = frozenset(map(tuple, pairs))
    violation = check_poset(carrier, pairs)
    if violation is not None:
        return violation
    return Poset(carrier, pairs)


def _successors(carrier, rel) -> dict:
    succ = {x: set() for x in carrier}
    for a, b in rel:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    return succ


class Closure(NamedTuple):
    relation: frozenset
    antisymmetric: bool
    cycle: frozenset | None   # two distinct points that became equivalent


def transitive_closure(rel: Iterable[Pair], carrier: Iterable[Point] = ()) -> Closure:
    """Smallest transitive superset (Warshall) plus an antisymmetry verdict."""
    rel = set(map(tuple, rel))
    nodes = set(carrier)
    for a, b in rel:
        nodes.add(a)
        nodes.add(b)
    succ = _successors(nodes, rel)
    for k in sort_points(nodes):
        sk = succ[k]
        for i in nodes:
            if k in succ[i]:
                succ[i] |= sk
    closed = frozenset((a, b) for a in nodes for b in succ[a])
    for a, b in sorted(closed, key=pair_key):
        if a != b and (b, a) in closed:
            return Closure(closed, False, frozenset((a, b)))
    return Closure(closed, True, None)


def order_convexity_violation(subset: Iterable[Point], host: Poset) -> tuple | None:
    """A triple x <= y <= z with x, z in ``subset`` and y outside, if one exists."""
    subset = frozenset(subset)
    outside = host.carrier - subset
    for x in sort_points(subset):
        for y in sort_points(outside):
            if (x, y) not in host.order:
                continue
            for z in sort_points(subset):
                if (y, z) in host.order:
                    return (x, y, z)
    return None


def is_order_convex(subset: Iterable[Point], host: Poset) -> bool:
    return order_convexity_violation(subset, host) is None


# --------------------------------------------------------------------------
# finite spaces


class FinSpace:
    """Finite topological space given by its minimal open neighbourhoods."""

    def __init__(self, min_open: Mapping[Point, Iterable[Point]], points: Iterable[Point] | None = None):
        self.min_open = {x: frozenset(u) for x, u in min_open.items()}
        self.points = frozenset(self.min_open) if points is None else frozenset(points)
        if set(self.min_open) != self.points:
            raise SpaceError("min_open must be defined on exactly the points")
        for x, u in self.min_open.items():
            if x not in u:
                raise SpaceError(f"point {x!r} is not in its own minimal open set")
            if not u <= self.points:
                raise SpaceError(f"minimal open set of {x!r} leaves the space")
            for y in u:
                if not self.min_open[y] <= u:
                    raise SpaceError(
                        f"min_open({y!r}) is not contained in min_open({x!r})")

    # constructors -----------------------------------------------------------

    @classmethod
    def discrete(cls, points: Iterable[Point]) -> "FinSpace":
        return cls({x: {x} for x in points})

    @classmethod
    def indiscrete(cls, points: Iterable[Point]) -> "FinSpace":
        points = frozenset(points)
        return cls({x: points for x in points})

    @classmethod
    def from_opens(cls, points: Iterable[Point], opens: Iterable[Iterable[Point]]) -> "FinSpace":
        """Space generated by a family of subsets (taken as a subbasis)."""
        points = frozenset(points)
        opens = [frozenset(o) for o in opens] + [points]
        return cls({x: frozenset.intersection(*[o for o in opens if x in o]) for x in points})

    # basic queries ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FinSpace) and self.min_open == other.min_open

    def __hash__(self):
        return hash(frozenset(self.min_open.items()))

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator:
        return iter(sort_points(self.points))

    def __repr__(self):
        return f"FinSpace({len(self.points)} points)"

    @cached_property
    def up(self) -> dict:
        """``up[a]`` is the set of points whose minimal open set contains ``a``."""
        up = {x: set() for x in self.points}
        for x, u in self.min_open.items():
            for a in u:
                up[a].add(x)
        return {a: frozenset(s) for a, s in up.items()}

    def is_open(self, subset: Iterable[Point]) -> bool:
        subset = frozenset(subset)
        return all(self.min_open[x] <= subset for x in subset)

    def is_closed(self, subset: Iterable[Point]) -> bool:
        return self.is_open(self.points - frozenset(subset))

    def is_clopen(self, subset: Iterable[Point]) -> bool:
        return self.is_open(subset) and self.is_closed(subset)

    def closure(self, subset: Iterable[Point]) -> frozenset:
        subset = frozenset(subset)
        return frozenset(x for x in self.points if self.min_open[x] & subset)

    def interior(self, subset: Iterable[Point]) -> frozenset:
        subset = frozenset(subset)
        return frozenset(x for x in subset if self.min_open[x] <= subset)

    def open_hull(self, subset: Iterable[Point]) -> frozenset:
        """Smallest open set containing ``subset``."""
        out = set()
        for x in subset:
            out |= self.min_open[x]
        return frozenset(out)

    def opens(self, bound: int = DEFAULT_OPEN_BOUND) -> list:
        """All open sets, sorted by size then content."""
        if len(self.points) > bound:
            raise EnumerationBound(
                f"refusing to enumerate opens of a {len(self.points)}-point space (bound {bound})")
        found = {frozenset()}
        for u in set(self.min_open.values()):
            found |= {o | u for o in found}
        return sorted(found, key=subset_key)

    def clopens(self, bound: int = DEFAULT_OPEN_BOUND) -> list:
        return [o for o in self.opens(bound) if self.is_closed(o)]

    @cached_property
    def components(self) -> tuple:
        """Connected components; in a finite space these are the minimal nonempty clopens."""
        adj = {x: set() for x in self.points}
        for x, u in self.min_open.items():
            for y in u:
                adj[x].add(y)
                adj[y].add(x)
        seen, comps = set(), []
        for start in sort_points(self.points):
            if start in seen:
                continue
            comp, queue = set(), deque([start])
            seen.add(start)
            while queue:
                x = queue.popleft()
                comp.add(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(frozenset(comp))
        return tuple(comps)

    def component_of(self, x) -> frozenset:
        for c in self.components:
            if x in c:
                return c
        raise KeyError(x)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def is_discrete(self) -> bool:
        return all(len(u) == 1 for u in self.min_open.values())

    def is_hausdorff(self) -> bool:
        pts = sort_points(self.points)
        return all(not (self.min_open[x] & self.min_open[y])
                   for i, x in enumerate(pts) for y in pts[i + 1:])

    def is_locally_hausdorff(self) -> bool:
        return all(subspace(self, self.min_open[x]).is_hausdorff() for x in self.points)

    def is_t0(self) -> bool:
        seen = {}
        for x, u in self.min_open.items():
            if u in seen:
                return False
            seen[u] = x
        return True

    def to_json(self):
        return {"points": [label(x) for x in self],
                "min_open": {label(x): [label(y) for y in sort_points(self.min_open[x])]
                             for x in self}}


def smallest_open_nbhd(space: FinSpace, point) -> frozenset:
    return space.min_open[point]


def smallest_clopen_nbhd(space: FinSpace, point) -> frozenset:
    """Intersection of all clopen sets containing ``point``: its connected component."""
    comp = space.component_of(point)
    assert space.is_clopen(comp)
    return comp


def relation_closure(rel: Iterable[Pair], space: FinSpace) -> frozenset:
    """Topological closure of a relation inside the product space X x X."""
    up = space.up
    out = set()
    for a, b in rel:
        for x in up[a]:
            for y in up[b]:
                out.add((x, y))
    return frozenset(out)


def is_closed_relation(rel: Iterable[Pair], space: FinSpace) -> bool:
    rel = frozenset(map(tuple, rel))
    return relation_closure(rel, space) <= rel


def product_space(X: FinSpace, Y: FinSpace) -> FinSpace:
    return FinSpace({(x, y): frozenset((a, b) for a in X.min_open[x] for b in Y.min_open[y])
                     for x in X.points for y in Y.points})


def subspace(X: FinSpace, pts: Iterable[Point]) -> FinSpace:
    pts = frozenset(pts)
    if not pts <= X.points:
        raise SpaceError("subspace points must belong to the space")
    return FinSpace({x: X.min_open[x] & pts for x in pts})


def image_space(space: FinSpace, mapping: Mapping, carrier: Iterable[Point] | None = None) -> FinSpace:
    """Final topology of a surjection ``mapping`` out of a finite space.

    A subset is open iff its preimage is open; the minimal open set of a
    point is the image of the smallest saturated open set containing its
    fibre.
    """
    carrier = frozenset(mapping.values()) if carrier is None else frozenset(carrier)
    fibres = {u: set() for u in carrier}
    for x, u in mapping.items():
        fibres[u].add(x)
    min_open = {}
    for u in carrier:
        reached = {u}
        todo = set(fibres[u])
        done = set()
        while todo:
            x = todo.pop()
            done.add(x)
            for y in space.min_open[x]:
                v = mapping[y]
                if v not in reached:
                    reached.add(v)
                    todo |= fibres[v] - done
        min_open[u] = frozenset(reached)
    return FinSpace(min_open)
