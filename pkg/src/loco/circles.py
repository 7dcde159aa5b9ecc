"""Finite models of circles, standard bases, and directed cylinders."""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property

from .basis import OrderedBasis, canonical_basis, product_basis
from .losp import LocallyOrderedSpace, LocMap
from .order import FinSpace, Poset, sort_points

SBAR = "sbar"


# --------------------------------------------------------------------------
# circles


class Circle:
    """A finite circle model: a locally ordered space with a base point."""

    kind = ""

    def __init__(self, n: int, lpo: LocallyOrderedSpace):
        self.n = n
        self.lpo = lpo

    @property
    def notation(self) -> str:
        return f"{self.kind}:{self.n}"

    @property
    def points(self) -> frozenset:
        return self.lpo.points

    @property
    def space(self) -> FinSpace:
        return self.lpo.space

    @property
    def arcs(self) -> tuple:
        return self.lpo.basis.elements

    @property
    def basepoint(self):
        return sort_points(self.points)[0]

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"{type(self).__name__}({self.n})"


def _cyclic_interval(start: int, length: int, size: int) -> list:
    return [(start + i) % size for i in range(length)]


class DirectedCircle(Circle):
    """Khalimsky circle on 2n points: even points closed, odd points open.

    The basis is made of the proper open arcs (cyclic intervals with odd
    endpoints), each carrying the forward linear order.
    """

    kind = "khalimsky"

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("a Khalimsky circle needs n >= 2")
        size = 2 * n
        min_open = {}
        for p in range(size):
            min_open[p] = {p} if p % 2 else {(p - 1) % size, p, (p + 1) % size}
        space = FinSpace(min_open)
        arcs = [Poset.chain(_cyclic_interval(a, length, size))
                for a in range(1, size, 2) for length in range(1, size, 2)]
        super().__init__(n, LocallyOrderedSpace(OrderedBasis(space, tuple(arcs), True), f"khalimsky:{n}"))


class DiscreteCircle(Circle):
    """n discrete points in cyclic order; basis of proper cyclic intervals."""

    kind = "discrete"

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("a discrete circle needs n >= 2")
        space = FinSpace.discrete(range(n))
        arcs = [Poset.chain(_cyclic_interval(a, length, n)) for a in range(n) for length in range(1, n)]
        super().__init__(n, LocallyOrderedSpace(OrderedBasis(space, tuple(arcs), True), f"discrete:{n}"))


class SplitCircle(Circle):
    """Khalimsky circle with two closed points removed: two disjoint directed arcs.

    Only arcs inside one of the two pieces are kept, so no increasing chain
    joins the pieces.  This drops strong connectedness while keeping every
    other property of the circle.
    """

    kind = "split"

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("a split circle needs n >= 2")
        size = 2 * n
        cut = {0, 2 * (n // 2)}
        points = [p for p in range(size) if p not in cut]
        min_open = {p: ({p} if p % 2 else {(p - 1) % size, p, (p + 1) % size}) for p in points}
        space = FinSpace(min_open)
        arcs = []
        for a in range(1, size, 2):
            for length in range(1, size, 2):
                arc = _cyclic_interval(a, length, size)
                if not cut & set(arc):
                    arcs.append(Poset.chain(arc))
        super().__init__(n, LocallyOrderedSpace(OrderedBasis(space, tuple(arcs), True), f"split:{n}"))


CIRCLES = {"khalimsky": DirectedCircle, "discrete": DiscreteCircle, "split": SplitCircle}


def make_directed_circle(n: int) -> DirectedCircle:
    return DirectedCircle(n)


def make_discrete_circle(n: int) -> DiscreteCircle:
    return DiscreteCircle(n)


def parse_circle(notation: str) -> Circle:
    kind, _, n = notation.partition(":")
    if kind not in CIRCLES or not n.isdigit():
        raise ValueError(f"unknown circle notation {notation!r} (expected khalimsky:n, discrete:n or split:n)")
    return CIRCLES[kind](int(n))


# --------------------------------------------------------------------------
# bases


def ultrafilter_points(k: int) -> list:
    if not 2 <= k <= 27:
        raise ValueError("ultrafilter space needs between 2 and 27 points")
    return [SBAR] + list(string.ascii_lowercase[:k - 1])


def make_ultrafilter_space(points, sbar=SBAR) -> LocallyOrderedSpace:
    """Opens are the sets containing ``sbar``; every open carries the equality order."""
    points = list(points)
    if len(points) < 2 or sbar not in points:
        raise ValueError("need at least two points including the distinguished one")
    space = FinSpace({p: ({sbar} if p == sbar else {sbar, p}) for p in points})
    return LocallyOrderedSpace(canonical_basis(space), f"ultra:{len(points)}")


def make_discrete_base(k: int) -> LocallyOrderedSpace:
    return LocallyOrderedSpace(canonical_basis(FinSpace.discrete(range(k)), all_opens=False), f"discrete:{k}")


def make_chain_base(k: int) -> LocallyOrderedSpace:
    """Discrete points 0..k-1 with every interval carrying the chain order."""
    space = FinSpace.discrete(range(k))
    elements = tuple(Poset.chain(range(i, j)) for i in range(k) for j in range(i + 1, k + 1))
    return LocallyOrderedSpace(OrderedBasis(space, elements, True), f"chain:{k}")


def make_sierpinski() -> LocallyOrderedSpace:
    space = FinSpace({"a": {"a"}, "b": {"a", "b"}})
    return LocallyOrderedSpace(canonical_basis(space), "sierpinski")


def khalimsky_interval(top: int) -> FinSpace:
    """Levels 0..top; even levels closed, odd levels open."""
    if top < 0:
        raise ValueError("interval needs at least one level")
    return FinSpace({t: ({t} if t % 2 else {u for u in (t - 1, t, t + 1) if 0 <= u <= top})
                     for t in range(top + 1)})


def make_khalimsky_interval(top: int) -> LocallyOrderedSpace:
    return LocallyOrderedSpace(canonical_basis(khalimsky_interval(top), all_opens=False),
                               f"khalimsky-interval:{top}")


def parse_base(notation: str) -> LocallyOrderedSpace:
    kind, _, arg = notation.partition(":")
    if kind == "sierpinski" and not arg:
        return make_sierpinski()
    if not arg.isdigit():
        raise ValueError(f"bad base notation {notation!r}")
    k = int(arg)
    if kind == "ultra":
        return make_ultrafilter_space(ultrafilter_points(k))
    if kind == "discrete":
        return make_discrete_base(k)
    if kind == "chain":
        return make_chain_base(k)
    if kind == "khalimsky-interval":
        return make_khalimsky_interval(k)
    raise ValueError(f"unknown base kind {kind!r}")


# --------------------------------------------------------------------------
# cylinders


@dataclass(frozen=True)
class Cylinder:
    circle: Circle
    base: LocallyOrderedSpace
    star: object

    def __post_init__(self):
        if self.star not in self.base.points:
            raise ValueError(f"star {self.star!r} is not a point of the base")
        if any(isinstance(t, tuple) for t in self.base.points):
            raise ValueError("base points must not be tuples")

    @cached_property
    def lpo(self) -> LocallyOrderedSpace:
        return LocallyOrderedSpace(product_basis(self.circle.lpo.basis, self.base.basis))

    @property
    def points(self) -> frozenset:
        return self.lpo.points

    @property
    def space(self) -> FinSpace:
        return self.lpo.space

    @cached_property
    def i_star(self) -> LocMap:
        return LocMap(self.circle.lpo, self.lpo, {s: (s, self.star) for s in self.circle.points}, "i_star")

    @cached_property
    def c_star(self) -> LocMap:
        c = self.circle.basepoint
        return LocMap(self.circle.lpo, self.lpo, {s: (c, self.star) for s in self.circle.points}, "c_star")

    @cached_property
    def p2(self) -> LocMap:
        return LocMap(self.lpo, self.base, {p: p[1] for p in self.points}, "p2")

    def coequalizes(self, f) -> bool:
        c = self.circle.basepoint
        return all(f[(s, self.star)] == f[(c, self.star)] for s in self.circle.points)


def make_cylinder(circle: Circle, base: LocallyOrderedSpace, star) -> Cylinder:
    return Cylinder(circle, base, star)
