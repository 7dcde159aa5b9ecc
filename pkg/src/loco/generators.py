"""Seeded random instances: strict bases, equivalent variants, cylinders with an open O."""
from __future__ import annotations

import random

from .basis import OrderedBasis, in_saturation, validate_basis
from .circles import (Cylinder, DirectedCircle, DiscreteCircle, make_ultrafilter_space,
                      ultrafilter_points)
from .losp import LocallyOrderedSpace
from .order import FinSpace, Poset, sort_points, subset_key, transitive_closure

MAX_POINTS = 6


def random_space(rng: random.Random, n: int, density: float = 0.3) -> FinSpace:
    """A random finite space on range(n), from the closure of a random relation."""
    rel = {(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < density}
    closure = transitive_closure(rel | {(x, x) for x in range(n)}, range(n)).relation
    return FinSpace({x: {y for y in range(n) if (y, x) in closure} for x in range(n)})


def random_order(rng: random.Random, points, density: float = 0.4) -> frozenset:
    """A random partial order: pairs compatible with a shuffled linear order, then closed."""
    pts = sort_points(points)
    rng.shuffle(pts)
    rel = {(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))
           if rng.random() < density}
    rel |= {(x, x) for x in pts}
    return transitive_closure(rel, pts).relation


def _random_opens(rng: random.Random, space: FinSpace, count: int) -> list:
    mins = sorted(set(space.min_open.values()), key=subset_key)
    out = []
    for _ in range(count):
        k = rng.randint(1, len(mins))
        out.append(frozenset().union(*rng.sample(mins, k)))
    return out


def strict_basis_from_order(space: FinSpace, order: frozenset, carriers) -> OrderedBasis:
    elements = {Poset(c, frozenset(p for p in order if p[0] in c and p[1] in c)) for c in carriers}
    elements |= {Poset(u, frozenset(p for p in order if p[0] in u and p[1] in u))
                 for u in space.min_open.values()}
    return OrderedBasis(space, tuple(sorted(elements, key=lambda p: (subset_key(p.carrier), sorted(map(str, p.order))))),
                        True)


def random_strict_basis(rng: random.Random, n: int | None = None, space: FinSpace | None = None) -> OrderedBasis:
    """Restrictions of one random order to the minimal opens and a few more opens."""
    if space is None:
        n = rng.randint(1, MAX_POINTS) if n is None else n
        space = random_space(rng, n)
    order = random_order(rng, space.points)
    basis = strict_basis_from_order(space, order, _random_opens(rng, space, rng.randint(0, 3)))
    assert validate_basis(basis) is None
    return basis


def equivalent_variant(rng: random.Random, basis: OrderedBasis) -> OrderedBasis:
    """Same saturation, different members: add open restrictions, drop non-minimal members."""
    space = basis.space
    elements = set(basis.elements)
    for b in list(elements):
        for sub in _random_opens(rng, space, 2):
            sub = sub & b.carrier
            if sub and space.is_open(sub):
                elements.add(b.restrict(sub))
    minimal = {u for u in space.min_open.values()}
    for b in sorted(elements, key=lambda p: subset_key(p.carrier)):
        if b.carrier not in minimal and rng.random() < 0.5:
            elements.discard(b)
    out = basis.with_elements(sorted(elements, key=lambda p: (subset_key(p.carrier), sorted(map(str, p.order)))))
    if validate_basis(out) is not None:
        return basis
    assert all(in_saturation(b, basis) for b in out.elements)
    return out


def perturbed_variant(rng: random.Random, basis: OrderedBasis) -> OrderedBasis:
    """A strict basis on the same space with the same carriers but freshly drawn orders.

    The new order is sometimes a coarsening of the restriction of the old
    one, which is the case where lax and strict comparison could disagree.
    """
    space = basis.space
    carriers = [b.carrier for b in basis.elements]
    if rng.random() < 0.5:
        order = random_order(rng, space.points)
    else:
        union = set()
        for b in basis.elements:
            union |= b.order
        keep = {p for p in union if p[0] == p[1] or rng.random() < 0.7}
        closure = transitive_closure(keep, space.points)
        order = closure.relation if closure.antisymmetric else frozenset((x, x) for x in space.points)
    out = strict_basis_from_order(space, order, carriers)
    return out if validate_basis(out) is None else basis


def random_basis_pair(rng: random.Random, n: int | None = None) -> tuple:
    basis = random_strict_basis(rng, n)
    roll = rng.random()
    if roll < 0.4:
        return basis, equivalent_variant(rng, basis), "equivalent-variant"
    if roll < 0.8:
        return basis, perturbed_variant(rng, basis), "perturbed"
    return basis, random_strict_basis(rng, space=basis.space), "independent"


# --------------------------------------------------------------------------
# cylinders


def random_base(rng: random.Random, max_points: int = 4) -> LocallyOrderedSpace:
    if rng.random() < 0.2:
        return make_ultrafilter_space(ultrafilter_points(rng.randint(2, max_points)))
    return LocallyOrderedSpace(random_strict_basis(rng, rng.randint(1, max_points)), "random")


def random_discrete_base(rng: random.Random, n: int | None = None) -> LocallyOrderedSpace:
    n = rng.randint(2, 5) if n is None else n
    return LocallyOrderedSpace(random_strict_basis(rng, space=FinSpace.discrete(range(n))), f"discrete-random:{n}")


def random_cylinder_instance(rng: random.Random, max_base_points: int = 4) -> tuple:
    """A cylinder with a random circle model, base and star, and a random open O around the star."""
    if rng.random() < 0.6:
        circle = DirectedCircle(rng.randint(2, 3))
    else:
        circle = DiscreteCircle(rng.randint(2, 4))
    base = random_base(rng, max_base_points)
    star = rng.choice(sort_points(base.points))
    opens = [o for o in base.space.opens() if star in o]
    O = rng.choice(opens)
    return Cylinder(circle, base, star), O
