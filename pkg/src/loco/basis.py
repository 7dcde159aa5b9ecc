"""Ordered bases on finite spaces.

An ordered basis is a family of posets whose carriers form a basis of the
topology, such that any two members meeting at a point admit a common
refinement around that point.  The saturation of a basis (its greatest
equivalent basis) is never materialised; only membership and restriction
are offered.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable

from .order import (FinSpace, Poset, check_poset, is_closed_relation, label,
                    point_key, product_space, relation_closure, sort_points,
                    subset_key, subspace, transitive_closure)


def poset_key(p: Poset):
    return (subset_key(p.carrier), sorted((point_key(a), point_key(b)) for a, b in p.strict_pairs))


def lax_refines(small: Poset, big: Poset) -> bool:
    """``small`` sits inside ``big`` and every relation of ``small`` holds in ``big``."""
    if not small.carrier <= big.carrier:
        return False
    return small.order <= big.order


def strict_refines(small: Poset, big: Poset) -> bool:
    """``small`` sits inside ``big`` with exactly the restricted order."""
    if not small.carrier <= big.carrier:
        return False
    if not small.order <= big.order:
        return False
    c = small.carrier
    return all(p in small.order for p in big.order if p[0] in c and p[1] in c)


def _refines(strict: bool):
    return strict_refines if strict else lax_refines


@dataclass(frozen=True)
class OrderedBasis:
    space: FinSpace
    elements: tuple
    strict: bool = False

    def __post_init__(self):
        # duplicates are dropped; empty posets are kept but ignored by every check
        elements = tuple(dict.fromkeys(self.elements))
        object.__setattr__(self, "elements", elements)

    def __len__(self):
        return len(self.elements)

    @cached_property
    def containing(self) -> dict:
        """Point -> indices of the elements that contain it, smallest carriers first."""
        out = {x: [] for x in self.space.points}
        for i, b in enumerate(self.elements):
            for x in b.carrier:
                if x in out:
                    out[x].append(i)
        for x in out:
            out[x].sort(key=lambda i: (len(self.elements[i].carrier), len(self.elements[i].order)))
        return {x: tuple(v) for x, v in out.items()}

    def elements_at(self, x) -> list:
        return [self.elements[i] for i in self.containing[x]]

    @cached_property
    def pointwise_orders(self) -> dict:
        """Point -> the least order carried by a member whose carrier is min_open(x).

        In a valid basis this least order exists and determines the
        equivalence class; it drives the fast morphism checks.
        """
        out = {}
        for x in self.space.points:
            u = self.space.min_open[x]
            orders = [self.elements[i].order for i in self.containing[x]
                      if self.elements[i].carrier == u]
            if not orders:
                raise ValueError(f"no basis element with carrier min_open({x!r})")
            least = frozenset.intersection(*orders)
            if least not in orders:
                raise ValueError(f"members on min_open({x!r}) have no least order")
            out[x] = least
        return out

    def with_elements(self, elements: Iterable[Poset], strict: bool | None = None) -> "OrderedBasis":
        return OrderedBasis(self.space, tuple(elements), self.strict if strict is None else strict)

    def to_json(self):
        return {"space": self.space.to_json(),
                "elements": [e.to_json() for e in sorted(self.elements, key=poset_key)],
                "strict": self.strict}


@dataclass(frozen=True)
class BasisViolation:
    kind: str             # "carrier-not-open" | "not-a-basis" | "incompatible" | "bad-order"
    point: object = None
    first: Poset | None = None
    second: Poset | None = None

    def to_json(self):
        out = {"kind": self.kind}
        if self.point is not None:
            out["point"] = label(self.point)
        if self.first is not None:
            out["first"] = self.first.to_json()
        if self.second is not None:
            out["second"] = self.second.to_json()
        return out


def validate_basis(basis: OrderedBasis, strict: bool | None = None) -> BasisViolation | None:
    """Check both axioms of an ordered basis; ``None`` means valid."""
    strict = basis.strict if strict is None else strict
    refines = _refines(strict)
    space = basis.space
    for b in basis.elements:
        if not b.carrier <= space.points or not space.is_open(b.carrier):
            return BasisViolation("carrier-not-open", first=b)
        if check_poset(b.carrier, b.order) is not None:
            return BasisViolation("bad-order", first=b)
    for x in sort_points(space.points):
        if not any(basis.elements[i].carrier == space.min_open[x] for i in basis.containing[x]):
            return BasisViolation("not-a-basis", point=x)
    for x in sort_points(space.points):
        idx = basis.containing[x]
        for a, i in enumerate(idx):
            for j in idx[a + 1:]:
                b1, b2 = basis.elements[i], basis.elements[j]
                meet = b1.carrier & b2.carrier
                if not any(basis.elements[k].carrier <= meet
                           and refines(basis.elements[k], b1) and refines(basis.elements[k], b2)
                           for k in idx):
                    return BasisViolation("incompatible", point=x, first=b1, second=b2)
    return None


def is_valid_basis(basis: OrderedBasis, strict: bool | None = None) -> bool:
    return validate_basis(basis, strict) is None


class BasisMismatch(ValueError):
    pass


def _same_space(a: OrderedBasis, b: OrderedBasis):
    if a.space != b.space:
        raise BasisMismatch("bases live on different spaces")


def is_coarser(coarse: OrderedBasis, fine: OrderedBasis, strict: bool = False) -> bool:
    """Every member of ``coarse`` around x contains a member of ``fine`` around x below it."""
    _same_space(coarse, fine)
    refines = _refines(strict)
    for x in coarse.space.points:
        for bp in coarse.elements_at(x):
            if not any(refines(b, bp) for b in fine.elements_at(x)):
                return False
    return True


def is_equivalent(first: OrderedBasis, second: OrderedBasis) -> bool:
    return is_coarser(first, second) and is_coarser(second, first)


def is_strictly_equivalent(first: OrderedBasis, second: OrderedBasis) -> bool:
    return is_coarser(first, second, strict=True) and is_coarser(second, first, strict=True)


def in_saturation(candidate: Poset, basis: OrderedBasis) -> bool:
    """Whether ``candidate`` is an open poset of the locally ordered space of ``basis``."""
    space = basis.space
    if not candidate.carrier <= space.points or not space.is_open(candidate.carrier):
        return False
    return all(any(lax_refines(b, candidate) for b in basis.elements_at(x))
               for x in candidate.carrier)


def saturation_restrict(member: Poset, sub: Iterable, basis: OrderedBasis) -> Poset:
    """Restriction of an open poset to an open subset of its carrier."""
    sub = frozenset(sub)
    if not in_saturation(member, basis):
        raise ValueError("poset is not in the saturation of the basis")
    if not sub <= member.carrier or not basis.space.is_open(sub):
        raise ValueError("restriction target must be an open subset of the carrier")
    out = member.restrict(sub)
    assert in_saturation(out, basis)
    return out


def minimal_saturation_order(basis: OrderedBasis, carrier: Iterable) -> frozenset | None:
    """Least order making ``carrier`` an open poset, or ``None`` if there is none."""
    carrier = frozenset(carrier)
    if not basis.space.is_open(carrier):
        return None
    orders = basis.pointwise_orders
    rel = set((x, x) for x in carrier)
    for y in carrier:
        rel |= orders[y]
    closure = transitive_closure(rel, carrier)
    if not closure.antisymmetric:
        return None
    return closure.relation


def product_poset(a: Poset, b: Poset) -> Poset:
    carrier = frozenset(product(a.carrier, b.carrier))
    order = frozenset(((x, y), (xp, yp)) for (x, xp) in a.order for (y, yp) in b.order)
    return Poset(carrier, order)


def product_basis(first: OrderedBasis, second: OrderedBasis) -> OrderedBasis:
    space = product_space(first.space, second.space)
    elements = tuple(product_poset(a, b) for a in first.elements for b in second.elements
                     if a.carrier and b.carrier)
    return OrderedBasis(space, elements, first.strict and second.strict)


def subspace_basis(basis: OrderedBasis, pts: Iterable) -> OrderedBasis:
    pts = frozenset(pts)
    space = subspace(basis.space, pts)
    elements = tuple(sorted({b.restrict(pts) for b in basis.elements if b.carrier & pts}, key=poset_key))
    return OrderedBasis(space, elements, basis.strict)


def canonical_basis(space: FinSpace, all_opens: bool = True) -> OrderedBasis:
    """Open sets with the equality order; a strict basis of any finite space."""
    if all_opens:
        carriers = [o for o in space.opens() if o]
    else:
        carriers = sorted(set(space.min_open.values()), key=subset_key)
    return OrderedBasis(space, tuple(Poset.discrete(c) for c in carriers), True)


def is_nachbin(poset: Poset, space: FinSpace) -> bool:
    """Whether the order of ``poset`` is closed in its subspace topology."""
    return is_closed_relation(poset.order, subspace(space, poset.carrier))


def _smallest_closed_order(lower: frozenset, space: FinSpace, carrier: frozenset) -> frozenset | None:
    """Smallest closed transitive relation containing ``lower`` on ``carrier``, if antisymmetric."""
    sub = subspace(space, carrier)
    rel = frozenset(lower)
    while True:
        nxt = transitive_closure(relation_closure(rel, sub), carrier).relation
        if nxt == rel:
            break
        rel = nxt
    if not transitive_closure(rel, carrier).antisymmetric:
        return None
    return rel


def is_locally_nachbin(basis: OrderedBasis, method: str | None = None) -> bool:
    """Every point has arbitrarily small open posets with closed order.

    ``method="strict"`` applies the characterisation for strict bases (some
    member around each point has a closed order); ``method="full"`` decides
    the definition itself.  By default strict bases use the former.
    """
    if method is None:
        method = "strict" if basis.strict else "full"
    space = basis.space
    if method == "strict":
        return all(any(is_nachbin(b, space) for b in basis.elements_at(x)) for x in space.points)
    # Full definition.  It suffices to test members of the basis as the outer
    # open poset, and open posets carried by min_open(x) as the inner one; the
    # least candidate order there is the closed transitive hull of the
    # pointwise orders, so the search is exact.
    orders = basis.pointwise_orders
    for x in space.points:
        u = space.min_open[x]
        lower = set((y, y) for y in u)
        for y in u:
            lower |= orders[y]
        hull = _smallest_closed_order(frozenset(lower), space, u)
        if hull is None:
            return False
        for b in basis.elements_at(x):
            if not hull <= b.order:
                return False
    return True
