"""Section-collapsing quotients of directed cylinders and their coequalizer status.

For an open neighbourhood O of the star level, the quotient X_O keeps the
base points of O and every cylinder point (s, t) with t outside O.  Its
topology is the final one of the quotient map, generated by the sets
U(arc, A); each generator carries the transitive closure of the image of
the product order, computed twice (closed form and generic closure) and
compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .basis import OrderedBasis, is_locally_nachbin, validate_basis
from .circles import Cylinder
from .losp import LocallyOrderedSpace, LocMap, compute_K
from .order import (FinSpace, Poset, image_space, is_order_convex, label, sort_points,
                    subset_key, transitive_closure)

FLAVORS = ("locord", "locord-h", "nachbin", "nachbin-h")
FLAVOR_NAMES = {
    "locord": "locally ordered spaces",
    "locord-h": "locally ordered Hausdorff spaces",
    "nachbin": "locally Nachbin ordered spaces",
    "nachbin-h": "locally Nachbin ordered Hausdorff spaces",
}


class QuotientError(ValueError):
    pass


def is_pair(u) -> bool:
    return isinstance(u, tuple)


def second(u):
    return u[1] if is_pair(u) else u


def convexity_holds(O: frozenset, basis: OrderedBasis) -> bool:
    """Whether (X minus O) meets every basis element in an order-convex set."""
    return all(is_order_convex(b.carrier - O, b) for b in basis.elements)


def repair_basis(O: frozenset, basis: OrderedBasis) -> OrderedBasis:
    """Keep the elements lying inside O or inside its complement (O clopen)."""
    if not basis.space.is_clopen(O):
        raise QuotientError("basis repair needs a clopen O")
    kept = tuple(b for b in basis.elements if b.carrier <= O or not (b.carrier & O))
    return basis.with_elements(kept)


@dataclass(frozen=True)
class Generator:
    arc: Poset
    level: Poset          # the base open poset A
    carrier: frozenset
    below: frozenset      # the relation before closing
    order: frozenset
    convex: bool


def _below(u, v, O, arc: Poset, level: Poset) -> bool:
    if (second(u), second(v)) not in level.order:
        return False
    if not is_pair(u) or not is_pair(v):
        return True
    return (u[0], v[0]) in arc.order


def build_generator(arc: Poset, level: Poset, O: frozenset, q: Mapping) -> Generator:
    inside = level.carrier & O
    carrier = frozenset(inside) | frozenset((s, t) for s in arc.carrier for t in level.carrier - O)
    pts = sort_points(carrier)
    below = frozenset((u, v) for u in pts for v in pts if _below(u, v, O, arc, level))

    # image of the product order, which must be the relation above
    image = frozenset((q[(s, t)], q[(s2, t2)]) for s, s2 in arc.order for t, t2 in level.order)
    if image != below:
        raise AssertionError("image of the product order differs from the closed-form relation")

    closed_form = set(below)
    for u in pts:
        for v in pts:
            if (u, v) not in below and any((u, w) in below and (w, v) in below for w in inside):
                closed_form.add((u, v))
    closure = transitive_closure(below, carrier)
    if not closure.antisymmetric:
        raise AssertionError(f"generator order is not antisymmetric: {closure.cycle!r}")
    if closure.relation != frozenset(closed_form):
        raise AssertionError("closed-form order differs from the transitive closure")
    convex = is_order_convex(level.carrier - O, level)
    if convex and closure.relation != below:
        raise AssertionError("order-convex generator needed closing")
    return Generator(arc, level, carrier, below, closure.relation, convex)


class QuotientSpace:
    """The space X_O with its generated ordered basis and its quotient map."""

    def __init__(self, cylinder: Cylinder, O, repair: bool = True):
        base = cylinder.base
        O = frozenset(O)
        if not O <= base.points or not base.space.is_open(O):
            raise QuotientError("O must be an open subset of the base")
        if cylinder.star not in O:
            raise QuotientError("O must contain the star level")
        self.cylinder = cylinder
        self.O = O

        basis = base.basis
        self.convex = convexity_holds(O, basis)
        self.repaired = False
        if basis.strict and not self.convex and repair and base.space.is_clopen(O):
            basis = repair_basis(O, basis)
            self.repaired = True
            assert convexity_holds(O, basis) and validate_basis(basis) is None
        # a strict basis may only be claimed when the side condition holds
        self.strict = basis.strict and convexity_holds(O, basis)
        self.strict_undecided = basis.strict and not self.strict
        self.level_basis = basis

        circle = cylinder.circle
        self.carrier = frozenset(O) | frozenset((s, t) for s in circle.points for t in base.points - O)
        assert not any(is_pair(t) for t in O)
        self.q = {(s, t): (t if t in O else (s, t)) for s in circle.points for t in base.points}

        gens = []
        for arc in circle.arcs:
            for level in basis.elements:
                if level.carrier:
                    gens.append(build_generator(arc, level, O, self.q))
        self.generators = tuple(gens)

        self.space = image_space(cylinder.space, self.q, self.carrier)
        generated = FinSpace.from_opens(self.carrier, [g.carrier for g in gens])
        if generated != self.space:
            raise AssertionError("generators do not produce the final topology")

        elements = tuple(sorted({Poset(g.carrier, g.order) for g in gens},
                                key=lambda p: (subset_key(p.carrier), len(p.order))))
        self.basis = OrderedBasis(self.space, elements, self.strict)
        violation = validate_basis(self.basis)
        if violation is not None:
            raise AssertionError(f"quotient basis is invalid: {violation.kind} at {violation.point!r}")

    @cached_property
    def lpo(self) -> LocallyOrderedSpace:
        return LocallyOrderedSpace(self.basis, "X_O")

    @cached_property
    def q_map(self) -> LocMap:
        m = LocMap(self.cylinder.lpo, self.lpo, self.q, "q_O")
        failure = m.first_failure()
        if failure is not None:
            raise AssertionError(f"q_O is not locally increasing at {failure.point!r}")
        return m

    @property
    def K(self) -> frozenset:
        return compute_K(self.q)

    def to_json(self, generators: bool = True):
        out = {"O": [label(t) for t in sort_points(self.O)],
               "carrier": [label(u) for u in sort_points(self.carrier)],
               "strict": self.strict,
               "repaired_basis": self.repaired,
               "order_convex": self.convex}
        if generators:
            out["generators"] = [
                {"arc": [label(s) for s in g.arc.sorted_carrier()],
                 "level": [label(t) for t in g.level.sorted_carrier()],
                 "order": Poset(g.carrier, g.order).to_json()}
                for g in self.generators]
        return out


def build_quotient(cylinder: Cylinder, O, repair: bool = True) -> QuotientSpace:
    return QuotientSpace(cylinder, O, repair)


# --------------------------------------------------------------------------
# factorisation


@dataclass
class Factorization:
    ok: bool
    h: LocMap | None = None
    reason: str = ""
    witness: object = None
    unique: bool = False

    def to_json(self):
        out = {"ok": self.ok, "unique": self.unique, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = label(self.witness)
        if self.h is not None:
            out["h"] = self.h.to_json()["map"]
        return out


def factor_mapping(Q: QuotientSpace, f: Mapping) -> dict | None:
    """The unique map h with f = h after q_O, or None when f is not constant on fibres."""
    h = {}
    for x, u in Q.q.items():
        if h.setdefault(u, f[x]) != f[x]:
            return None
    return h


def factor_through(Q: QuotientSpace, f: LocMap) -> Factorization:
    cyl = Q.cylinder
    if not f.is_locally_increasing:
        return Factorization(False, reason="f is not locally increasing", witness=f.first_failure().point)
    if not cyl.coequalizes(f.mapping):
        return Factorization(False, reason="f does not coequalize i_star and c_star")
    K = compute_K(f.mapping)
    missing = sort_points(Q.O - K)
    if missing:
        return Factorization(False, reason="O is not contained in K(f)", witness=missing[0])
    h = factor_mapping(Q, f.mapping)
    assert h is not None
    hm = LocMap(Q.lpo, f.target, h, "h")
    failure = hm.first_failure()
    if failure is not None:
        raise AssertionError(f"factor is not locally increasing at {failure.point!r}")
    # q_O is surjective, hence h is the only candidate
    unique = set(Q.q.values()) == Q.carrier
    return Factorization(True, hm, unique=unique)


# --------------------------------------------------------------------------
# coequalizer decisions


@dataclass
class CoeqDecision:
    flavor: str
    strict: bool
    status: str                # "exists" | "n/a" | "undecided"
    O_min: frozenset | None = None
    quotient: QuotientSpace | None = None
    witness: str = ""
    hypotheses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def exists(self):
        return {"exists": True, "undecided": None}.get(self.status, None)

    def to_json(self, generators: bool = False):
        out = {"flavor": self.flavor, "category": ("strictly " if self.strict else "") + FLAVOR_NAMES[self.flavor],
               "strict": self.strict, "status": self.status, "exists": self.exists,
               "O_min": None if self.O_min is None else [label(t) for t in sort_points(self.O_min)],
               "witness": self.witness, "hypotheses": dict(self.hypotheses), "notes": list(self.notes)}
        if self.quotient is not None:
            out["quotient"] = self.quotient.to_json(generators)
        return out


def smallest_neighbourhood(cylinder: Cylinder, flavor: str) -> frozenset:
    space = cylinder.base.space
    if flavor == "locord":
        return space.min_open[cylinder.star]
    return space.component_of(cylinder.star)


def decide_coequalizer(cylinder: Cylinder, flavor: str = "locord", strict: bool = False) -> CoeqDecision:
    """Coequalizer of i_star and c_star in the requested category.

    Finite spaces always have a least open and a least clopen neighbourhood
    of the star, so a refusal here only comes from category membership
    (Nachbin flavors over a base that is not locally Nachbin) or from an
    unverifiable strictness side condition.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    base = cylinder.base
    hyp = {"base_hausdorff": base.space.is_hausdorff(),
           "base_locally_nachbin": is_locally_nachbin(base.basis),
           "base_strict": base.strict}
    decision = CoeqDecision(flavor, strict, "exists", hypotheses=hyp)
    decision.notes.append("finite spaces always have a smallest open and a smallest clopen neighbourhood")

    if flavor.startswith("nachbin") and not hyp["base_locally_nachbin"]:
        decision.status = "n/a"
        decision.notes.append("the base is not locally Nachbin, so the cylinder is outside the category")
        return decision
    if strict and not base.strict:
        decision.status = "n/a"
        decision.notes.append("the base basis is not strict")
        return decision

    O = smallest_neighbourhood(cylinder, flavor)
    decision.O_min = O
    Q = build_quotient(cylinder, O)
    decision.quotient = Q
    if strict and Q.strict_undecided:
        decision.status = "undecided"
        decision.notes.append("order-convexity fails and O is not clopen; strictness of X_O is not established")
    if O == base.points:
        decision.witness = "p2"
    else:
        decision.witness = "q_O"
    q = Q.q_map
    assert compute_K(q.mapping) == O
    hyp["quotient_hausdorff"] = Q.space.is_hausdorff()
    if flavor.startswith("nachbin"):
        hyp["quotient_locally_nachbin"] = is_locally_nachbin(Q.basis)
    return decision


# --------------------------------------------------------------------------
# separation properties of X_O


@dataclass
class PropsReport:
    O_closed: bool
    quotient_hausdorff: bool
    quotient_locally_nachbin: bool
    hypotheses: dict

    @property
    def hausdorff_iff_closed(self) -> bool:
        return self.quotient_hausdorff == self.O_closed

    @property
    def nachbin_iff_closed(self) -> bool:
        return self.quotient_locally_nachbin == self.O_closed

    def to_json(self):
        return {"O_closed": self.O_closed, "quotient_hausdorff": self.quotient_hausdorff,
                "quotient_locally_nachbin": self.quotient_locally_nachbin,
                "hausdorff_iff_closed": self.hausdorff_iff_closed,
                "nachbin_iff_closed": self.nachbin_iff_closed,
                "hypotheses": dict(self.hypotheses)}


def verify_hausdorff_nachbin_props(Q: QuotientSpace) -> PropsReport:
    base = Q.cylinder.base
    circle = Q.cylinder.circle
    hyp = {"base_hausdorff": base.space.is_hausdorff(),
           "base_locally_nachbin": is_locally_nachbin(base.basis),
           "circle_hausdorff": circle.space.is_hausdorff()}
    return PropsReport(base.space.is_closed(Q.O), Q.space.is_hausdorff(),
                       is_locally_nachbin(Q.basis), hyp)


def topological_quotient(cylinder: Cylinder) -> tuple:
    """Set-level quotient collapsing only the star section, with its final topology."""
    star = cylinder.star
    mapping = {p: (star if p[1] == star else p) for p in cylinder.points}
    carrier = frozenset(mapping.values())
    return carrier, image_space(cylinder.space, mapping, carrier)

