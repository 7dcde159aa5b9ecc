"""The zebra cylinder: directed loops only at striped levels.

Levels form a Khalimsky interval 0..M with level 0 closed, so its smallest
open neighbourhood is {0, 1}.  Stripes are disjoint level intervals
descending toward 0; on a striped level (and on level 0) sections are
ordered along the arcs, everywhere else the order is equality.  Collapsing
a prefix [0, top] of levels gives the family of quotients X_n and maps f_n
whose collapsed sets shrink toward 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .basis import OrderedBasis, validate_basis
from .circles import Circle, DirectedCircle, khalimsky_interval
from .losp import LocallyOrderedSpace, LocMap, compute_K
from .order import FinSpace, Poset, image_space, label, sort_points, subset_key

SHORT_INTERVAL = 5


class StripeError(ValueError):
    pass


def parse_stripes(text: str) -> list:
    stripes = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition("-")
        if not sep:
            lo = hi = chunk
        if not (lo.isdigit() and hi.isdigit()):
            raise StripeError(f"bad stripe {chunk!r}")
        stripes.append((int(lo), int(hi)))
    return stripes


def format_stripes(stripes) -> str:
    return ",".join(f"{lo}-{hi}" for lo, hi in stripes)


def check_stripes(stripes, levels: int):
    """Stripes must descend, stay inside 1..levels, and leave room above each top.

    Above an even top one unstriped level is needed, above an odd top two:
    the minimal open set of the first level above the collapse must not
    reach a striped level.
    """
    prev_lo = None
    for lo, hi in stripes:
        if not 1 <= lo <= hi <= levels:
            raise StripeError(f"stripe {lo}-{hi} is outside 1..{levels}")
        if prev_lo is not None:
            gap = 1 if hi % 2 == 0 else 2
            if hi + gap >= prev_lo:
                raise StripeError(f"stripe {lo}-{hi} is too close to the stripe above it")
        prev_lo = lo


def fit_stripes(levels: int, count: int = 3) -> list:
    """``count`` geometrically spaced stripes plus a final stripe on level 1.

    Tops run from ``levels`` down to 4; each stripe takes about a third of
    the room down to the next top.
    """
    if count == 0:
        return [(1, 1)]
    if levels < 8:
        raise StripeError("fitting stripes needs at least 8 levels")
    if count == 1:
        tops = [levels]
    else:
        tops = [round(levels * (4 / levels) ** (n / (count - 1))) for n in range(count)]
    tops.append(1)
    stripes = []
    for n in range(count):
        width = max(1, (tops[n] - tops[n + 1]) // 3)
        stripes.append((tops[n] - width + 1, tops[n]))
    stripes.append((1, 1))
    for n in range(count - 1, -1, -1):
        # shrink until the stripe below fits under this one
        while True:
            try:
                check_stripes(stripes, levels)
                break
            except StripeError:
                lo, hi = stripes[n]
                if lo == hi:
                    raise
                stripes[n] = (lo + 1, hi)
    check_stripes(stripes, levels)
    return stripes


def level_opens(levels: int) -> list:
    """Minimal opens and short open intervals of the level interval."""
    space = khalimsky_interval(levels)
    out = set(space.min_open.values())
    for a in range(levels + 1):
        for b in range(a, min(levels, a + SHORT_INTERVAL - 1) + 1):
            iv = frozenset(range(a, b + 1))
            if space.is_open(iv):
                out.add(iv)
    return sorted(out, key=subset_key)


class ZebraCylinder:
    def __init__(self, circle: Circle, levels: int, stripes):
        self.circle = circle
        self.levels = levels
        self.stripes = [tuple(s) for s in stripes]
        check_stripes(self.stripes, levels)
        self.striped = frozenset(t for lo, hi in self.stripes for t in range(lo, hi + 1))
        self.looped = self.striped | {0}
        self.level_space = khalimsky_interval(levels)

    @property
    def star(self):
        return 0

    def stripe_levels(self, n: int) -> frozenset:
        lo, hi = self.stripes[n]
        return frozenset(range(lo, hi + 1))

    def order_on(self, arc: Poset, A) -> Poset:
        carrier = frozenset((s, t) for s in arc.carrier for t in A)
        order = frozenset(((s, t), (s2, t)) for t in A for s, s2 in arc.order
                          if s == s2 or t in self.looped)
        return Poset(carrier, order)

    @cached_property
    def lpo(self) -> LocallyOrderedSpace:
        cb = self.circle.lpo.basis
        space = FinSpace({(s, t): frozenset((a, b) for a in cb.space.min_open[s]
                                            for b in self.level_space.min_open[t])
                          for s in cb.space.points for t in self.level_space.points})
        elements = tuple(self.order_on(arc, A) for arc in cb.elements for A in level_opens(self.levels))
        return LocallyOrderedSpace(OrderedBasis(space, elements, True), "zebra")

    @property
    def points(self):
        return self.lpo.points

    def coequalizes(self, f) -> bool:
        c = self.circle.basepoint
        return all(f[(s, 0)] == f[(c, 0)] for s in self.circle.points)

    def sections_isomorphic(self) -> bool:
        """Within a stripe every level carries the same section order."""
        basis = self.lpo.basis
        for lo, hi in self.stripes:
            shapes = set()
            for t in range(lo, hi + 1):
                shape = []
                for b in basis.elements:
                    pairs = sorted((a[0], c[0]) for a, c in b.strict_pairs if a[1] == t)
                    if pairs:
                        shape.append(tuple(pairs))
                shapes.add(tuple(sorted(set(shape))))
            if len(shapes) > 1:
                return False
        return True

    def to_json(self):
        return {"circle": self.circle.notation, "levels": self.levels, "stripes": format_stripes(self.stripes)}


def make_zebra(circle: Circle | None = None, levels: int = 16, stripes=None, count: int = 3) -> ZebraCylinder:
    circle = DirectedCircle(2) if circle is None else circle
    if stripes is None:
        stripes = fit_stripes(levels, count)
    elif isinstance(stripes, str):
        stripes = parse_stripes(stripes)
    return ZebraCylinder(circle, levels, stripes)


# --------------------------------------------------------------------------
# collapsing a prefix of levels


@dataclass
class Collapse:
    top: int                     # levels 0..top are collapsed
    X: LocallyOrderedSpace | None
    f: dict
    K: frozenset
    locally_increasing: bool
    failure: object = None

    def to_json(self):
        return {"top": self.top, "K": [label(t) for t in sort_points(self.K)],
                "locally_increasing": self.locally_increasing,
                "failure": None if self.failure is None else label(self.failure)}


def _saturated_open_hull(Z: ZebraCylinder, f: dict, fibres: dict, start) -> frozenset:
    space = Z.lpo.space
    hull = set(start)
    while True:
        grown = set(hull)
        for p in hull:
            grown |= space.min_open[p]
            grown |= fibres[f[p]]
        if grown == hull:
            return frozenset(hull)
        hull = grown


def collapse_prefix(Z: ZebraCylinder, top: int, check: bool = True) -> Collapse:
    """Quotient collapsing each section at a level <= top to that level.

    Generators are images of the smallest saturated open sets around
    arc x A.  They carry equality once they contain a collapsed level, and
    the zebra order otherwise.  Around the collapse only level opens free of
    striped levels above ``top`` are used; other ones would force an
    equality order onto a directed section.
    """
    f = {(s, t): (t if t <= top else (s, t)) for s, t in Z.points}
    fibres = {}
    for p, u in f.items():
        fibres.setdefault(u, set()).add(p)
    carrier = frozenset(f.values())
    space = image_space(Z.lpo.space, f, carrier)

    elements = set()
    for arc in Z.circle.arcs:
        for A in level_opens(Z.levels):
            start = frozenset((s, t) for s in arc.carrier for t in A)
            hull = _saturated_open_hull(Z, f, fibres, start)
            image = frozenset(f[p] for p in hull)
            if any(not isinstance(u, tuple) for u in image):
                if any(p[1] > top and p[1] in Z.striped for p in hull):
                    continue
                elements.add(Poset.discrete(image))
            else:
                elements.add(Z.order_on(arc, {p[1] for p in hull}).restrict(image))
    elements = tuple(sorted(elements, key=lambda p: (subset_key(p.carrier), len(p.order))))
    basis = OrderedBasis(space, elements, True)
    K = compute_K(f)
    violation = validate_basis(basis)
    if violation is not None:
        return Collapse(top, None, f, K, False, violation.point)
    X = LocallyOrderedSpace(basis, f"X[{top}]")
    if not check:
        return Collapse(top, X, f, K, True)
    m = LocMap(Z.lpo, X, f, f"f[{top}]")
    failure = m.first_failure()
    return Collapse(top, X, f, K, failure is None, None if failure is None else failure.point)


def collapse_zero(Z: ZebraCylinder) -> Collapse:
    """The would-be limit of the family: collapse level 0 alone.

    Built with the same recipe; when level 1 is striped no ordered basis
    makes it locally increasing, which the result records.
    """
    return collapse_prefix(Z, 0)


def f_family(Z: ZebraCylinder) -> list:
    """f_n for each stripe, collapsing up to the top of stripe n, then the level-0 collapse."""
    out = [collapse_prefix(Z, hi) for lo, hi in Z.stripes]
    out.append(collapse_zero(Z))
    return out


# --------------------------------------------------------------------------
# spreading of the collapse


@dataclass
class SpreadCheck:
    earliest: int | None          # least n with every stripe m >= n inside K(f)
    near_zero: list               # indices of stripes inside the minimal open set of level 0
    confirmed: bool

    def to_json(self):
        return {"earliest": self.earliest, "near_zero": self.near_zero, "confirmed": self.confirmed}


def zebra_spread_check(Z: ZebraCylinder, f) -> SpreadCheck:
    if not Z.coequalizes(f):
        raise ValueError("f does not collapse the section at level 0")
    K = compute_K(f)
    inside = [Z.stripe_levels(n) <= K for n in range(len(Z.stripes))]
    earliest = None
    for n in range(len(inside) - 1, -1, -1):
        if not inside[n]:
            break
        earliest = n
    u0 = Z.level_space.min_open[0]
    near = [n for n in range(len(Z.stripes)) if Z.stripe_levels(n) <= u0]
    return SpreadCheck(earliest, near, all(inside[n] for n in near))


def coequalizer_top(Z: ZebraCylinder) -> int:
    """Top of the prefix collapsed by the finite coequalizer.

    Level 0 is collapsed, and so is every striped level of its minimal open
    set: a directed section inside every neighbourhood of the collapsed
    loop is forced to collapse as well.
    """
    u0 = Z.level_space.min_open[0]
    return max({0} | (Z.striped & u0))


# --------------------------------------------------------------------------
# report over resolutions


NONEXISTENCE = ("not reproducible at desk scale: the absence of a coequalizer is a statement "
                "about an infinite descending family of stripes; each finite model has one, "
                "and what is shown is the shrinking of the collapsed sets with resolution "
                "together with the stripe next to level 0 that every coequalizing map collapses")


def zebra_row(Z: ZebraCylinder) -> dict:
    """The collapse family, its K sets and the coequalizer of one zebra cylinder."""
    family = f_family(Z)
    Ks = [c.K for c in family]
    top = coequalizer_top(Z)
    coeq = collapse_prefix(Z, top)
    O_min = Z.level_space.min_open[0]
    return {
        "levels": Z.levels,
        "stripes": format_stripes(Z.stripes),
        "O_min": [label(t) for t in sort_points(O_min)],
        "O_min_fraction": round(len(O_min) / (Z.levels + 1), 6),
        "family": [dict(c.to_json(), name=(f"f_{i}" if i < len(family) - 1 else "f_inf"))
                   for i, c in enumerate(family)],
        "K_strictly_decreasing": all(Ks[i] > Ks[i + 1] for i in range(len(Ks) - 1)),
        "K_intersection": [label(t) for t in sort_points(frozenset.intersection(*Ks))],
        "coequalizer": {"top": top, "K": [label(t) for t in sort_points(coeq.K)],
                        "locally_increasing": coeq.locally_increasing},
        "spread_check": zebra_spread_check(Z, coeq.f).to_json(),
        "spread_checks_family": [zebra_spread_check(Z, c.f).to_json() for c in family[:-1]],
        "sections_isomorphic": Z.sections_isomorphic(),
    }


def zebra_report(resolutions=(8, 16, 32), count: int = 3, circle: Circle | None = None) -> dict:
    return {"kind": "zebra-report", "resolutions": list(resolutions),
            "rows": [zebra_row(make_zebra(circle, M, count=count)) for M in resolutions],
            "nonexistence": NONEXISTENCE}
