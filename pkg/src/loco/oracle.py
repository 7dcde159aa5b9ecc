"""Brute-force oracles: the universal property of X_O and open collapse of coequalizing maps.

Exhaustive mode reduces "every target with every map" to images: a
coequalizing map f out of the cylinder factors through the set C/~ obtained
by gluing the star section, and f is locally increasing into Y exactly when
it is locally increasing into its image with the induced structure.  So it
suffices to enumerate the partitions of C/~ and, for each, the labeled
locally ordered structures on the blocks for which f is locally increasing.
Those structures are produced directly by a constraint search, since the
local-increase conditions are lower bounds on minimal opens and orders.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .coeq import QuotientSpace, factor_mapping
from .enumeration import basis_from_family, locally_increasing_maps, lpo_targets
from .losp import (LocallyOrderedSpace, compute_K, is_locally_increasing_at,
                   is_locally_increasing_fast, is_strongly_connected)
from .order import FinSpace, label, sort_points

EXHAUSTIVE_LIMIT = 12


# --------------------------------------------------------------------------
# relations above a lower bound


def transitive_supersets(points: list, required: Iterable, antisymmetric: bool = False) -> Iterator[frozenset]:
    """Every reflexive transitive relation on ``points`` containing ``required``.

    Include/exclude branching over the off-diagonal pairs in a fixed order,
    closing under transitivity after each inclusion; every relation is
    produced exactly once.
    """
    points = sort_points(points)
    pairs = [(a, b) for a in points for b in points if a != b]
    succ = {x: {x} for x in points}
    pred = {x: {x} for x in points}

    def add(a, b, log):
        # add (a, b) and everything transitivity forces; record additions
        new = [(x, y) for x in pred[a] for y in succ[b] if y not in succ[x]]
        for x, y in new:
            succ[x].add(y)
            pred[y].add(x)
            log.append((x, y))

    def undo(log):
        for x, y in log:
            succ[x].discard(y)
            pred[y].discard(x)

    base = []
    for a, b in required:
        if a != b and b not in succ[a]:
            add(a, b, base)
    if antisymmetric and any(y != x and x in succ[y] for x in points for y in succ[x]):
        return
    excluded = set()

    def violates(log):
        for x, y in log:
            if (x, y) in excluded:
                return True
            if antisymmetric and x in succ[y]:
                return True
        return False

    def search(i):
        if i == len(pairs):
            yield frozenset((x, y) for x in points for y in succ[x])
            return
        a, b = pairs[i]
        if b in succ[a]:
            yield from search(i + 1)
            return
        excluded.add((a, b))
        yield from search(i + 1)
        excluded.discard((a, b))
        log = []
        add(a, b, log)
        if not violates(log):
            yield from search(i + 1)
        undo(log)

    yield from search(0)


def structures_above(k: int, open_lower: Mapping, order_lower: Mapping) -> Iterator[LocallyOrderedSpace]:
    """Labeled locally ordered structures on range(k) whose least data dominate the bounds.

    ``open_lower[y]`` must lie in the minimal open set of y and
    ``order_lower[y]`` (strict pairs) in the least order there.
    """
    points = list(range(k))
    required = {(z, y) for y in points for z in open_lower.get(y, ())}
    for rel in transitive_supersets(points, required):
        space = FinSpace({x: {y for y in points if (y, x) in rel} for x in points})
        if any(not {a, b} <= space.min_open[y] for y in points for a, b in order_lower.get(y, ())):
            continue
        for family in _families_above(space, order_lower):
            yield LocallyOrderedSpace(basis_from_family(space, family))


def _families_above(space: FinSpace, order_lower: Mapping) -> Iterator[dict]:
    pts = sorted(space.points, key=lambda x: (len(space.min_open[x]), x))
    groups, seen = [], {}
    for x in pts:
        u = space.min_open[x]
        if u in seen:
            seen[u].append(x)
        else:
            seen[u] = [x]
            groups.append(seen[u])
    chosen = {}

    def extend(i):
        if i == len(groups):
            yield dict(chosen)
            return
        u = space.min_open[groups[i][0]]
        required = set()
        for y in groups[i]:
            required |= set(order_lower.get(y, ()))
        for z in u:
            if z in chosen:
                required |= chosen[z]
        for rel in transitive_supersets(sort_points(u), required, antisymmetric=True):
            strict = frozenset(p for p in rel if p[0] != p[1])
            for y in groups[i]:
                chosen[y] = strict
            yield from extend(i + 1)
        for y in groups[i]:
            chosen.pop(y, None)

    yield from extend(0)


def set_partitions(items: list, max_blocks: int) -> Iterator[list]:
    """Restricted-growth enumeration; each partition once, blocks numbered by first element."""
    n = len(items)
    codes = [0] * n

    def rec(i, used):
        if i == n:
            yield list(codes)
            return
        for b in range(min(used + 1, max_blocks)):
            codes[i] = b
            yield from rec(i + 1, max(used, b + 1))

    if n == 0:
        yield []
        return
    yield from rec(0, 0)


# --------------------------------------------------------------------------
# the universal property of X_O


@dataclass
class OracleVerdict:
    status: str                      # "pass" | "fail" | "inconclusive-sampled"
    mode: str
    bound: int
    partitions: int = 0
    targets: int = 0
    maps: int = 0
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"status": self.status, "mode": self.mode, "max_target_points": self.bound,
                "partitions": self.partitions, "targets": self.targets, "maps": self.maps,
                "failures": list(self.failures)}


def _glued_classes(Q: QuotientSpace) -> tuple:
    cyl = Q.cylinder
    star_section = frozenset((s, cyl.star) for s in cyl.circle.points)
    classes = [star_section] + [frozenset([p]) for p in sort_points(cyl.points) if p not in star_section]
    return classes


def _check_candidate(Q: QuotientSpace, f: dict, Y: LocallyOrderedSpace) -> str | None:
    h = factor_mapping(Q, f)
    if h is None:
        return "no factorization: f is not constant on the fibres of q_O"
    for u in sort_points(Q.carrier):
        if not is_locally_increasing_at(h, u, Q.lpo, Y):
            return f"factor is not locally increasing at {label(u)}"
    return None


def _failure_record(f: dict, Y: LocallyOrderedSpace, reason: str) -> dict:
    return {"reason": reason,
            "target": Y.space.to_json(),
            "target_orders": {label(y): [[label(a), label(b)] for a, b in sorted(o) if a != b]
                              for y, o in sorted(Y.basis.pointwise_orders.items())},
            "map": {label(p): label(f[p]) for p in sort_points(f)}}


def _structures_for(Q: QuotientSpace, classes: list, codes: list) -> tuple:
    """The map induced by a partition and the structures on its blocks making it locally increasing."""
    cyl = Q.cylinder
    src = cyl.lpo
    block = {}
    for cls, b in zip(classes, codes):
        for p in cls:
            block[p] = b
    k = max(codes) + 1
    open_lower = {y: set() for y in range(k)}
    order_lower = {y: set() for y in range(k)}
    orders = src.basis.pointwise_orders
    for p in src.points:
        y = block[p]
        open_lower[y] |= {block[r] for r in src.space.min_open[p]}
        for a, b in orders[p]:
            if block[a] != block[b]:
                order_lower[y].add((block[a], block[b]))
    return block, k, open_lower, order_lower


def universal_property_oracle(Q: QuotientSpace, mode: str = "exhaustive", budget: int = 2000,
                              seed: int = 0, max_target_points: int | None = None,
                              max_failures: int = 5) -> OracleVerdict:
    """Check that q_O is initial among coequalizing locally increasing maps.

    Every coequalizing map f into a target of at most ``max_target_points``
    points (default: the size of X_O) must factor as h after q_O with h
    locally increasing; uniqueness follows from surjectivity of q_O.
    """
    cyl = Q.cylinder
    bound = len(Q.carrier) if max_target_points is None else max_target_points
    classes = _glued_classes(Q)
    if mode == "exhaustive" and len(cyl.points) > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive mode is limited to cylinders of at most {EXHAUSTIVE_LIMIT} points")
    assert set(Q.q.values()) == Q.carrier

    verdict = OracleVerdict("pass", mode, bound)
    if mode == "exhaustive":
        partitions = set_partitions(classes, bound)
    else:
        rng = random.Random(seed)
        partitions = (_random_partition(rng, len(classes), bound) for _ in range(budget))

    for codes in partitions:
        verdict.partitions += 1
        block, k, open_lower, order_lower = _structures_for(Q, classes, codes)
        for Y in structures_above(k, open_lower, order_lower):
            verdict.targets += 1
            f = dict(block)
            assert is_locally_increasing_fast(f, cyl.lpo, Y)
            verdict.maps += 1
            reason = _check_candidate(Q, f, Y)
            if reason is not None:
                verdict.status = "fail"
                if len(verdict.failures) < max_failures:
                    verdict.failures.append(_failure_record(f, Y, reason))
            if mode != "exhaustive" and verdict.maps >= budget:
                break
        if mode != "exhaustive" and verdict.maps >= budget:
            break
    if mode != "exhaustive" and verdict.status == "pass":
        verdict.status = "inconclusive-sampled"
    return verdict


def _random_partition(rng: random.Random, n: int, max_blocks: int) -> list:
    codes, used = [], 0
    for _ in range(n):
        b = rng.randrange(min(used + 1, max_blocks))
        codes.append(b)
        used = max(used, b + 1)
    return codes


# --------------------------------------------------------------------------
# open collapse: K(f) is an open neighbourhood of the star


@dataclass
class CollapseReport:
    circle: str
    base: str
    strongly_connected: bool
    targets: int = 0
    maps: int = 0
    coequalizing: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def to_json(self):
        return {"circle": self.circle, "base": self.base, "strongly_connected": self.strongly_connected,
                "targets": self.targets, "maps": self.maps,
                "coequalizing": {label(k): v for k, v in sorted(self.coequalizing.items(), key=lambda kv: label(kv[0]))},
                "counterexamples": list(self.counterexamples), "holds": self.holds}


def open_collapse_harness(circle, base: LocallyOrderedSpace, max_target_points: int = 4,
                          stars: Iterable | None = None, stop_after: int | None = None,
                          targets: Iterable[LocallyOrderedSpace] | None = None) -> CollapseReport:
    """Every locally increasing map out of circle x base, into every small target.

    For each star, the maps constant on the star section must collapse an
    open set of levels.  Counterexamples are recorded with their target.
    """
    from .circles import Cylinder
    stars = sort_points(base.points) if stars is None else list(stars)
    cyl = Cylinder(circle, base, stars[0])
    src = cyl.lpo
    report = CollapseReport(circle.notation, base.name, is_strongly_connected(circle.lpo))
    report.coequalizing = {s: 0 for s in stars}
    c = circle.basepoint
    targets = lpo_targets(max_target_points) if targets is None else targets
    for Y in targets:
        report.targets += 1
        for f in locally_increasing_maps(src, Y):
            report.maps += 1
            K = None
            for star in stars:
                if all(f[(s, star)] == f[(c, star)] for s in circle.points):
                    report.coequalizing[star] += 1
                    K = compute_K(f) if K is None else K
                    if not base.space.is_open(K):
                        report.counterexamples.append(
                            {"star": label(star), "K": [label(t) for t in sort_points(K)],
                             "target": Y.space.to_json(),
                             "map": {label(p): label(f[p]) for p in sort_points(f)}})
                        if stop_after is not None and len(report.counterexamples) >= stop_after:
                            return report
    return report
