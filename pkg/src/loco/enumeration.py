"""Exhaustive enumeration of small locally ordered spaces and of the maps between them.

Topologies on n points are grown one point at a time and kept up to
isomorphism by a canonical form (least encoding over the permutations that
respect a degree partition).  A locally ordered structure on a finite space
is determined, up to equivalence, by one order per minimal open set, subject
to monotonicity along inclusions; those families are enumerated up to the
automorphisms of the topology.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Mapping

from .basis import OrderedBasis
from .losp import LocallyOrderedSpace
from .order import FinSpace, Poset, sort_points


# --------------------------------------------------------------------------
# canonical forms


def _cells(n: int, signature) -> list:
    groups = {}
    for x in range(n):
        groups.setdefault(signature[x], []).append(x)
    return [groups[k] for k in sorted(groups)]


def _respecting_permutations(cells: list) -> Iterator[tuple]:
    """Relabelings sending the i-th cell onto the i-th block of new labels."""
    n = sum(len(c) for c in cells)
    starts, pos = [], 0
    for c in cells:
        starts.append(pos)
        pos += len(c)
    for choice in product(*(permutations(c) for c in cells)):
        perm = [0] * n
        for start, block in zip(starts, choice):
            for offset, old in enumerate(block):
                perm[old] = start + offset
        yield tuple(perm)


def _relation_code(rel: frozenset, perm) -> tuple:
    return tuple(sorted((perm[a], perm[b]) for a, b in rel))


def _signature(n: int, rel: frozenset) -> list:
    out = [0] * n
    inn = [0] * n
    for a, b in rel:
        out[a] += 1
        inn[b] += 1
    return [(out[x], inn[x]) for x in range(n)]


def canonical_preorder(n: int, rel: frozenset) -> tuple:
    """Canonical code and relabeling of a relation on range(n)."""
    best = None
    for perm in _respecting_permutations(_cells(n, _signature(n, rel))):
        code = _relation_code(rel, perm)
        if best is None or code < best[0]:
            best = (code, perm)
    return best


# --------------------------------------------------------------------------
# topologies


def _space_from_relation(n: int, rel) -> FinSpace:
    """``(y, x)`` in ``rel`` means y lies in the minimal open set of x."""
    return FinSpace({x: {y for y in range(n) if (y, x) in rel} for x in range(n)})


@lru_cache(maxsize=None)
def _preorder_codes(n: int) -> tuple:
    if n == 0:
        return ((),)
    found = set()
    for code in _preorder_codes(n - 1):
        rel = set(code)
        k = n - 1
        old = range(k)
        below_sets = [frozenset(y for y in old if m >> y & 1) for m in range(1 << k)]
        # below: points in U_k (closed downward); above: points whose U contains k
        for below in below_sets:
            if any((z, y) in rel and z not in below for y in below for z in old):
                continue
            for above in below_sets:
                if any((w, z) in rel and z not in above for w in above for z in old):
                    continue
                if any((y, w) not in rel for y in below for w in above):
                    continue
                new = set(rel)
                new.add((k, k))
                new.update((y, k) for y in below)
                new.update((k, w) for w in above)
                found.add(canonical_preorder(n, frozenset(new))[0])
    return tuple(sorted(found))


def topologies(n: int) -> list:
    """All topologies on range(n), one per homeomorphism class."""
    return [_space_from_relation(n, frozenset(code)) for code in _preorder_codes(n)]


def automorphisms(space: FinSpace) -> list:
    pts = sort_points(space.points)
    index = {x: i for i, x in enumerate(pts)}
    n = len(pts)
    rel = frozenset((index[y], index[x]) for x in pts for y in space.min_open[x])
    out = []
    cells = _cells(n, _signature(n, rel))
    for choice in product(*(permutations(c) for c in cells)):
        perm = [0] * n
        for cell, image in zip(cells, choice):
            for old, new in zip(cell, image):
                perm[old] = new
        if all((perm[a], perm[b]) in rel for a, b in rel):
            out.append({pts[i]: pts[perm[i]] for i in range(n)})
    return out


# --------------------------------------------------------------------------
# posets and order families


@lru_cache(maxsize=None)
def labeled_posets(k: int) -> tuple:
    """Every partial order on range(k), as its set of strict pairs."""
    if k == 0:
        return (frozenset(),)
    out = []
    for rel in labeled_posets(k - 1):
        new = k - 1
        old = range(new)
        for mb in range(1 << new):
            below = {y for y in old if mb >> y & 1}
            if any((z, y) in rel and z not in below for y in below for z in old):
                continue
            for ma in range(1 << new):
                if mb & ma:
                    continue
                above = {y for y in old if ma >> y & 1}
                if any((w, z) in rel and z not in above for w in above for z in old):
                    continue
                if any((y, w) not in rel for y in below for w in above):
                    continue
                out.append(rel | {(y, new) for y in below} | {(new, w) for w in above})
    return tuple(frozenset(r) for r in out)


def _orders_containing(carrier: list, required: frozenset) -> list:
    out = []
    for rel in labeled_posets(len(carrier)):
        strict = frozenset((carrier[a], carrier[b]) for a, b in rel)
        if required <= strict:
            out.append(strict)
    return out


def order_families(space: FinSpace) -> list:
    """All monotone families of strict orders on minimal opens, up to automorphism."""
    pts = sorted(space.points, key=lambda x: (len(space.min_open[x]), sort_points([x])))
    groups = []   # points sharing a minimal open set get the same order
    seen = {}
    for x in pts:
        u = space.min_open[x]
        if u in seen:
            seen[u].append(x)
        else:
            seen[u] = [x]
            groups.append(seen[u])

    families = []

    def extend(i: int, chosen: dict):
        if i == len(groups):
            families.append(dict(chosen))
            return
        x = groups[i][0]
        u = space.min_open[x]
        required = set()
        for z in u:
            if z in chosen:
                required |= chosen[z]
        for order in _orders_containing(sort_points(u), frozenset(required)):
            for y in groups[i]:
                chosen[y] = order
            extend(i + 1, chosen)
        for y in groups[i]:
            chosen.pop(y, None)

    extend(0, {})
    auts = automorphisms(space)
    reps = {}
    for fam in families:
        code = min(tuple(sorted((g[x], g[a], g[b]) for x in fam for a, b in fam[x]))
                   for g in auts)
        reps.setdefault(code, fam)
    return [reps[c] for c in sorted(reps)]


def family_is_strict(space: FinSpace, family: Mapping) -> bool:
    """Whether each least order is the restriction of the larger ones around it."""
    for y in space.points:
        u = space.min_open[y]
        for x in u:
            ux = space.min_open[x]
            if family[x] != frozenset(p for p in family[y] if p[0] in ux and p[1] in ux):
                return False
    return True


def basis_from_family(space: FinSpace, family: Mapping, strict: bool | None = None) -> OrderedBasis:
    """The least basis of a family; strict exactly when the family is."""
    if strict is None:
        strict = family_is_strict(space, family)
    elements = []
    for x in sort_points(space.points):
        u = space.min_open[x]
        elements.append(Poset(u, frozenset(family[x]) | frozenset((y, y) for y in u)))
    return OrderedBasis(space, tuple(elements), strict)


def lpo_targets(max_points: int, min_points: int = 1) -> Iterator[LocallyOrderedSpace]:
    """Every locally ordered space on at most ``max_points`` points, up to isomorphism.

    Each is returned through its least basis (one poset per minimal open
    set), flagged strict when the family allows it.
    """
    for n in range(min_points, max_points + 1):
        for space in topologies(n):
            for family in order_families(space):
                yield LocallyOrderedSpace(basis_from_family(space, family), f"target{n}")


def count_targets(max_points: int) -> dict:
    return {n: sum(len(order_families(s)) for s in topologies(n)) for n in range(1, max_points + 1)}


# --------------------------------------------------------------------------
# maps


def locally_increasing_maps(src: LocallyOrderedSpace, tgt: LocallyOrderedSpace,
                            glue: Iterator = (), limit: int | None = None,
                            value_order: Mapping | None = None) -> Iterator[dict]:
    """Every locally increasing map src -> tgt, by backtracking.

    ``glue`` lists groups of source points forced to share a value (used to
    impose the coequalizing condition).  Constraints are the pointwise ones:
    continuity at x and monotonicity between the least local orders.
    """
    so = src.basis.pointwise_orders
    to = tgt.basis.pointwise_orders
    smin, tmin = src.space.min_open, tgt.space.min_open
    tvals = sort_points(tgt.points)

    rep = {x: x for x in src.points}
    for group in glue:
        group = list(group)
        for y in group[1:]:
            rep[y] = group[0]
    variables = []
    for x in sorted(src.points, key=lambda p: (-len(smin[p]), sort_points([p]))):
        if rep[x] not in variables:
            variables.append(rep[x])
    position = {v: i for i, v in enumerate(variables)}

    def pos(x):
        return position[rep[x]]

    # group constraints by the last variable they mention
    checks = [[] for _ in variables]
    for x in src.points:
        for y in smin[x]:
            checks[max(pos(x), pos(y))].append(("c", x, y))
        for a, b in so[x]:
            if a != b:
                checks[max(pos(x), pos(a), pos(b))].append(("m", x, a, b))

    assign = {}

    def val(x):
        return assign[rep[x]]

    def ok(i):
        for c in checks[i]:
            if c[0] == "c":
                if val(c[2]) not in tmin[val(c[1])]:
                    return False
            elif (val(c[2]), val(c[3])) not in to[val(c[1])]:
                return False
        return True

    count = 0

    def search(i):
        nonlocal count
        if i == len(variables):
            count += 1
            yield {x: val(x) for x in src.points}
            return
        v = variables[i]
        for t in (value_order[v] if value_order else tvals):
            assign[v] = t
            if ok(i):
                yield from search(i + 1)
                if limit is not None and count >= limit:
                    return
        del assign[v]

    yield from search(0)
