import random

import pytest

from loco.basis import validate_basis
from loco.circles import (SBAR, Cylinder, DirectedCircle, DiscreteCircle, make_chain_base, make_discrete_base,
                          make_khalimsky_interval, make_ultrafilter_space, ultrafilter_points)
from loco.coeq import (FLAVORS, QuotientError, QuotientSpace, convexity_holds, decide_coequalizer,
                       factor_through, repair_basis, topological_quotient, verify_hausdorff_nachbin_props)
from loco.generators import random_cylinder_instance
from loco.losp import LocMap, compute_K
from loco.order import transitive_closure


def ultra_cylinder():
    return Cylinder(DirectedCircle(2), make_ultrafilter_space(ultrafilter_points(3)), SBAR)


def test_quotient_carrier_and_K():
    cyl = Cylinder(DirectedCircle(2), make_khalimsky_interval(2), 1)
    Q = QuotientSpace(cyl, {1})
    assert Q.carrier == {1} | {(s, t) for s in range(4) for t in (0, 2)}
    assert compute_K(Q.q) == {1}
    assert Q.q_map.is_locally_increasing
    assert validate_basis(Q.basis) is None


def test_quotient_rejects_bad_O():
    cyl = Cylinder(DirectedCircle(2), make_khalimsky_interval(2), 1)
    with pytest.raises(QuotientError):
        QuotientSpace(cyl, {0})          # not open
    with pytest.raises(QuotientError):
        QuotientSpace(Cylinder(DirectedCircle(2), make_khalimsky_interval(2), 0), {1})   # star outside


def test_generator_orders_are_closures():
    rng = random.Random(5)
    for _ in range(40):
        cyl, O = random_cylinder_instance(rng)
        Q = QuotientSpace(cyl, O)
        for g in Q.generators:
            c = transitive_closure(g.below, g.carrier)
            assert c.antisymmetric and c.relation == g.order
            if g.convex:
                assert g.order == g.below


def test_nonconvex_chain_needs_closing():
    cyl = Cylinder(DirectedCircle(2), make_chain_base(3), 1)
    Q = QuotientSpace(cyl, {1}, repair=False)
    assert not Q.convex and Q.strict_undecided and not Q.strict
    assert any(g.order != g.below for g in Q.generators)


def test_repair_keeps_elements_on_one_side():
    base = make_chain_base(3)
    repaired = repair_basis(frozenset({1}), base.basis)
    assert convexity_holds(frozenset({1}), repaired)
    assert validate_basis(repaired) is None
    Q = QuotientSpace(Cylinder(DirectedCircle(2), base, 1), {1})
    assert Q.repaired and Q.strict
    with pytest.raises(QuotientError):
        repair_basis(frozenset({1}), make_khalimsky_interval(2).basis)


def test_reference_table_ultrafilter_column():
    cyl = ultra_cylinder()
    got = {f: decide_coequalizer(cyl, f) for f in FLAVORS}
    assert got["locord"].exists and got["locord"].O_min == {SBAR} and got["locord"].witness == "q_O"
    assert got["locord-h"].exists and got["locord-h"].O_min == cyl.base.points and got["locord-h"].witness == "p2"
    assert got["nachbin"].status == "n/a" and got["nachbin-h"].status == "n/a"


def _interval_base(strict):
    from loco.basis import OrderedBasis
    from loco.circles import khalimsky_interval
    from loco.losp import LocallyOrderedSpace
    from loco.order import Poset
    elements = (Poset.discrete({1}), Poset.chain([0, 1]), Poset.chain([1, 2]), Poset.chain([0, 1, 2]))
    return LocallyOrderedSpace(OrderedBasis(khalimsky_interval(2), elements, strict), "interval-chain")


def test_strict_flavor_undecided_when_side_condition_fails():
    # O = {1} is open but not closed, and {0, 2} is not convex in the chain 0 < 1 < 2
    cyl = Cylinder(DirectedCircle(2), _interval_base(True), 1)
    d = decide_coequalizer(cyl, "locord", strict=True)
    assert d.status == "undecided" and d.exists is None
    assert decide_coequalizer(cyl, "locord").exists


def test_strict_flavor_needs_strict_base():
    cyl = Cylinder(DirectedCircle(2), _interval_base(False), 1)
    assert decide_coequalizer(cyl, "locord", strict=True).status == "n/a"


def test_factorization_through_quotient():
    cyl = Cylinder(DirectedCircle(2), make_discrete_base(2), 0)
    Q = QuotientSpace(cyl, {0})
    p2 = cyl.p2
    fac = factor_through(Q, p2)
    assert fac.ok and fac.unique
    assert LocMap(Q.lpo, cyl.base, fac.h.mapping).compose(Q.q_map).mapping == p2.mapping
    ident = LocMap(cyl.lpo, cyl.lpo, {p: p for p in cyl.points})
    assert not factor_through(Q, ident).ok


def test_props_on_discrete_cylinders():
    rng = random.Random(2)
    from loco.generators import random_discrete_base
    for _ in range(5):
        base = random_discrete_base(rng)
        for O in base.space.opens():
            if not O:
                continue
            cyl = Cylinder(DiscreteCircle(3), base, sorted(O)[0])
            r = verify_hausdorff_nachbin_props(QuotientSpace(cyl, O))
            assert r.hausdorff_iff_closed


def test_topological_quotient_matches_witness():
    cyl = Cylinder(DiscreteCircle(3), make_discrete_base(3), 1)
    d = decide_coequalizer(cyl, "locord")
    carrier, space = topological_quotient(cyl)
    assert d.quotient.carrier == carrier and d.quotient.space == space
