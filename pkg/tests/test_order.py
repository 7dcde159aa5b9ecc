import itertools

import pytest
from hypothesis import given, settings, strategies as st

from loco.enumeration import topologies
from loco.order import (FinSpace, OrderError, Poset, SpaceError, image_space, is_closed_relation,
                        is_order_convex, product_space, smallest_open_nbhd, subspace, transitive_closure,
                        validate_poset, Violation)

relations = st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=20)


@given(relations)
def test_transitive_closure_idempotent(rel):
    once = transitive_closure(rel, range(6)).relation
    assert transitive_closure(once, range(6)).relation == once


@given(relations, relations)
def test_transitive_closure_monotone(a, b):
    small = transitive_closure(a, range(6)).relation
    big = transitive_closure(a | b, range(6)).relation
    assert small <= big


@given(relations)
def test_closure_is_transitive_and_contains_input(rel):
    c = transitive_closure(rel, range(6))
    assert set(rel) <= c.relation
    for (x, y), (y2, z) in itertools.product(c.relation, repeat=2):
        if y == y2:
            assert (x, z) in c.relation


def test_cycle_reported():
    c = transitive_closure({(0, 1), (1, 2), (2, 0)}, range(3))
    assert not c.antisymmetric and c.cycle is not None


def test_poset_validation():
    assert isinstance(validate_poset({1, 2}, {(1, 1), (2, 2), (1, 2)}), Poset)
    assert isinstance(validate_poset({1, 2}, {(1, 1), (2, 2), (1, 2), (2, 1)}), Violation)
    assert isinstance(validate_poset({1, 2, 3}, {(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)}), Violation)
    with pytest.raises(OrderError):
        Poset.from_pairs({1, 2}, {(1, 2), (2, 1)})
    assert Poset.from_pairs({"a", "b"}, [("a", "b")]).le("a", "a")


def test_min_open_axioms_enforced():
    with pytest.raises(SpaceError):
        FinSpace({1: {2}, 2: {2}})
    with pytest.raises(SpaceError):
        FinSpace({1: {1, 2}, 2: {2, 3}, 3: {3, 1}} | {4: {4, 1}})


@pytest.mark.parametrize("n", range(1, 5))
def test_equality_closed_iff_hausdorff_iff_discrete(n):
    for X in topologies(n):
        eq = {(x, x) for x in X.points}
        assert is_closed_relation(eq, X) == X.is_hausdorff() == X.is_discrete()
        assert X.is_discrete() == all(len(X.min_open[x]) == 1 for x in X.points)


@pytest.mark.parametrize("n", range(1, 5))
def test_smallest_open_nbhd_is_least(n):
    for X in topologies(n):
        opens = X.opens()
        for p in X.points:
            u = smallest_open_nbhd(X, p)
            assert X.is_open(u)
            assert all(u <= o for o in opens if p in o)


def test_opens_count_and_components():
    sier = FinSpace({"a": {"a"}, "b": {"a", "b"}})
    assert sorted(map(sorted, sier.opens())) == [[], ["a"], ["a", "b"]]
    two = FinSpace.discrete([1, 2])
    assert len(two.components) == 2
    assert sier.is_connected()


def test_product_subspace_image():
    sier = FinSpace({"a": {"a"}, "b": {"a", "b"}})
    P = product_space(sier, FinSpace.discrete([0, 1]))
    assert P.min_open[("b", 0)] == {("a", 0), ("b", 0)}
    assert subspace(P, [("b", 0), ("b", 1)]).is_discrete()
    img = image_space(P, {p: p[0] for p in P.points})
    assert img == sier


def test_order_convexity():
    chain = Poset.chain([0, 1, 2])
    assert is_order_convex({0, 1}, chain)
    assert not is_order_convex({0, 2}, chain)


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_from_opens_roundtrip(seed):
    import random
    from loco.generators import random_space
    X = random_space(random.Random(seed), 5)
    assert FinSpace.from_opens(X.points, X.opens()) == X
