import pytest

from loco.basis import validate_basis
from loco.circles import (SBAR, Cylinder, DirectedCircle, DiscreteCircle, SplitCircle, khalimsky_interval,
                          make_chain_base, make_cylinder, make_ultrafilter_space, parse_base, parse_circle,
                          ultrafilter_points)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_khalimsky_circle(n):
    C = DirectedCircle(n)
    assert len(C) == 2 * n
    assert validate_basis(C.lpo.basis) is None and C.lpo.strict
    assert C.space.is_connected() and C.space.is_t0()
    for p in C.points:
        assert C.space.min_open[p] == ({p} if p % 2 else {(p - 1) % (2 * n), p, (p + 1) % (2 * n)})
    # arcs are proper: no arc covers the circle
    assert all(len(a.carrier) < 2 * n for a in C.arcs)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_discrete_circle(n):
    C = DiscreteCircle(n)
    assert C.space.is_discrete() and validate_basis(C.lpo.basis) is None


def test_split_circle_has_two_pieces():
    S = SplitCircle(2)
    assert sorted(S.points) == [1, 3]
    assert validate_basis(S.lpo.basis) is None


def test_parsers():
    assert parse_circle("khalimsky:3").n == 3
    assert parse_circle("discrete:4").space.is_discrete()
    with pytest.raises(ValueError):
        parse_circle("moebius:2")
    assert sorted(parse_base("ultra:3").points) == ["a", "b", SBAR]
    assert parse_base("sierpinski").space.min_open["b"] == {"a", "b"}
    assert parse_base("chain:3").strict
    assert len(parse_base("khalimsky-interval:4").points) == 5
    with pytest.raises(ValueError):
        parse_base("torus:3")


def test_ultrafilter_space():
    U = make_ultrafilter_space(ultrafilter_points(4))
    sp = U.space
    assert all(SBAR in o for o in sp.opens() if o)
    assert sp.min_open[SBAR] == {SBAR}
    assert sp.is_connected() and not sp.is_hausdorff()


def test_khalimsky_interval_endpoints():
    K = khalimsky_interval(4)
    assert K.min_open[0] == {0, 1} and K.min_open[4] == {3, 4}


def test_cylinder_maps():
    cyl = make_cylinder(DirectedCircle(2), make_chain_base(2), 0)
    assert validate_basis(cyl.lpo.basis) is None
    for m in (cyl.i_star, cyl.c_star, cyl.p2):
        assert m.is_locally_increasing
    assert cyl.coequalizes(cyl.p2.mapping)
    with pytest.raises(ValueError):
        Cylinder(DirectedCircle(2), make_chain_base(2), 7)
