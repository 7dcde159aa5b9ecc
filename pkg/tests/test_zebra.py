import pytest

from loco.basis import validate_basis
from loco.circles import DirectedCircle
from loco.zebra import (StripeError, check_stripes, coequalizer_top, collapse_prefix, collapse_zero, f_family,
                        fit_stripes, make_zebra, parse_stripes, zebra_report, zebra_spread_check)


def test_stripe_parsing_and_rules():
    assert parse_stripes("8-8, 5-6,1") == [(8, 8), (5, 6), (1, 1)]
    check_stripes([(8, 8), (6, 6), (4, 4), (1, 1)], 8)
    with pytest.raises(StripeError):
        check_stripes([(4, 4), (3, 3)], 8)        # no room above level 3
    with pytest.raises(StripeError):
        check_stripes([(2, 3), (1, 1)], 8)        # odd top 1 needs two free levels
    with pytest.raises(StripeError):
        check_stripes([(0, 1)], 8)
    with pytest.raises(StripeError):
        parse_stripes("a-b")


@pytest.mark.parametrize("M", [8, 16, 32])
def test_fitted_stripes(M):
    stripes = fit_stripes(M, 3)
    assert len(stripes) == 4 and stripes[-1] == (1, 1) and stripes[0][1] == M
    check_stripes(stripes, M)


def test_single_stripe_degenerate_case():
    Z = make_zebra(levels=8, count=0)
    assert Z.stripes == [(1, 1)]
    top = coequalizer_top(Z)
    assert top == 1
    c = collapse_prefix(Z, top)
    assert c.locally_increasing and c.K == {0, 1}


def test_zebra_space_is_valid_and_strict():
    Z = make_zebra(levels=8)
    assert Z.lpo.strict and validate_basis(Z.lpo.basis) is None
    assert Z.sections_isomorphic()


def test_family_shrinks_and_morphisms():
    Z = make_zebra(levels=16)
    family = f_family(Z)
    Ks = [c.K for c in family]
    assert all(a > b for a, b in zip(Ks, Ks[1:]))
    assert frozenset.intersection(*Ks) == {0}
    assert all(c.locally_increasing for c in family[:-1])
    for c in family[:-1]:
        assert Z.coequalizes(c.f)
        assert c.K == set(range(c.top + 1))


def test_level_zero_collapse_fails_when_level_one_striped():
    Z = make_zebra(levels=8)
    c = collapse_zero(Z)
    assert c.K == {0} and not c.locally_increasing
    # without a stripe next to level 0 the same collapse is a morphism
    free = make_zebra(levels=8, stripes="8-8,6-6,4-4")
    assert collapse_zero(free).locally_increasing


def test_spread_check():
    Z = make_zebra(levels=8)
    coeq = collapse_prefix(Z, coequalizer_top(Z))
    s = zebra_spread_check(Z, coeq.f)
    assert s.confirmed and s.near_zero == [3] and s.earliest == 3
    with pytest.raises(ValueError):
        zebra_spread_check(Z, {p: p for p in Z.points})


def test_report_structure():
    r = zebra_report((8, 16))
    assert [row["levels"] for row in r["rows"]] == [8, 16]
    assert "desk scale" in r["nonexistence"]
    fractions = [row["O_min_fraction"] for row in r["rows"]]
    assert fractions[0] > fractions[1]
    assert all(row["O_min"] == ["0", "1"] for row in r["rows"])


def test_other_circle_resolution():
    Z = make_zebra(DirectedCircle(3), levels=8)
    assert all(c.locally_increasing for c in f_family(Z)[:-1])
