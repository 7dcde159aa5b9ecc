import random

import pytest

from loco.pcs import (PcsParseError, PrecubicalSet, detect_collapses, discrete_vertices, k2, mutate_face,
                      mutation_harness, parse_pcs, square, standard_cube, torus, validate_pcs)


def kinds(p):
    return [(c.kind, c.cell) for c in detect_collapses(p)]


def test_square_ok():
    assert validate_pcs(square()) == []
    assert detect_collapses(square()) == []


def test_k2_findings():
    p = k2()
    assert validate_pcs(p) == []
    assert kinds(p) == [("loop-identification", "s"), ("edge-collapse", "b")]
    loop = detect_collapses(p)[0]
    assert loop.index == 1 and "v" in loop.detail


def test_torus_only_loops():
    found = detect_collapses(torus())
    assert found and all(c.kind == "loop-identification" for c in found)
    assert {(c.cell, c.index) for c in found} == {("s", 0), ("s", 1)}


def test_vertices_empty():
    assert detect_collapses(discrete_vertices(4)) == []


def test_single_loop_edge_is_reported():
    p = PrecubicalSet().add("v", 0).add("e", 1, {("-", 0): "v", ("+", 0): "v"})
    assert kinds(p) == [("loop-identification", "e")]


def test_mismatched_corner():
    p = square()
    p.faces[("a", "+", 0)] = "11"
    v = validate_pcs(p)
    assert v and v[0].kind == "face-identity" and v[0].cell == "s"


def test_typing_violations():
    p = PrecubicalSet().add("v", 0).add("e", 1, {("-", 0): "v"})
    assert [x.kind for x in validate_pcs(p)] == ["missing-face"]
    p = PrecubicalSet().add("v", 0).add("e", 1, {("-", 0): "v", ("+", 0): "w"})
    assert [x.kind for x in validate_pcs(p)] == ["unknown-cell"]


def test_degeneracy_identity():
    p = k2()
    p.degeneracies[("q", 0)] = "v"       # v runs p -> q, so it is not degenerate on q
    assert any(x.kind == "degeneracy-identity" for x in validate_pcs(p))


def test_text_roundtrip_and_errors():
    for p in (k2(), square(), torus(), standard_cube(3)):
        assert parse_pcs(p.to_text()) == p
    with pytest.raises(PcsParseError) as err:
        parse_pcs("1 e : d-0=v\n1 e : d-0=v\n")
    assert err.value.line == 2
    with pytest.raises(PcsParseError) as err:
        parse_pcs("0 v\n")
    assert err.value.line == 1
    assert validate_pcs("1 e : x=1\n")[0].kind == "parse"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_standard_cubes_valid(n):
    p = standard_cube(n)
    assert validate_pcs(p) == [] and detect_collapses(p) == []
    assert len(p.cells(0)) == 2 ** n


def test_mutations_all_detected():
    r = mutation_harness(count=200, seed=0)
    assert r.mutants == 200 and r.rate == 1.0
    q, edit = mutate_face(standard_cube(3), random.Random(1))
    assert edit["old"] != edit["new"]
