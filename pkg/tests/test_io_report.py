import json

import jsonschema
import pytest

from loco import io
from loco.circles import Cylinder, DirectedCircle, make_chain_base
from loco.losp import LocMap
from loco.report import REPORT_SCHEMA, Report, Verdict, digest, verdict


def test_basis_roundtrip():
    base = make_chain_base(3)
    data = json.loads(json.dumps(base.to_json()))
    back = io.basis_from_json(data)
    assert back.strict and len(back.elements) == len(base.basis.elements)
    assert io.basis_violation_json(back) is None


def test_poset_pairs_are_materialized():
    p = io.poset_from_json({"carrier": ["a", "b"], "pairs": [["a", "b"]]})
    assert ("a", "a") in p.order and ("a", "b") in p.order
    with pytest.raises(io.InstanceError):
        io.poset_from_json({"carrier": ["a", "b"], "pairs": [["a", "b"], ["b", "a"]]})


def test_parse_errors_have_location():
    with pytest.raises(io.InstanceError) as err:
        io.loads('{\n  "points": [1,\n')
    assert err.value.line is not None and err.value.column is not None


def test_bad_space_is_reported():
    with pytest.raises(io.InstanceError):
        io.finspace_from_json({"points": ["a"], "min_open": {"a": ["b"]}})


def test_locmap_roundtrip():
    cyl = Cylinder(DirectedCircle(2), make_chain_base(2), 0)
    m = cyl.p2
    data = json.loads(io.dumps(io.locmap_to_json(m)))
    back = io.locmap_from_json(data)
    assert back.is_locally_increasing
    assert {str(k) for k in back.mapping.values()} == {"0", "1"}


def test_cylinder_and_zebra_instances():
    cyl = io.cylinder_from_json({"kind": "cylinder", "circle": "khalimsky:2", "base": "discrete:2", "star": "0"})
    assert cyl.star == 0
    with pytest.raises(io.InstanceError):
        io.cylinder_from_json({"circle": "khalimsky:2", "base": "discrete:2", "star": "9"})
    z = io.zebra_from_json({"kind": "zebra", "levels": 8, "stripes": "8-8,6-6,4-4,1-1"})
    assert io.zebra_to_json(z)["stripes"] == "8-8,6-6,4-4,1-1"


def test_report_schema_and_digest():
    r = Report(["x"], {"a": 1}, {"seed": 0})
    r.add(verdict("ok", True))
    r.add(Verdict("skip", "n/a"))
    jsonschema.validate(r.to_json(), REPORT_SCHEMA)
    assert r.exit_code == 0
    r.add(verdict("bad", False))
    assert r.exit_code == 1
    assert r.digest == digest({"a": 1}, {"seed": 0})
    r.timing = 1.5
    assert r.digest == digest({"a": 1}, {"seed": 0})
    with pytest.raises(ValueError):
        Verdict("x", "maybe")
