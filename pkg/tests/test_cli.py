import json
import subprocess
import sys

import jsonschema
import pytest

from loco.cli import main
from loco.report import REPORT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def statuses(report):
    return {v["name"]: v["status"] for v in report["verdicts"]}


def test_table_repro_is_byte_stable(capsys):
    main(["table-repro"])
    first = capsys.readouterr().out
    main(["table-repro"])
    assert capsys.readouterr().out == first
    report = json.loads(first)
    jsonschema.validate(report, REPORT_SCHEMA)
    s = statuses(report)
    assert s["U:locord"] == "pass" and s["U:locord-h"] == "pass"
    assert s["U:nachbin"] == "n/a" and s["U:nachbin-h"] == "n/a"
    assert report["timing"] is None


def test_gen_digest_stable(capsys, tmp_path):
    out = tmp_path / "cyl.json"
    _, a = run(capsys, "gen", "khalimsky-cylinder", "--n", "2", "--base", "ultra:3", "-o", str(out))
    _, b = run(capsys, "gen", "khalimsky-cylinder", "--n", "2", "--base", "ultra:3")
    assert a["digest"] == b["digest"]
    code, rep = run(capsys, "check", str(out), "basis", "morphism")
    assert code == 0 and all(v == "pass" for v in statuses(rep).values())


def test_seeded_generation_deterministic(capsys):
    _, a = run(capsys, "gen", "random-basis", "--seed", "11")
    _, b = run(capsys, "gen", "random-basis", "--seed", "11")
    _, c = run(capsys, "gen", "random-basis", "--seed", "12")
    assert a == b and a["digest"] != c["digest"]


def test_coeq_with_oracle_and_dot(capsys, tmp_path):
    dot = tmp_path / "q.dot"
    js = tmp_path / "r.json"
    code, rep = run(capsys, "coeq", "--circle", "khalimsky:2", "--base", "discrete:2", "--star", "0",
                    "--oracle", "exhaustive", "--max-target-points", "3", "--dot", str(dot), "--json", str(js))
    assert code == 0
    assert rep["data"]["exists"] and rep["data"]["O_min"] == ["0"]
    assert statuses(rep)["universal-property"] == "pass"
    assert dot.read_text().startswith("digraph")
    assert json.loads(js.read_text()) == rep
    jsonschema.validate(rep, REPORT_SCHEMA)


def test_sampled_oracle_is_not_a_pass(capsys):
    code, rep = run(capsys, "coeq", "--circle", "khalimsky:2", "--base", "discrete:2", "--star", "0",
                    "--oracle", "sample:20")
    assert statuses(rep)["universal-property"] == "inconclusive" and code == 1


def test_nachbin_na_exit_zero(capsys):
    code, rep = run(capsys, "coeq", "--flavor", "nachbin")
    assert code == 0 and statuses(rep)["coequalizer"] == "n/a"


def test_timing_opt_in(capsys):
    _, rep = run(capsys, "table-repro", "--timing")
    assert isinstance(rep["timing"], float)


def test_check_morphism_failure_exit(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"kind": "locmap", "source": "sierpinski", "target": "sierpinski",
                             "map": {"a": "b", "b": "a"}}))
    code, rep = run(capsys, "check-morphism", str(f))
    assert code == 1 and statuses(rep)["locally-increasing"] == "fail"
    assert statuses(rep)["continuous"] == "fail"


def test_bad_input_and_unknown_check(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [1,')
    assert main(["validate-basis", str(bad)]) == 2
    assert "line" in capsys.readouterr().err
    good = tmp_path / "b.json"
    main(["gen", "random-basis", "--seed", "1", "-o", str(good)])
    capsys.readouterr()
    assert main(["check", str(good), "nonsense"]) == 2


def test_zebra_and_pcs_commands(capsys, tmp_path):
    code, rep = run(capsys, "zebra", "--resolutions", "8,16")
    assert code == 0 and statuses(rep)["literal-nonexistence"] == "n/a"
    pcs = tmp_path / "k2.pcs"
    main(["gen", "pcs-k2", "-o", str(pcs)])
    capsys.readouterr()
    code, rep = run(capsys, "pcs", "collapses", str(pcs))
    assert [c["kind"] for c in rep["data"]["collapses"]] == ["loop-identification", "edge-collapse"]
    code, rep = run(capsys, "pcs", "mutate", "--count", "50")
    assert code == 0


def test_check_zebra_file(capsys, tmp_path):
    z = tmp_path / "z.json"
    main(["gen", "zebra", "--levels", "8", "-o", str(z)])
    capsys.readouterr()
    code, rep = run(capsys, "check", str(z), "zebra", "--resolutions", "8,16,32")
    assert code == 0
    assert [r["levels"] for r in rep["data"]["zebra"]["rows"]] == [8, 16, 32]


def test_schema_command(capsys):
    code, schema = run(capsys, "schema")
    assert code == 0 and schema == json.loads(json.dumps(REPORT_SCHEMA))


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "loco.cli", "table-repro"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["exit_code"] == 0
