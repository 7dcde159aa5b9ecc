"""Command-line entry point: ``loco <subcommand> ...``.

Every subcommand prints a JSON report on stdout (also written to ``--json``
when given) and exits 0 exactly when all verdicts pass or are n/a.  Bad
input exits with status 2 and a message on stderr.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from . import io
from .basis import is_locally_nachbin, validate_basis
from .circles import Cylinder, DirectedCircle, SBAR, make_ultrafilter_space, parse_base, parse_circle, ultrafilter_points
from .coeq import FLAVORS, QuotientError, build_quotient, decide_coequalizer, verify_hausdorff_nachbin_props
from .generators import random_basis_pair, random_cylinder_instance, random_strict_basis
from .losp import (InvalidSpace, compute_K, is_locally_increasing_fast,
                   is_locally_increasing_strict_target)
from .oracle import universal_property_oracle
from .order import label, sort_points, transitive_closure
from .pcs import PcsParseError, detect_collapses, k2, mutation_harness, parse_pcs, standard_cube, validate_pcs
from .report import REPORT_SCHEMA, Report, Verdict, verdict
from .zebra import NONEXISTENCE, StripeError, make_zebra, zebra_report, zebra_row

CHECKS = ("basis", "morphism", "quotient", "zebra")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# DOT


def _dot_id(p) -> str:
    return '"' + label(p).replace('"', r'\"') + '"'


def posets_to_dot(name: str, points, posets) -> str:
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;"]
    for p in sort_points(points):
        lines.append(f"  {_dot_id(p)};")
    for i, poset in enumerate(posets):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="{i}";')
        for a, b in poset.hasse_edges():
            lines.append(f"    {_dot_id(a)} -> {_dot_id(b)};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# instance helpers


def _load(path: str) -> dict:
    return io.read_instance(path)


def _kind(data: dict) -> str:
    if "kind" in data:
        return data["kind"]
    return "basis" if "space" in data else "unknown"


def _cylinder_from_args(args) -> tuple:
    if args.cylinder:
        data = _load(args.cylinder)
        return io.cylinder_from_json(data), data
    circle = parse_circle(args.circle)
    base = parse_base(args.base)
    star = args.star
    if star is None:
        star = SBAR if SBAR in base.points else label(sort_points(base.points)[0])
    cyl = Cylinder(circle, base, io.resolve_point(base.points, star, "star"))
    return cyl, {"kind": "cylinder", "circle": args.circle, "base": args.base, "star": label(cyl.star)}


def _parse_oracle(text):
    if text is None:
        return None
    if text == "exhaustive":
        return ("exhaustive", None)
    if text.startswith("sample:") and text[7:].isdigit():
        return ("sample", int(text[7:]))
    raise UsageError("--oracle must be 'exhaustive' or 'sample:<n>'")


# --------------------------------------------------------------------------
# subcommands


def cmd_validate_basis(args, report: Report):
    data = _load(args.file)
    basis = io.basis_from_json(data)
    report.instance = data
    v = validate_basis(basis)
    report.add(Verdict("basis", "pass" if v is None else "fail", None if v is None else v.to_json()))
    if basis.strict:
        lax = validate_basis(basis, strict=False)
        report.add(Verdict("lax-basis", "pass" if lax is None else "fail", None if lax is None else lax.to_json()))
    report.data = {"points": len(basis.space.points), "elements": len(basis.elements),
                   "strict_claimed": basis.strict,
                   "locally_nachbin": is_locally_nachbin(basis) if v is None else None}
    if args.dot:
        _write(args.dot, posets_to_dot("basis", basis.space.points, basis.elements))


def _morphism_verdicts(report: Report, m, prefix=""):
    report.add(verdict(prefix + "continuous", m.is_continuous))
    failure = m.first_failure()
    report.add(verdict(prefix + "locally-increasing", failure is None,
                       None if failure is None else {"point": label(failure.point)}))
    fast = is_locally_increasing_fast(m.mapping, m.source, m.target)
    agree = fast == (failure is None)
    if m.target.strict:
        agree = agree and is_locally_increasing_strict_target(m.mapping, m.source, m.target) == fast
    report.add(verdict(prefix + "deciders-agree", agree))


def cmd_check_morphism(args, report: Report):
    data = _load(args.file)
    report.instance = data
    m = io.locmap_from_json(data)
    _morphism_verdicts(report, m)
    report.data = {"map": m.to_json()["map"],
                   "witnesses": {label(x): w.table for x, w in sorted(m.witnesses.items(), key=lambda kv: label(kv[0]))
                                 if not w}}


def _oracle_verdict(report: Report, Q, oracle, args):
    mode, n = oracle
    budget = n if n is not None else args.budget
    result = universal_property_oracle(Q, mode=mode, budget=budget, seed=args.seed,
                                       max_target_points=args.max_target_points)
    status = {"pass": "pass", "fail": "fail", "inconclusive-sampled": "inconclusive"}[result.status]
    report.add(Verdict("universal-property", status, result.to_json()))


def cmd_coeq(args, report: Report):
    cyl, instance = _cylinder_from_args(args)
    oracle = _parse_oracle(args.oracle)
    report.instance = instance
    report.params = {"flavor": args.flavor, "strict": args.strict, "oracle": args.oracle,
                     "seed": args.seed, "budget": args.budget, "max_target_points": args.max_target_points}
    d = decide_coequalizer(cyl, args.flavor, args.strict)
    status = {"exists": "pass", "n/a": "n/a", "undecided": "undecided"}[d.status]
    report.add(Verdict("coequalizer", status, d.witness))
    checks = []
    out = {"exists": d.exists, "status": d.status, "O_min": None, "carrier": None, "generators": None,
           "decision": d.to_json()}
    if d.quotient is not None:
        Q = d.quotient
        out["O_min"] = io.sorted_labels(d.O_min)
        out["carrier"] = io.sorted_labels(Q.carrier)
        out["generators"] = Q.to_json()["generators"]
        checks.append(report.add(verdict("K(q_O)=O_min", compute_K(Q.q) == d.O_min)))
        checks.append(report.add(verdict("q_O-locally-increasing", Q.q_map.first_failure() is None)))
        checks.append(report.add(verdict("basis-valid", validate_basis(Q.basis) is None)))
        props = verify_hausdorff_nachbin_props(Q)
        if props.hypotheses["base_hausdorff"] and props.hypotheses["circle_hausdorff"]:
            checks.append(report.add(verdict("hausdorff-iff-O-closed", props.hausdorff_iff_closed, props.to_json())))
        else:
            checks.append(report.add(Verdict("hausdorff-iff-O-closed", "n/a", "needs a Hausdorff base and circle")))
        if oracle is not None:
            _oracle_verdict(report, Q, oracle, args)
            checks.append(report.verdicts[-1])
        if args.dot:
            _write(args.dot, posets_to_dot("X_O", Q.carrier, Q.basis.elements))
    out["checks"] = [v.to_json() for v in checks]
    report.data = out


def _zebra_verdicts(report: Report, result: dict):
    for row in result["rows"]:
        M = row["levels"]
        report.add(verdict(f"M={M}:K-strictly-decreasing", row["K_strictly_decreasing"]))
        report.add(verdict(f"M={M}:K-intersection-is-0", row["K_intersection"] == ["0"], row["K_intersection"]))
        report.add(verdict(f"M={M}:stripes-near-0-collapse", row["spread_check"]["confirmed"], row["spread_check"]))
        report.add(verdict(f"M={M}:coequalizer-locally-increasing", row["coequalizer"]["locally_increasing"]))
        morphisms = all(f["locally_increasing"] for f in row["family"][:-1])
        report.add(verdict(f"M={M}:f_n-locally-increasing", morphisms))
    report.add(Verdict("literal-nonexistence", "n/a", result["nonexistence"]))


def cmd_zebra(args, report: Report):
    resolutions = _resolutions(args.resolutions)
    circle = parse_circle(args.circle)
    report.instance = {"kind": "zebra-family", "circle": args.circle, "count": args.count}
    report.params = {"resolutions": resolutions}
    if args.levels is not None or args.stripes is not None:
        Z = make_zebra(circle, args.levels or 16, args.stripes, args.count)
        report.instance = io.zebra_to_json(Z)
        report.params = {}
        result = _single_zebra(Z)
    else:
        result = zebra_report(resolutions, args.count, circle)
    _zebra_verdicts(report, result)
    report.data = result


def _single_zebra(Z) -> dict:
    return {"kind": "zebra-report", "resolutions": [Z.levels], "rows": [zebra_row(Z)],
            "nonexistence": NONEXISTENCE}


def _resolutions(text) -> list:
    try:
        out = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError("--resolutions must be a comma-separated list of integers") from None
    if not out:
        raise UsageError("--resolutions is empty")
    return out


# rows of the reference table over spaces that have no finite model here;
# their verdicts are quoted, not computed
CITED_COLUMNS = {
    "R": ("fail", "pass", "pass", "pass"),
    "R (directed)": ("fail", "pass", "pass", "pass"),
    "S1 (directed)": ("fail", "pass", "pass", "pass"),
    "R_star": ("fail", "fail", "fail", "fail"),
    "Q": ("fail", "fail", "fail", "fail"),
}


def table_repro() -> Report:
    report = Report(["table-repro"], {"kind": "cylinder", "circle": "khalimsky:2", "base": "ultra:3", "star": SBAR})
    cyl = Cylinder(DirectedCircle(2), make_ultrafilter_space(ultrafilter_points(3)), SBAR)
    rows = []
    for i, flavor in enumerate(FLAVORS):
        d = decide_coequalizer(cyl, flavor)
        status = {"exists": "pass", "n/a": "n/a", "undecided": "undecided"}[d.status]
        witness = None
        if d.O_min is not None:
            witness = {"map": d.witness, "O": io.sorted_labels(d.O_min)}
        report.add(Verdict(f"U:{flavor}", status, witness))
        cited = {col: verdicts[i] for col, verdicts in CITED_COLUMNS.items()}
        rows.append({"flavor": flavor, "U": {"status": status, "witness": witness},
                     "cited": cited})
    expected = [("pass", {"map": "q_O", "O": [SBAR]}), ("pass", {"map": "p2", "O": io.sorted_labels(cyl.base.points)}),
                ("n/a", None), ("n/a", None)]
    got = [(v.status, v.witness) for v in report.verdicts]
    report.add(verdict("U-column-matches-reference", got == expected))
    report.data = {"rows": rows,
                   "cited_columns": {col: "not finitely modelable; verdicts quoted from the reference table, unverified"
                                     for col in CITED_COLUMNS}}
    return report


def cmd_table_repro(args, report: Report):
    built = table_repro()
    report.instance, report.verdicts, report.data = built.instance, built.verdicts, built.data


def cmd_pcs(args, report: Report):
    if args.action == "mutate":
        result = mutation_harness(standard_cube(args.cube_dim), args.count, args.seed)
        report.instance = {"kind": "pcs-cube", "dim": args.cube_dim}
        report.params = {"count": args.count, "seed": args.seed}
        report.add(verdict("mutation-detection", result.rate == 1.0, result.to_json()))
        report.data = result.to_json()
        return
    if args.file is None:
        raise UsageError(f"pcs {args.action} needs a file")
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    report.instance = {"kind": "pcs", "text": text}
    violations = validate_pcs(text)
    report.add(Verdict("face-laws", "pass" if not violations else "fail", [v.to_json() for v in violations]))
    report.data = {"violations": [v.to_json() for v in violations]}
    if args.action == "collapses" and not violations:
        found = detect_collapses(parse_pcs(text))
        report.data["collapses"] = [c.to_json() for c in found]
        report.data["note"] = ("self-identified opposite faces make the realization a quotient of the kind "
                               "that fails to exist or misbehaves as a colimit of locally ordered spaces")


def generate(kind: str, args) -> object:
    rng = random.Random(args.seed)
    if kind == "khalimsky-cylinder":
        base = parse_base(args.base)
        star = args.star or (SBAR if SBAR in base.points else label(sort_points(base.points)[0]))
        return {"kind": "cylinder", "circle": f"khalimsky:{args.n}", "base": args.base, "star": star}
    if kind == "discrete-cylinder":
        base = parse_base(args.base)
        star = args.star or label(sort_points(base.points)[0])
        return {"kind": "cylinder", "circle": f"discrete:{args.n}", "base": args.base, "star": star}
    if kind == "random-basis":
        return random_strict_basis(rng, args.points).to_json()
    if kind == "basis-pair":
        a, b, how = random_basis_pair(rng, args.points)
        return {"kind": "basis-pair", "first": a.to_json(), "second": b.to_json(), "how": how}
    if kind == "random-cylinder":
        cyl, O = random_cylinder_instance(rng)
        return {"kind": "cylinder", "circle": cyl.circle.notation, "base": cyl.base.to_json(),
                "star": label(cyl.star), "O": io.sorted_labels(O)}
    if kind == "zebra":
        Z = make_zebra(parse_circle(args.circle), args.levels, args.stripes, args.count)
        return io.zebra_to_json(Z)
    if kind == "pcs-k2":
        return k2().to_text()
    if kind == "pcs-cube":
        return standard_cube(args.cube_dim).to_text()
    raise UsageError(f"unknown generator {kind!r}")


GENERATORS = ("khalimsky-cylinder", "discrete-cylinder", "random-basis", "basis-pair",
              "random-cylinder", "zebra", "pcs-k2", "pcs-cube")


def cmd_gen(args, report: Report):
    instance = generate(args.kind, args)
    report.instance = instance
    report.params = {"kind": args.kind, "seed": args.seed}
    report.add(Verdict("generated", "pass"))
    if args.output:
        _write(args.output, instance if isinstance(instance, str) else io.dumps(instance))


def cmd_check(args, report: Report):
    unknown = [c for c in args.checks if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)} (known: {', '.join(CHECKS)})")
    data = _load(args.file)
    report.instance = data
    kind = _kind(data)
    report.params = {"checks": list(args.checks)}
    checks = args.checks or _default_checks(kind)
    for name in checks:
        if name == "basis":
            _check_basis(report, data, kind)
        elif name == "morphism":
            _check_morphism(report, data, kind)
        elif name == "quotient":
            _check_quotient(report, data, kind, args)
        elif name == "zebra":
            _check_zebra(report, data, kind, args)


def _default_checks(kind):
    return {"basis": ["basis"], "locmap": ["basis", "morphism"], "cylinder": ["basis", "morphism", "quotient"],
            "zebra": ["zebra"]}.get(kind, [])


def _not_applicable(report, name, kind):
    report.add(Verdict(name, "n/a", f"not applicable to a {kind} instance"))


def _check_basis(report, data, kind):
    if kind == "basis":
        bases = {"basis": io.basis_from_json(data)}
    elif kind == "locmap":
        bases = {"source": io.lpo_from_json(data.get("source"), "source").basis,
                 "target": io.lpo_from_json(data.get("target"), "target").basis}
    elif kind == "cylinder":
        cyl = io.cylinder_from_json(data)
        bases = {"base": cyl.base.basis, "cylinder": cyl.lpo.basis}
    elif kind == "basis-pair":
        from .basis import is_equivalent, is_strictly_equivalent
        a, b = io.basis_from_json(data["first"], "first"), io.basis_from_json(data["second"], "second")
        for key, basis in (("first", a), ("second", b)):
            v = validate_basis(basis)
            report.add(Verdict(f"basis:{key}", "pass" if v is None else "fail", None if v is None else v.to_json()))
        eq, seq = is_equivalent(a, b), is_strictly_equivalent(a, b)
        report.add(verdict("basis:equivalence-agrees", eq == seq, {"equivalent": eq, "strictly_equivalent": seq}))
        return
    else:
        return _not_applicable(report, "basis", kind)
    for key, basis in bases.items():
        v = validate_basis(basis)
        report.add(Verdict(f"basis:{key}", "pass" if v is None else "fail", None if v is None else v.to_json()))


def _check_morphism(report, data, kind):
    if kind == "locmap":
        _morphism_verdicts(report, io.locmap_from_json(data), "morphism:")
    elif kind == "cylinder":
        cyl = io.cylinder_from_json(data)
        for m in (cyl.i_star, cyl.c_star, cyl.p2):
            f = m.first_failure()
            report.add(verdict(f"morphism:{m.name}", f is None, None if f is None else label(f.point)))
    else:
        _not_applicable(report, "morphism", kind)


def _check_quotient(report, data, kind, args):
    if kind != "cylinder":
        return _not_applicable(report, "quotient", kind)
    cyl = io.cylinder_from_json(data)
    if "O" in data:
        O = frozenset(io.resolve_point(cyl.base.points, t, "O") for t in data["O"])
    else:
        O = cyl.base.space.min_open[cyl.star]
    Q = build_quotient(cyl, O)
    report.add(verdict("quotient:K(q_O)=O", compute_K(Q.q) == O, io.sorted_labels(O)))
    closures = [transitive_closure(g.below, g.carrier) for g in Q.generators]
    report.add(verdict("quotient:generator-orders-antisymmetric", all(cl.antisymmetric for cl in closures)))
    report.add(verdict("quotient:generator-orders-closed", all(
        cl.relation == g.order for cl, g in zip(closures, Q.generators))))
    report.add(verdict("quotient:basis-valid", validate_basis(Q.basis) is None))
    report.add(verdict("quotient:q_O-locally-increasing", Q.q_map.first_failure() is None))
    oracle = _parse_oracle(args.oracle)
    if oracle is not None:
        _oracle_verdict(report, Q, oracle, args)


def _check_zebra(report, data, kind, args):
    if kind != "zebra":
        return _not_applicable(report, "zebra", kind)
    Z = io.zebra_from_json(data)
    if args.resolutions:
        result = zebra_report(_resolutions(args.resolutions), len(Z.stripes) - 1, Z.circle)
    else:
        result = _single_zebra(Z)
    _zebra_verdicts(report, result)
    report.data["zebra"] = result


def cmd_schema(args, report: Report):
    report.instance = None
    report.data = {"schema": REPORT_SCHEMA}


# --------------------------------------------------------------------------
# argument parsing


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="OUT", help="also write the report to this file")
    common.add_argument("--dot", metavar="OUT", help="write a DOT drawing of the orders involved")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=2000, help="map budget for sampled oracles")
    common.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    parser = argparse.ArgumentParser(prog="loco", description="Finite locally ordered spaces and their coequalizers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-basis", parents=[common], help="check an ordered basis file")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate_basis)

    p = sub.add_parser("check-morphism", parents=[common], help="check that a map is locally increasing")
    p.add_argument("file")
    p.set_defaults(run=cmd_check_morphism)

    p = sub.add_parser("coeq", parents=[common], help="coequalizer of the section and the constant map")
    p.add_argument("--cylinder", metavar="FILE")
    p.add_argument("--circle", default="khalimsky:2")
    p.add_argument("--base", default="ultra:3")
    p.add_argument("--star")
    p.add_argument("--flavor", choices=FLAVORS, default="locord")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--oracle", help="exhaustive | sample:<n>")
    p.add_argument("--max-target-points", type=int, default=None)
    p.set_defaults(run=cmd_coeq)

    p = sub.add_parser("zebra", parents=[common], help="the zebra cylinder at several resolutions")
    p.add_argument("--circle", default="khalimsky:2")
    p.add_argument("--resolutions", default="8,16,32")
    p.add_argument("--count", type=int, default=3, help="number of fitted stripes")
    p.add_argument("--levels", type=int)
    p.add_argument("--stripes", help='explicit stripes "a-b,c-d,..."')
    p.set_defaults(run=cmd_zebra)

    p = sub.add_parser("table-repro", parents=[common], help="reproduce the ultrafilter column of the reference table")
    p.set_defaults(run=cmd_table_repro)

    p = sub.add_parser("pcs", parents=[common], help="precubical sets")
    p.add_argument("action", choices=("validate", "collapses", "mutate"))
    p.add_argument("file", nargs="?")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--cube-dim", type=int, default=3)
    p.set_defaults(run=cmd_pcs)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("kind", choices=GENERATORS)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--base", default="ultra:3")
    p.add_argument("--star")
    p.add_argument("--points", type=int)
    p.add_argument("--circle", default="khalimsky:2")
    p.add_argument("--levels", type=int, default=16)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--stripes")
    p.add_argument("--cube-dim", type=int, default=3)
    p.add_argument("-o", "--output", help="write the bare instance here")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="run named invariant suites on an instance file")
    p.add_argument("file")
    p.add_argument("checks", nargs="*", help=f"any of {', '.join(CHECKS)}")
    p.add_argument("--resolutions")
    p.add_argument("--oracle")
    p.add_argument("--max-target-points", type=int, default=None)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("schema", parents=[common], help="print the JSON schema of reports")
    p.set_defaults(run=cmd_schema)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    argv_echo = list(sys.argv[1:] if argv is None else argv)
    report = Report(argv_echo, None)
    start = time.perf_counter()
    try:
        args.run(args, report)
    except (io.InstanceError, UsageError, PcsParseError, StripeError, QuotientError, InvalidSpace, OSError) as err:
        print(f"loco: error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"loco: error: {err}", file=sys.stderr)
        return 2
    if args.timing:
        report.timing = round(time.perf_counter() - start, 6)
    if args.command == "schema":
        text = io.dumps(REPORT_SCHEMA)
    else:
        text = report.dumps()
    sys.stdout.write(text)
    if args.json:
        _write(args.json, text)
    return 0 if args.command == "schema" else report.exit_code


if __name__ == "__main__":
    sys.exit(main())
