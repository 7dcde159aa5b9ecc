"""JSON reading and writing of spaces, bases, maps and instances.

Point ids in files are opaque strings.  Notations such as ``"ultra:3"`` may be
used wherever a base or circle is expected; points of such bases are then
matched against file labels by their string form.
"""
from __future__ import annotations

import json
from typing import Any

from .basis import OrderedBasis, validate_basis
from .circles import Cylinder, parse_base, parse_circle
from .losp import InvalidSpace, LocallyOrderedSpace, LocMap
from .order import FinSpace, Poset, SpaceError, label, sort_points
from .zebra import ZebraCylinder, format_stripes, make_zebra, parse_stripes


class InstanceError(ValueError):
    """A file that does not describe a valid instance; carries a location when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str = ""):
        where = f"line {line}, column {column}: " if line is not None else ""
        where += f"{path}: " if path else ""
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.path = path


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InstanceError(err.msg, err.lineno, err.colno) from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def read_instance(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = loads(fh.read())
    if not isinstance(data, dict):
        raise InstanceError("top level must be an object")
    return data


def _need(data, key, kind, path):
    if not isinstance(data, dict) or key not in data:
        raise InstanceError(f"missing field {key!r}", path=path)
    value = data[key]
    if not isinstance(value, kind):
        raise InstanceError(f"field {key!r} has the wrong type", path=path)
    return value


# --------------------------------------------------------------------------
# spaces, posets, bases


def finspace_from_json(data, path="space") -> FinSpace:
    points = [str(p) for p in _need(data, "points", list, path)]
    min_open = _need(data, "min_open", dict, path)
    try:
        return FinSpace({p: [str(q) for q in min_open.get(p, [p])] for p in points}, points)
    except SpaceError as err:
        raise InstanceError(str(err), path=path) from None


def poset_from_json(data, path="poset") -> Poset:
    carrier = [str(p) for p in _need(data, "carrier", list, path)]
    pairs = [tuple(str(x) for x in pair) for pair in data.get("pairs", [])]
    if any(len(p) != 2 for p in pairs):
        raise InstanceError("pairs must have two entries", path=path)
    try:
        return Poset.from_pairs(carrier, pairs)
    except ValueError as err:
        raise InstanceError(str(err), path=path) from None


def basis_from_json(data, path="basis") -> OrderedBasis:
    space = finspace_from_json(_need(data, "space", dict, path), path + ".space")
    elements = tuple(poset_from_json(e, f"{path}.elements[{i}]")
                     for i, e in enumerate(_need(data, "elements", list, path)))
    return OrderedBasis(space, elements, bool(data.get("strict", False)))


def lpo_from_json(data, path="space", name="") -> LocallyOrderedSpace:
    """A locally ordered space from a basis object or a base/circle notation string."""
    if isinstance(data, str):
        try:
            return parse_base(data)
        except ValueError:
            pass
        try:
            return parse_circle(data).lpo
        except ValueError as err:
            raise InstanceError(str(err), path=path) from None
    basis = basis_from_json(data, path)
    try:
        return LocallyOrderedSpace(basis, name)
    except InvalidSpace as err:
        raise InstanceError(str(err), path=path) from None


def resolve_point(points, text, path=""):
    for p in points:
        if label(p) == str(text):
            return p
    raise InstanceError(f"unknown point {text!r}", path=path)


# --------------------------------------------------------------------------
# maps and instances


def locmap_from_json(data, path="locmap") -> LocMap:
    source = lpo_from_json(data.get("source"), path + ".source", "source")
    target = lpo_from_json(data.get("target"), path + ".target", "target")
    raw = _need(data, "map", dict, path)
    mapping = {}
    for p in source.points:
        if label(p) not in raw:
            raise InstanceError(f"map undefined at {label(p)}", path=path)
        mapping[p] = resolve_point(target.points, raw[label(p)], path)
    return LocMap(source, target, mapping, data.get("name", "f"))


def locmap_to_json(m: LocMap) -> dict:
    return {"kind": "locmap", "source": m.source.to_json(), "target": m.target.to_json(),
            "map": m.to_json()["map"]}


def cylinder_from_json(data, path="cylinder") -> Cylinder:
    try:
        circle = parse_circle(_need(data, "circle", str, path))
    except ValueError as err:
        raise InstanceError(str(err), path=path) from None
    base = lpo_from_json(data.get("base"), path + ".base", "base")
    star = resolve_point(base.points, _need(data, "star", (str, int), path), path)
    return Cylinder(circle, base, star)


def cylinder_to_json(c: Cylinder, base_notation: str | None = None) -> dict:
    return {"kind": "cylinder", "circle": c.circle.notation,
            "base": base_notation if base_notation is not None else c.base.to_json(),
            "star": label(c.star)}


def zebra_from_json(data, path="zebra") -> ZebraCylinder:
    try:
        circle = parse_circle(data.get("circle", "khalimsky:2"))
        levels = _need(data, "levels", int, path)
        stripes = data.get("stripes")
        if isinstance(stripes, str):
            stripes = parse_stripes(stripes)
        return make_zebra(circle, levels, stripes, data.get("count", 3))
    except ValueError as err:
        raise InstanceError(str(err), path=path) from None


def zebra_to_json(z: ZebraCylinder) -> dict:
    return {"kind": "zebra", "circle": z.circle.notation, "levels": z.levels, "stripes": format_stripes(z.stripes)}


def basis_violation_json(basis: OrderedBasis):
    v = validate_basis(basis)
    return None if v is None else v.to_json()


def sorted_labels(points) -> list:
    return [label(p) for p in sort_points(points)]
