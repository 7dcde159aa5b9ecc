"""Precubical sets with optional degeneracies, face-law checking and collapse detection.

Conventions.  A cell of dimension n has faces d-i and d+i for 0 <= i < n.
The precubical identities checked are

    d(e,i) d(h,j) x = d(h,j) d(e,i+1) x      for 0 <= j <= i < n-1,

and, for each recorded degeneracy s_j : K_n -> K_{n+1},

    d(e,j) s_j x = x,
    d(e,i) s_j x = s_{j-1} d(e,i) x          for i < j,
    d(e,i) s_j x = s_j d(e,i-1) x            for i > j,

the last two only when every term is recorded.

Text format, one cell per line (``#`` starts a comment)::

    2 s : d-0=b d+0=t d-1=v d+1=v
    0 p : s0=b
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

_TOKEN = re.compile(r"^(d[-+]\d+|s\d+)=(\S+)$")


class PcsParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass
class PrecubicalSet:
    dims: dict = field(default_factory=dict)         # id -> dimension
    faces: dict = field(default_factory=dict)        # (id, sign, i) -> id, sign in "-+"
    degeneracies: dict = field(default_factory=dict)  # (id, j) -> id

    def cells(self, n: int) -> list:
        return sorted(c for c, d in self.dims.items() if d == n)

    @property
    def dimension(self) -> int:
        return max(self.dims.values(), default=-1)

    def face(self, x, sign, i):
        return self.faces.get((x, sign, i))

    def add(self, cell, dim: int, faces=None, degeneracies=None):
        self.dims[cell] = dim
        for (sign, i), y in (faces or {}).items():
            self.faces[(cell, sign, i)] = y
        for j, y in (degeneracies or {}).items():
            self.degeneracies[(cell, j)] = y
        return self

    def copy(self) -> "PrecubicalSet":
        return PrecubicalSet(dict(self.dims), dict(self.faces), dict(self.degeneracies))

    def to_text(self) -> str:
        lines = []
        for n in range(self.dimension + 1):
            for c in self.cells(n):
                parts = [f"d{sign}{i}={self.faces[(c, sign, i)]}"
                         for i in range(n) for sign in "-+" if (c, sign, i) in self.faces]
                parts += [f"s{j}={y}" for (x, j), y in sorted(self.degeneracies.items()) if x == c]
                lines.append(f"{n} {c} : {' '.join(parts)}".rstrip())
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {"cells": {c: self.dims[c] for c in sorted(self.dims)},
                "faces": {f"{x} d{s}{i}": y for (x, s, i), y in sorted(self.faces.items())},
                "degeneracies": {f"{x} s{j}": y for (x, j), y in sorted(self.degeneracies.items())}}


def parse_pcs(text: str) -> PrecubicalSet:
    p = PrecubicalSet()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise PcsParseError(lineno, len(line) + 1, "expected 'dim id : faces'")
        words = head.split()
        if len(words) != 2 or not words[0].isdigit():
            raise PcsParseError(lineno, 1, "expected a dimension and a cell id before ':'")
        dim, cell = int(words[0]), words[1]
        if cell in p.dims:
            raise PcsParseError(lineno, head.index(cell) + 1, f"cell {cell!r} defined twice")
        p.dims[cell] = dim
        col = len(head) + 2
        for token in tail.split():
            col = line.index(token, col - 1) + 1
            m = _TOKEN.match(token)
            if not m:
                raise PcsParseError(lineno, col, f"bad entry {token!r}")
            key, value = m.groups()
            if key[0] == "d":
                sign, i = key[1], int(key[2:])
                if (cell, sign, i) in p.faces:
                    raise PcsParseError(lineno, col, f"face {key} given twice")
                p.faces[(cell, sign, i)] = value
            else:
                p.degeneracies[(cell, int(key[1:]))] = value
            col += len(token)
    return p


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class PcsViolation:
    kind: str          # "parse" | "missing-face" | "extra-face" | "unknown-cell" | "wrong-dimension" | "face-identity" | "degeneracy-identity"
    cell: str | None
    detail: str

    def to_json(self):
        return {"kind": self.kind, "cell": self.cell, "detail": self.detail}


def _typing_violations(p: PrecubicalSet) -> list:
    out = []
    for c, n in sorted(p.dims.items()):
        for i in range(n):
            for sign in "-+":
                if (c, sign, i) not in p.faces:
                    out.append(PcsViolation("missing-face", c, f"d{sign}{i} undefined"))
    for (c, sign, i), y in sorted(p.faces.items()):
        n = p.dims[c]
        if i >= n:
            out.append(PcsViolation("extra-face", c, f"d{sign}{i} on a cell of dimension {n}"))
        elif y not in p.dims:
            out.append(PcsViolation("unknown-cell", c, f"d{sign}{i}={y} is not a cell"))
        elif p.dims[y] != n - 1:
            out.append(PcsViolation("wrong-dimension", c, f"d{sign}{i}={y} has dimension {p.dims[y]}"))
    for (c, j), y in sorted(p.degeneracies.items()):
        n = p.dims[c]
        if y not in p.dims:
            out.append(PcsViolation("unknown-cell", c, f"s{j}={y} is not a cell"))
        elif p.dims[y] != n + 1 or j > n:
            out.append(PcsViolation("wrong-dimension", c, f"s{j}={y} has dimension {p.dims[y]}"))
    return out


def validate_pcs(source) -> list:
    """Every violated law, as a list; empty means valid.  Accepts text or a PrecubicalSet."""
    if isinstance(source, str):
        try:
            p = parse_pcs(source)
        except PcsParseError as err:
            return [PcsViolation("parse", None, str(err))]
    else:
        p = source
    out = _typing_violations(p)
    if out:
        return out
    d = p.face
    for x in sorted(p.dims):
        n = p.dims[x]
        for i in range(n - 1):
            for j in range(i + 1):
                for e in "-+":
                    for h in "-+":
                        lhs, rhs = d(d(x, h, j), e, i), d(d(x, e, i + 1), h, j)
                        if lhs != rhs:
                            out.append(PcsViolation(
                                "face-identity", x,
                                f"d{e}{i} d{h}{j} {x} = {lhs} but d{h}{j} d{e}{i + 1} {x} = {rhs}"))
    s = p.degeneracies
    for (x, j), y in sorted(s.items()):
        n = p.dims[x]
        for e in "-+":
            if d(y, e, j) != x:
                out.append(PcsViolation("degeneracy-identity", x, f"d{e}{j} s{j} {x} = {d(y, e, j)}, expected {x}"))
            for i in range(n + 1):
                if i == j:
                    continue
                if i < j:
                    rhs = s.get((d(x, e, i), j - 1))
                else:
                    rhs = s.get((d(x, e, i - 1), j))
                if rhs is not None and d(y, e, i) != rhs:
                    out.append(PcsViolation("degeneracy-identity", x,
                                            f"d{e}{i} s{j} {x} = {d(y, e, i)} but the identity gives {rhs}"))
    return out


# --------------------------------------------------------------------------
# collapses


@dataclass(frozen=True)
class Collapse:
    kind: str        # "loop-identification" | "edge-collapse" | "degenerate-cell"
    cell: str
    index: int
    detail: str

    def to_json(self):
        return {"kind": self.kind, "cell": self.cell, "index": self.index, "detail": self.detail}


def _loops(p: PrecubicalSet) -> set:
    return {(x, i) for x, n in p.dims.items() for i in range(n)
            if p.face(x, "-", i) == p.face(x, "+", i)}


def _inherited(p: PrecubicalSet, loops: set) -> set:
    """Loops forced on faces by a loop of a cell above them.

    If d-k y = d+k y then the face identities force the faces of every other
    face of y to coincide in the matching direction.
    """
    out = set()
    for y, k in loops:
        for j in range(p.dims[y]):
            if j == k:
                continue
            for h in "-+":
                out.add((p.face(y, h, j), k - 1 if j < k else k))
    return out


def detect_collapses(p: PrecubicalSet) -> list:
    """Self-identifications of opposite faces, reported at their source.

    Loops that follow from a loop further up, or from a recorded degeneracy,
    are not repeated: the finding is the cell where the identification is
    imposed.
    """
    loops = _loops(p)
    inherited = _inherited(p, loops)
    degenerate = {y: (x, j) for (x, j), y in p.degeneracies.items()}
    found = []
    for x in sorted(degenerate):
        base, j = degenerate[x]
        kind = "edge-collapse" if p.dims[x] == 1 else "degenerate-cell"
        found.append(Collapse(kind, x, j, f"{x} = s{j} {base}: reduced to the lower-dimensional cell {base}"))
    for x, i in sorted(loops):
        if (x, i) in inherited or degenerate.get(x, (None, None))[1] == i:
            continue
        face = p.face(x, "-", i)
        found.append(Collapse("loop-identification", x, i, f"d-{i} {x} = d+{i} {x} = {face}"))
    found.sort(key=lambda c: (c.kind != "loop-identification", -p.dims[c.cell], c.cell, c.index))
    return found


# --------------------------------------------------------------------------
# standard instances


def k2() -> PrecubicalSet:
    """One square whose vertical edges are glued and whose lower edge is degenerate."""
    p = PrecubicalSet()
    p.add("p", 0, degeneracies={0: "b"})
    p.add("q", 0)
    p.add("b", 1, {("-", 0): "p", ("+", 0): "p"})
    p.add("t", 1, {("-", 0): "q", ("+", 0): "q"})
    p.add("v", 1, {("-", 0): "p", ("+", 0): "q"})
    p.add("s", 2, {("-", 0): "b", ("+", 0): "t", ("-", 1): "v", ("+", 1): "v"})
    return p


def square() -> PrecubicalSet:
    p = PrecubicalSet()
    for v in ("00", "01", "10", "11"):
        p.add(v, 0)
    p.add("a", 1, {("-", 0): "00", ("+", 0): "10"})
    p.add("b", 1, {("-", 0): "01", ("+", 0): "11"})
    p.add("c", 1, {("-", 0): "00", ("+", 0): "01"})
    p.add("d", 1, {("-", 0): "10", ("+", 0): "11"})
    # d_0 drops the first coordinate's freedom: d-0 s is the edge with x0 = 0
    p.add("s", 2, {("-", 0): "c", ("+", 0): "d", ("-", 1): "a", ("+", 1): "b"})
    return p


def torus() -> PrecubicalSet:
    p = PrecubicalSet()
    p.add("v", 0)
    p.add("a", 1, {("-", 0): "v", ("+", 0): "v"})
    p.add("c", 1, {("-", 0): "v", ("+", 0): "v"})
    p.add("s", 2, {("-", 0): "a", ("+", 0): "a", ("-", 1): "c", ("+", 1): "c"})
    return p


def discrete_vertices(k: int) -> PrecubicalSet:
    p = PrecubicalSet()
    for i in range(k):
        p.add(f"v{i}", 0)
    return p


def standard_cube(n: int) -> PrecubicalSet:
    """All faces of the n-cube; a cell is a word over {0, 1, x}.

    d(e, i) replaces the i-th free coordinate by 0 (e = -) or 1 (e = +).
    """
    from itertools import product
    p = PrecubicalSet()
    for word in product("01x", repeat=n):
        w = "".join(word)
        free = [k for k, ch in enumerate(w) if ch == "x"]
        faces = {}
        for i, k in enumerate(free):
            for sign, bit in (("-", "0"), ("+", "1")):
                faces[(sign, i)] = w[:k] + bit + w[k + 1:]
        p.add(w, len(free), faces)
    return p


@dataclass
class MutationReport:
    mutants: int
    detected: int
    missed: list

    @property
    def rate(self) -> float:
        return self.detected / self.mutants if self.mutants else 1.0

    def to_json(self):
        return {"mutants": self.mutants, "detected": self.detected, "rate": self.rate, "missed": self.missed}


def mutate_face(p: PrecubicalSet, rng: random.Random) -> tuple:
    """Redirect one face to another cell of the right dimension."""
    slots = sorted(k for k in p.faces if len(p.cells(p.dims[k[0]] - 1)) > 1)
    key = rng.choice(slots)
    old = p.faces[key]
    new = rng.choice([c for c in p.cells(p.dims[key[0]] - 1) if c != old])
    q = p.copy()
    q.faces[key] = new
    return q, {"cell": key[0], "face": f"d{key[1]}{key[2]}", "old": old, "new": new}


def mutation_harness(p: PrecubicalSet | None = None, count: int = 200, seed: int = 0) -> MutationReport:
    p = standard_cube(3) if p is None else p
    if validate_pcs(p):
        raise ValueError("the unmutated set must be valid")
    rng = random.Random(seed)
    missed, detected = [], 0
    for _ in range(count):
        q, edit = mutate_face(p, rng)
        if validate_pcs(q):
            detected += 1
        else:
            missed.append(edit)
    return MutationReport(count, detected, missed)
