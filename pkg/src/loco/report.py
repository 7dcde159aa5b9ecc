"""Machine-readable reports: verdicts, a content digest, and the JSON schema they follow."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

from .io import canonical_json, dumps

STATUSES = ("pass", "fail", "n/a", "undecided", "inconclusive")

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "loco report",
    "type": "object",
    "required": ["command", "instance", "digest", "verdicts", "data", "timing", "exit_code"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "array", "items": {"type": "string"}},
        "instance": {},
        "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "witness"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": list(STATUSES)},
                    "witness": {},
                },
            },
        },
        "data": {"type": "object"},
        "timing": {"type": ["number", "null"]},
        "exit_code": {"type": "integer", "minimum": 0},
    },
}


@dataclass
class Verdict:
    name: str
    status: str
    witness: Any = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_json(self):
        return {"name": self.name, "status": self.status, "witness": self.witness}


def verdict(name: str, ok: bool, witness=None) -> Verdict:
    return Verdict(name, "pass" if ok else "fail", witness)


def digest(instance, params=None) -> str:
    """sha256 over the canonical JSON of the instance and the parameters that shape the run."""
    blob = canonical_json({"instance": instance, "params": params or {}})
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class Report:
    command: list
    instance: Any
    params: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timing: float | None = None

    def add(self, v: Verdict) -> Verdict:
        self.verdicts.append(v)
        return v

    @property
    def exit_code(self) -> int:
        return 0 if all(v.status in ("pass", "n/a") for v in self.verdicts) else 1

    @property
    def digest(self) -> str:
        return digest(self.instance, self.params)

    def to_json(self):
        return {"command": list(self.command), "instance": self.instance, "digest": self.digest,
                "verdicts": [v.to_json() for v in self.verdicts], "data": self.data,
                "timing": self.timing, "exit_code": self.exit_code}

    def dumps(self) -> str:
        return dumps(self.to_json())
