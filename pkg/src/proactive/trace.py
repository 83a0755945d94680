"""Trace events and their JSON Lines form (schema version 1).

One event per simulation step. Field order is fixed so traces are
byte-stable: identical runs serialize identically, and the HTTP bridge
reuses this exact serialization (no second schema).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

SCHEMA_VERSION = 1

_FIELDS = (
    "schema",
    "step",
    "mode",
    "state",
    "changed",
    "atoms",
    "intention",
    "opportunities",
    "chosen",
    "dispatched",
    "result_state",
    "result_atoms",
    "seed",
)


class TraceError(Exception):
    """Trace line does not match the schema."""


@dataclass(frozen=True)
class TraceEvent:
    step: int
    mode: str
    state: str
    changed: bool
    atoms: tuple[str, ...]
    intention: dict[str, Any] | None
    opportunities: tuple[dict[str, Any], ...]
    chosen: dict[str, Any] | None
    dispatched: dict[str, Any] | None
    result_state: str
    result_atoms: tuple[str, ...]
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "step": self.step,
            "mode": self.mode,
            "state": self.state,
            "changed": self.changed,
            "atoms": list(self.atoms),
            "intention": self.intention,
            "opportunities": [dict(o) for o in self.opportunities],
            "chosen": dict(self.chosen) if self.chosen is not None else None,
            "dispatched": dict(self.dispatched) if self.dispatched is not None else None,
            "result_state": self.result_state,
            "result_atoms": list(self.result_atoms),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "TraceEvent":
        if set(raw) != set(_FIELDS):
            missing = set(_FIELDS) - set(raw)
            extra = set(raw) - set(_FIELDS)
            raise TraceError(f"bad trace fields: missing {sorted(missing)}, extra {sorted(extra)}")
        if raw["schema"] != SCHEMA_VERSION:
            raise TraceError(f"unsupported trace schema {raw['schema']!r}")
        return cls(
            step=raw["step"],
            mode=raw["mode"],
            state=raw["state"],
            changed=raw["changed"],
            atoms=tuple(raw["atoms"]),
            intention=raw["intention"],
            opportunities=tuple(raw["opportunities"]),
            chosen=raw["chosen"],
            dispatched=raw["dispatched"],
            result_state=raw["result_state"],
            result_atoms=tuple(raw["result_atoms"]),
            seed=raw["seed"],
        )

    @classmethod
    def from_json(cls, line: str) -> "TraceEvent":
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceError(f"not valid JSON: {exc}") from exc
        return cls.from_dict(raw)


def dump_jsonl(events: list[TraceEvent]) -> str:
    return "".join(e.to_json() + "\n" for e in events)


def load_jsonl(text: str) -> list[TraceEvent]:
    return [TraceEvent.from_json(line) for line in text.splitlines() if line.strip()]
