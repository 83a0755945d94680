from __future__ import annotations

import json

import pytest

from conftest import FIXTURES
from proactive.trace import TraceError, TraceEvent, dump_jsonl, load_jsonl


@pytest.mark.parametrize("name", ["golden_hir", "golden_combined", "golden_eqm"])
def test_golden_traces_reparse_losslessly(name):
    text = (FIXTURES / f"{name}.jsonl").read_text()
    events = load_jsonl(text)
    assert dump_jsonl(events) == text


def test_round_trip_single_event():
    line = (FIXTURES / "golden_combined.jsonl").read_text().splitlines()[1]
    event = TraceEvent.from_json(line)
    assert event.to_json() == line
    assert event.mode == "combined"
    assert event.dispatched["action"] == "gather water-bottle"


def test_unknown_schema_rejected():
    line = (FIXTURES / "golden_hir.jsonl").read_text().splitlines()[0]
    raw = json.loads(line)
    raw["schema"] = 99
    with pytest.raises(TraceError, match="schema"):
        TraceEvent.from_dict(raw)


def test_missing_field_rejected():
    raw = json.loads((FIXTURES / "golden_hir.jsonl").read_text().splitlines()[0])
    del raw["seed"]
    with pytest.raises(TraceError, match="missing"):
        TraceEvent.from_dict(raw)


def test_not_json_rejected():
    with pytest.raises(TraceError):
        TraceEvent.from_json("not json at all")
