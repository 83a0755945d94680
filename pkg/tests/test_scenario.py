from __future__ import annotations

import json

import pytest

from proactive import scenario as sc
from proactive.model import Atom
from proactive.scenario import packaged_scenario_path

MINIMAL = {
    "format": 1,
    "name": "tiny",
    "domain": {
        "text": "(define (domain tiny) (:predicates (p)) (:action a :agent robot :precondition (p) :effect (p)))"
    },
    "problem": {
        "text": "(define (problem t) (:domain tiny) (:objects o) (:init (p)) (:goal (p)))"
    },
    "initial": "only",
    "goals": [{"name": "g", "atoms": ["p"]}],
    "states": [{"id": "only", "atoms": ["p"], "des": 1.0}],
    "free_run": [],
    "des_default": 0.5,
    "modes": {"combined": {"substitutions": False}},
    "params": {"lookahead": 1},
}


def minimal(**overrides) -> dict:
    doc = json.loads(json.dumps(MINIMAL))
    doc.update(overrides)
    return doc


class TestParseScenario:
    def test_shipped_scenario_shape(self, scenario):
        assert len(scenario.goals) == 4
        assert scenario.params.lookahead == 2
        assert scenario.file.initial == "s0"

    def test_minimal_single_state_scenario(self):
        parsed = sc.parse_scenario(json.dumps(minimal()))
        resolved = sc.resolve_scenario(parsed)
        # no free-run edges: the only state is a sink with an implicit loop
        from proactive.eqm import free_run

        state = resolved.initial
        assert free_run(resolved.system, state, 1) == frozenset((state,))

    def test_des_out_of_range(self):
        doc = minimal(states=[{"id": "only", "atoms": ["p"], "des": 1.3}])
        with pytest.raises(sc.ScenarioError, match="des out of range"):
            sc.parse_scenario(json.dumps(doc))

    def test_dangling_free_run_edge(self):
        doc = minimal(free_run=[["only", "missing"]])
        with pytest.raises(sc.ScenarioError, match="unknown state missing"):
            sc.parse_scenario(json.dumps(doc))

    def test_dangling_initial(self):
        doc = minimal(initial="nope")
        with pytest.raises(sc.ScenarioError, match="initial"):
            sc.parse_scenario(json.dumps(doc))

    def test_negative_lookahead(self):
        doc = minimal(params={"lookahead": -1})
        with pytest.raises(sc.ScenarioError, match="lookahead"):
            sc.parse_scenario(json.dumps(doc))

    def test_unknown_format(self):
        with pytest.raises(sc.ScenarioError, match="format"):
            sc.parse_scenario(json.dumps(minimal(format=2)))

    def test_duplicate_state_ids(self):
        doc = minimal(
            states=[
                {"id": "only", "atoms": ["p"], "des": 1.0},
                {"id": "only", "atoms": [], "des": 0.5},
            ]
        )
        with pytest.raises(sc.ScenarioError, match="duplicate state id"):
            sc.parse_scenario(json.dumps(doc))

    def test_scaling_factor_ranges(self):
        doc = minimal(params={"decrease_factor": 1.0})
        with pytest.raises(sc.ScenarioError, match="decrease_factor"):
            sc.parse_scenario(json.dumps(doc))
        doc = minimal(params={"increase_factor": 0.0})
        with pytest.raises(sc.ScenarioError, match="increase_factor"):
            sc.parse_scenario(json.dumps(doc))

    def test_not_json(self):
        with pytest.raises(sc.ScenarioError, match="not valid JSON"):
            sc.parse_scenario("(define (domain oops))")


class TestResolveScenario:
    def test_undeclared_atom_in_state(self):
        doc = minimal(states=[{"id": "only", "atoms": ["zap"], "des": 1.0}])
        with pytest.raises(sc.ScenarioError, match="unknown predicate zap"):
            sc.resolve_scenario(sc.parse_scenario(json.dumps(doc)))

    def test_substitution_must_resolve(self):
        doc = minimal(substitutions={"nope": {"action": "a", "message": ""}})
        with pytest.raises(sc.ScenarioError, match="nope"):
            sc.resolve_scenario(sc.parse_scenario(json.dumps(doc)))

    def test_substitution_target_must_be_robot_capable(self, scenario):
        doc = json.loads(sc.render_scenario(scenario.file))
        doc["domain"] = {"text": (packaged_scenario_path().parent / "domestic.pddl").read_text()}
        doc["problem"] = {
            "text": (packaged_scenario_path().parent / "domestic-hiking.pddl").read_text()
        }
        doc["substitutions"] = {"leave-home": {"action": "leave-home", "message": ""}}
        with pytest.raises(sc.ScenarioError, match="not robot-capable"):
            sc.resolve_scenario(sc.parse_scenario(json.dumps(doc)))

    def test_action_labels_applied_everywhere(self, scenario):
        tell = scenario.action_by_key("tell-ready-to-leave")
        assert tell.display == "tell ready-to-leave"
        (scheme,) = [s for s in scenario.schemes if s.key == "tell-ready-to-leave"]
        assert scheme.display == "tell ready-to-leave"

    def test_paper_des_values(self, scenario, states):
        desmap = scenario.desmap
        assert desmap.value(states("s0")) == 1.0
        assert desmap.value(states("s1.0")) == 0.6
        assert desmap.value(states("s4.0")) == 0.0
        assert desmap.value(states("s4.1")) == 0.4

    def test_substitution_map(self, scenario):
        subs = scenario.substitution_map()
        assert subs["leave-home"].action.key == "tell-ready-to-leave"
        assert subs["leave-home"].message == "ready to leave now"

    def test_goal_atoms_resolved(self, scenario):
        hiking = [g for g in scenario.goals if g.name == "hiking"][0]
        assert Atom("human-outside") in hiking.atoms


class TestRoundTrip:
    def test_shipped_file_fixpoint(self):
        text = packaged_scenario_path().read_text()
        first = sc.parse_scenario(text)
        rendered = sc.render_scenario(first)
        assert sc.parse_scenario(rendered) == first
        assert sc.render_scenario(sc.parse_scenario(rendered)) == rendered

    def test_minimal_fixpoint(self):
        first = sc.parse_scenario(json.dumps(minimal()))
        rendered = sc.render_scenario(first)
        assert sc.parse_scenario(rendered) == first
