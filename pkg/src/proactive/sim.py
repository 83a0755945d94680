"""Simulation sessions: replay scripted free-run trajectories or step
interactively, run the mode's decision procedure at every state change,
apply dispatched robot actions, and record a trace.

A session tracks two views of the world: the scripted *base* state (a node
of the free-run graph) and the *actual* atom set, which carries the
cumulative effects of dispatched robot actions forward across trajectory
steps. A trajectory target whose primed variant equals the current actual
atoms is a logged no-op: the decision procedure only runs on real change,
which is what reproduces the published run (the robot's tell at s2.0'
leaves nothing new to decide at s3.0).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from . import eqm, hir, select
from .model import Atom, GroundAction, WorldState, apply, atoms_to_strings, satisfies
from .scenario import Scenario
from .trace import TraceEvent

MODES = ("hir", "eqm", "combined")


class SimError(Exception):
    """Simulation cannot proceed."""


class TrajectoryError(SimError):
    """Trajectory is not a null-input path of the scenario graph."""


class IllegalPickError(SimError):
    """Interactive pick is not enabled at the current state."""


def _opp_record(opp: eqm.Opportunity, current_label: str) -> dict[str, Any]:
    return {
        "source": opp.source,
        "action": opp.scheme.key,
        "label": opp.scheme.display,
        "acting_state": opp.acting_state.label or current_label,
        "type": opp.type_index,
        "k": opp.lookahead,
        "degree": opp.degree,
        "benefit": opp.benefit,
        "message": opp.message,
    }


@dataclass
class Session:
    """One simulation run. Single-threaded; create one per concurrent use."""

    scenario: Scenario
    mode: str
    seed: int
    rng: random.Random = field(init=False)
    base: WorldState | None = field(init=False, default=None)
    label: str = field(init=False, default="")
    atoms: frozenset[Atom] = field(init=False, default_factory=frozenset)
    robot_adds: frozenset[Atom] = field(init=False, default_factory=frozenset)
    robot_dels: frozenset[Atom] = field(init=False, default_factory=frozenset)
    last_atoms: frozenset[Atom] | None = field(init=False, default=None)
    events: list[TraceEvent] = field(init=False, default_factory=list)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise SimError(f"unknown mode {self.mode!r}")
        self.rng = random.Random(self.seed)

    # -- lifecycle --

    def start(self, initial_label: str | None = None) -> TraceEvent:
        """Enter the initial state and run the first decision."""
        label = initial_label if initial_label is not None else self.scenario.file.initial
        state = self.scenario.system.by_label(label)
        if state is None:
            raise TrajectoryError(f"unknown state id {label!r}")
        self.base = state
        self.label = label
        self.atoms = state.atoms
        return self._evaluate()

    def set_mode(self, mode: str) -> None:
        if mode not in MODES:
            raise SimError(f"unknown mode {mode!r}")
        self.mode = mode

    # -- stepping --

    def enabled_transitions(self) -> list[str]:
        """Target ids of null-input edges enabled at the current base."""
        if self.base is None:
            return []
        succ = eqm.free_run(self.scenario.system, self.base, 1)
        return sorted(s.label or "" for s in succ)

    def enabled_human_actions(self) -> list[str]:
        state = WorldState(self.atoms)
        return sorted(
            a.key
            for a in self.scenario.actions
            if a.human_capable() and satisfies(state, a.precondition)
        )

    def step_to(self, target_label: str) -> TraceEvent:
        """Advance along a scripted free-run edge, then decide."""
        target = self.scenario.system.by_label(target_label)
        if target is None:
            raise TrajectoryError(f"unknown state id {target_label!r}")
        if self.base is None:
            raise TrajectoryError("session has drifted off the graph; no edges enabled")
        succ = eqm.free_run(self.scenario.system, self.base, 1)
        if target not in succ:
            raise TrajectoryError(
                f"{self.base.label} -> {target_label} is not a free-run edge"
            )
        new_atoms = (target.atoms - self.robot_dels) | self.robot_adds
        self.base = target
        self.label = target_label if new_atoms == target.atoms else target_label + "'"
        self.atoms = new_atoms
        return self._evaluate()

    def pick_human_action(self, key: str, outcome: int | None = None) -> TraceEvent:
        """Apply a human-capable action chosen by the user, then decide."""
        action = self.scenario.action_by_key(key)
        if action is None or not action.human_capable():
            raise IllegalPickError(f"{key!r} is not a human-capable action")
        state = WorldState(self.atoms)
        if not satisfies(state, action.precondition):
            raise IllegalPickError(f"{key} is not applicable in the current state")
        outcomes = apply(state, action)
        idx = self._pick_outcome(outcomes, outcome)
        self.atoms = outcomes[idx].atoms
        member = self.scenario.system.lookup(outcomes[idx])
        if member is not None:
            self.base = member
            self.label = member.label or ""
            self.robot_adds = frozenset()
            self.robot_dels = frozenset()
        else:
            self.base = None
            self.label = self.label + "'"
        return self._evaluate()

    def _pick_outcome(self, outcomes: tuple[WorldState, ...], requested: int | None) -> int:
        if requested is not None:
            if not 0 <= requested < len(outcomes):
                raise IllegalPickError(f"outcome index {requested} out of range")
            return requested
        if len(outcomes) == 1:
            return 0
        return self.rng.randrange(len(outcomes))

    # -- the decision procedure --

    def _evaluate(self) -> TraceEvent:
        scenario = self.scenario
        changed = self.atoms != self.last_atoms
        state = WorldState(self.atoms, label=self.label)
        intention_rec: dict[str, Any] | None = None
        opp_records: tuple[dict[str, Any], ...] = ()
        chosen_rec: dict[str, Any] | None = None
        dispatched_rec: dict[str, Any] | None = None

        if changed and self.mode == "hir":
            intention_rec, chosen_rec, dispatched_rec = self._decide_hir(state)
            opp_records = (chosen_rec,) if chosen_rec is not None else ()
        elif changed:
            intention_rec, opp_records, chosen_rec, dispatched_rec = self._decide_pooled(state)

        self.last_atoms = self.atoms
        event = TraceEvent(
            step=len(self.events),
            mode=self.mode,
            state=state.label or "",
            changed=changed,
            atoms=tuple(atoms_to_strings(state.atoms)),
            intention=intention_rec,
            opportunities=opp_records,
            chosen=chosen_rec,
            dispatched=dispatched_rec,
            result_state=self.label,
            result_atoms=tuple(atoms_to_strings(self.atoms)),
            seed=self.seed,
        )
        self.events.append(event)
        return event

    def _substitutions(self) -> dict:
        if self.scenario.mode_config(self.mode).substitutions:
            return self.scenario.substitution_map()
        return {}

    def _decide_hir(self, state: WorldState):
        scenario = self.scenario
        step = hir.proactive_step(
            state, scenario.goals, scenario.actions, self._substitutions()
        )
        if step is None:
            intent = hir.recognize(state, scenario.goals, scenario.actions)
            return self._intention_record(intent), None, None
        intent, action, message = step
        chosen = {
            "source": "HIR",
            "action": action.key,
            "label": action.display,
            "acting_state": state.label,
            "type": None,
            "k": None,
            "degree": None,
            "benefit": None,
            "message": message,
        }
        dispatched = self._dispatch(state, action, message)
        return self._intention_record(intent), chosen, dispatched

    def _decide_pooled(self, state: WorldState):
        scenario = self.scenario
        include_hir = self.mode == "combined"
        intent = (
            hir.recognize(state, scenario.goals, scenario.actions) if include_hir else None
        )
        order = select.ChooseOrder(scenario.params.choose_order)
        decision = select.action_selection_step(
            state,
            scenario.params.lookahead,
            scenario.goals,
            scenario.actions,
            scenario.schemes,
            scenario.desmap,
            select.ScalingConfig(
                scenario.params.decrease_factor, scenario.params.increase_factor
            ),
            self._substitutions(),
            scenario.system,
            order,
            include_hir=include_hir,
            include_eqm=True,
        )
        ranked = sorted(decision.opportunities, key=order.key)
        opp_records = tuple(_opp_record(o, state.label or "") for o in ranked)
        chosen_rec = None
        dispatched_rec = None
        if decision.chosen is not None:
            chosen_rec = _opp_record(decision.chosen, state.label or "")
            if decision.deferred:
                chosen_rec = dict(chosen_rec, deferred=True)
            if decision.dispatch:
                action = decision.chosen.scheme.action  # type: ignore[attr-defined]
                dispatched_rec = self._dispatch(state, action, decision.chosen.message)
        return self._intention_record(intent), opp_records, chosen_rec, dispatched_rec

    def _intention_record(self, intent: hir.Intention | None) -> dict[str, Any] | None:
        if intent is None:
            return None
        return {
            "goal": intent.goal.name,
            "plan": list(intent.residual_plan.keys()),
            "length": intent.residual_plan.length,
        }

    def _dispatch(
        self, state: WorldState, action: GroundAction, message: str | None
    ) -> dict[str, Any]:
        outcomes = apply(state, action)
        idx = self._pick_outcome(outcomes, None)
        effect = action.effects[idx]
        new_atoms = outcomes[idx].atoms
        if new_atoms != self.atoms:
            self.robot_adds = (self.robot_adds - effect.dels) | effect.adds
            self.robot_dels = (self.robot_dels - effect.adds) | effect.dels
            self.atoms = new_atoms
            member = self.scenario.system.lookup(outcomes[idx])
            self.label = member.label if member and member.label else self.label + "'"
        return {
            "action": action.key,
            "label": action.display,
            "message": message,
            "outcome_index": idx,
        }


def replay(
    scenario: Scenario, mode: str, trajectory: list[str], seed: int
) -> list[TraceEvent]:
    """Run the decision procedure along a scripted free-run trajectory.

    Deterministic: the same (scenario, mode, trajectory, seed) always
    yields the identical trace.
    """
    if not trajectory:
        return []
    session = Session(scenario, mode, seed)
    session.start(trajectory[0])
    for target in trajectory[1:]:
        session.step_to(target)
    return session.events
