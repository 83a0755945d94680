"""Human intention recognition and reasoning.

Infers the human's intention by inverse planning: plan toward every
candidate goal with human-capable actions and keep the goal whose residual
plan is uniquely shortest. The robot then takes over the next step, or
swaps in a configured communicative action when that step is one only the
human can perform.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Goal, GroundAction, WorldState
from .planner import HUMAN_ACTORS, Plan, shortest_plan
from .scenario import ResolvedSubstitution


class SubstitutionError(Exception):
    """First plan step is human-only and has no communicative counterpart."""


@dataclass(frozen=True)
class Intention:
    """A recognized intention: the goal plus the residual shortest plan."""

    goal: Goal
    residual_plan: Plan


@dataclass(frozen=True)
class IntentionSet:
    """All minimal-length candidates (the argmin set)."""

    candidates: tuple[Intention, ...]


def residual_plans(
    state: WorldState,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
) -> dict[Goal, Plan | None]:
    """Shortest human plan per goal; None for unreachable goals."""
    return {
        g: shortest_plan(state, g, actions, HUMAN_ACTORS) for g in goals
    }


def intention_set(
    state: WorldState,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
) -> IntentionSet:
    plans = residual_plans(state, goals, actions)
    reachable = {g: p for g, p in plans.items() if p is not None}
    if not reachable:
        return IntentionSet(())
    best = min(p.length for p in reachable.values())
    return IntentionSet(
        tuple(Intention(g, p) for g, p in reachable.items() if p.length == best)
    )


def recognize(
    state: WorldState,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
) -> Intention | None:
    """The unique minimal intention, or None when recognition is ambiguous
    (zero or several goals attain the minimum). Unreachable goals cannot
    be intentions and never participate in the argmin."""
    candidates = intention_set(state, goals, actions).candidates
    if len(candidates) != 1:
        return None
    return candidates[0]


def next_robot_step(
    intent: Intention,
    substitutions: dict[str, ResolvedSubstitution],
) -> tuple[GroundAction, str | None]:
    """The action the robot should take for ``intent``: the first plan step
    if robot-capable, else its mapped communicative action (with message).

    Raises SubstitutionError when the step is human-only and unmapped.
    """
    if intent.residual_plan.length == 0:
        raise ValueError("residual plan is empty; nothing to take over")
    first = intent.residual_plan.steps[0]
    if first.robot_capable():
        return first, None
    sub = substitutions.get(first.key)
    if sub is None:
        raise SubstitutionError(f"no substitution for human-only action {first.key}")
    return sub.action, sub.message


def proactive_step(
    state: WorldState,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
    substitutions: dict[str, ResolvedSubstitution],
) -> tuple[Intention, GroundAction, str | None] | None:
    """Full recognition pipeline: recognized intention plus the robot's
    step. None when there is no unique intention, the goal is already
    reached, or the next step is human-only with no substitution
    configured (no proactive output rather than an error)."""
    intent = recognize(state, goals, actions)
    if intent is None or intent.residual_plan.length == 0:
        return None
    try:
        action, message = next_robot_step(intent, substitutions)
    except SubstitutionError:
        return None
    return intent, action, message
