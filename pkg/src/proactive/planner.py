"""Shortest-plan search over ground actions.

Breadth-first search under unit action cost. Deterministic: actions are
expanded in descending lexicographic ground-name order at every frontier
node, so equal-length plans always canonicalize to the same step sequence
(in the domestic scenario this puts ``gather water-bottle`` ahead of
``gather compass``). Non-deterministic actions never enter plan search.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass

from .model import Atom, Goal, GroundAction, WorldState, apply, satisfies


@dataclass(frozen=True)
class Plan:
    """An ordered action sequence reaching the goal; length = step count."""

    steps: tuple[GroundAction, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    def keys(self) -> tuple[str, ...]:
        return tuple(a.key for a in self.steps)


def _usable(actions: tuple[GroundAction, ...], actors: frozenset[str]) -> list[GroundAction]:
    chosen = [a for a in actions if a.agent in actors and a.deterministic]
    return sorted(chosen, key=lambda a: a.key, reverse=True)


HUMAN_ACTORS = frozenset(("human", "both"))
ROBOT_ACTORS = frozenset(("robot", "both"))
ALL_ACTORS = frozenset(("human", "robot", "both"))


@functools.lru_cache(maxsize=8192)
def shortest_plan(
    start: WorldState,
    goal: Goal,
    actions: tuple[GroundAction, ...],
    actors: frozenset[str] = HUMAN_ACTORS,
) -> Plan | None:
    """Minimum-length plan from ``start`` to a state satisfying ``goal``,
    or None when the goal is unreachable.

    Results are memoized; state equality is atom-based, so relabeled
    states share cache entries (safe: plans never read labels).
    """
    if goal.atoms <= start.atoms:
        return Plan(())
    usable = _usable(actions, actors)
    seen: set[frozenset[Atom]] = {start.atoms}
    frontier: deque[tuple[WorldState, tuple[GroundAction, ...]]] = deque([(start, ())])
    while frontier:
        state, path = frontier.popleft()
        for action in usable:
            if not satisfies(state, action.precondition):
                continue
            (succ,) = apply(state, action)
            if succ.atoms in seen:
                continue
            seen.add(succ.atoms)
            new_path = path + (action,)
            if goal.atoms <= succ.atoms:
                return Plan(new_path)
            frontier.append((succ, new_path))
    return None
