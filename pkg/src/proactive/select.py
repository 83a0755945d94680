"""Action selection: turns a recognized intention into a type-0
opportunity on a temporarily modified desirability map, pools it with the
equilibrium-maintenance candidates, and picks one winner under a single
total order.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import eqm, hir
from .model import (
    DesirabilityMap,
    DynamicSystem,
    Goal,
    GroundAction,
    GroundActionScheme,
    WorldState,
)
from .scenario import ResolvedSubstitution

ORDER_KEYS = ("degree", "type", "benefit", "lookahead", "name")


@dataclass(frozen=True)
class ScalingConfig:
    """Temporary desirability shifts for intention-derived opportunities.

    The current state is scaled down multiplicatively; outcome states are
    shifted convexly toward 1 so degrees stay inside [0, 1].
    """

    decrease_factor: float = 0.5
    increase_factor: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.decrease_factor < 1.0:
            raise ValueError(f"decrease_factor out of [0,1): {self.decrease_factor}")
        if not 0.0 < self.increase_factor <= 1.0:
            raise ValueError(f"increase_factor out of (0,1]: {self.increase_factor}")

    def decrease(self, value: float) -> float:
        return self.decrease_factor * value

    def increase(self, value: float) -> float:
        return value + self.increase_factor * (1.0 - value)


@dataclass(frozen=True)
class ChooseOrder:
    """Total tie-break order over opportunities.

    Default: degree desc, type index asc, benefit desc, look-ahead asc,
    action name asc. The action name makes the order total.
    """

    keys: tuple[str, ...] = ORDER_KEYS

    def __post_init__(self) -> None:
        if sorted(self.keys) != sorted(ORDER_KEYS):
            raise ValueError(f"order must permute {ORDER_KEYS}, got {self.keys}")

    def key(self, opp: eqm.Opportunity) -> tuple:
        parts: list = []
        for k in self.keys:
            if k == "degree":
                parts.append(-opp.degree)
            elif k == "type":
                parts.append(opp.type_index)
            elif k == "benefit":
                parts.append(-opp.benefit)
            elif k == "lookahead":
                parts.append(opp.lookahead)
            else:
                parts.append(opp.scheme.key)
        return tuple(parts)


def choose(opps: list[eqm.Opportunity], order: ChooseOrder) -> eqm.Opportunity | None:
    """Maximum under the total order; None on empty input."""
    if not opps:
        return None
    return min(opps, key=order.key)


class _OverlayDes:
    """Desirability view with call-scoped overrides; the backing map is
    never touched."""

    def __init__(self, base: DesirabilityMap):
        self.base = base
        self.overrides: dict = {}

    def set(self, state: WorldState, value: float) -> None:
        self.overrides[state.atoms] = value

    def value(self, state: WorldState) -> float:
        if state.atoms in self.overrides:
            return self.overrides[state.atoms]
        return self.base.value(state)


def hir_opp(
    state: WorldState,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
    desmap: DesirabilityMap,
    scaling: ScalingConfig,
    substitutions: dict[str, ResolvedSubstitution],
) -> eqm.Opportunity | None:
    """Intention-derived opportunity: the robot's next step for the
    recognized intention, scored as a type-0 opportunity after decreasing
    the current state's desirability and increasing the outcomes'.

    The modification is scoped to this call; ``desmap`` is never mutated.
    Returns None when no unique intention exists (or its plan is done or
    unmappable).
    """
    step = hir.proactive_step(state, goals, actions, substitutions)
    if step is None:
        return None
    _, action, message = step
    scheme = GroundActionScheme(action)
    overlay = _OverlayDes(desmap)
    overlay.set(state, scaling.decrease(desmap.value(state)))
    outcomes = scheme.outcomes(state)
    if outcomes is not None:
        # Increase reads the original des; when an outcome IS the current
        # state (effect-free communication) it overwrites the decrease,
        # exactly as the sequential assignments run.
        for t in outcomes:
            overlay.set(t, scaling.increase(desmap.value(t)))
        bnf_mod = min(overlay.value(t) for t in outcomes)
    else:
        bnf_mod = 0.0
    degree = min(1.0 - overlay.value(state), bnf_mod)
    return eqm.Opportunity(
        scheme=scheme,
        acting_state=state,
        type_index=0,
        lookahead=0,
        degree=degree,
        benefit=bnf_mod,
        source="HIR",
        message=message,
    )


def collect(
    state: WorldState,
    horizon: int,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
    schemes: tuple[GroundActionScheme, ...],
    desmap: DesirabilityMap,
    scaling: ScalingConfig,
    substitutions: dict[str, ResolvedSubstitution],
    sys: DynamicSystem,
    include_hir: bool = True,
    include_eqm: bool = True,
) -> list[eqm.Opportunity]:
    """Pool both proactivity sources: the intention-derived opportunity
    (if any) and the full maximal set from equilibrium maintenance."""
    opps: list[eqm.Opportunity] = []
    if include_hir:
        intention_opp = hir_opp(state, goals, actions, desmap, scaling, substitutions)
        if intention_opp is not None:
            opps.append(intention_opp)
    if include_eqm:
        opps.extend(maximal for maximal in eqm.maximal_opportunities(state, horizon, schemes, desmap, sys))
    return opps


@dataclass(frozen=True)
class Decision:
    """Outcome of one selection pass: the pooled candidates, the winner
    (if any), and whether it is enacted now or deferred to a future
    acting state."""

    opportunities: tuple[eqm.Opportunity, ...]
    chosen: eqm.Opportunity | None
    dispatch: bool
    deferred: bool


def action_selection_step(
    state: WorldState,
    horizon: int,
    goals: tuple[Goal, ...],
    actions: tuple[GroundAction, ...],
    schemes: tuple[GroundActionScheme, ...],
    desmap: DesirabilityMap,
    scaling: ScalingConfig,
    substitutions: dict[str, ResolvedSubstitution],
    sys: DynamicSystem,
    order: ChooseOrder,
    include_hir: bool = True,
    include_eqm: bool = True,
) -> Decision:
    """One pass of the selection loop at a (changed) state: collect from
    both sources, choose, and mark deferred winners (acting state in the
    future, types 3/4) instead of dispatching them now."""
    opps = collect(
        state,
        horizon,
        goals,
        actions,
        schemes,
        desmap,
        scaling,
        substitutions,
        sys,
        include_hir=include_hir,
        include_eqm=include_eqm,
    )
    chosen = choose(opps, order)
    if chosen is None:
        return Decision(tuple(opps), None, dispatch=False, deferred=False)
    deferred = chosen.acting_state != state
    return Decision(tuple(opps), chosen, dispatch=not deferred, deferred=deferred)
