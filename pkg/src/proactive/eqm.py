"""Equilibrium maintenance: free-run prediction, benefit of acting, the
seven opportunity operators, the equilibrium measure, and the step that
picks a maximal opportunity.

Degrees are fuzzy memberships in [0, 1]; min/max are numeric. The free run
treats states with no successor (including states outside the explicit
graph, e.g. robot action outcomes) as sinks that repeat forever, so a
k-step future is never empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Protocol

from .model import DesirabilityMap, DynamicSystem, WorldState, free_successors


class Scheme(Protocol):
    """A robot capability: a partial function from a state to the set of
    its alternative outcome states."""

    @property
    def key(self) -> str: ...

    @property
    def display(self) -> str: ...

    def outcomes(self, state: WorldState) -> tuple[WorldState, ...] | None: ...


@dataclass(frozen=True)
class Opportunity:
    """One opportunity for acting: scheme, the state to act in, operator
    type, look-ahead, fuzzy degree, and the benefit term behind it."""

    scheme: Scheme
    acting_state: WorldState
    type_index: int
    lookahead: int
    degree: float
    benefit: float
    source: str = "EqM"
    message: str | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.type_index <= 6:
            raise ValueError(f"opportunity type out of range: {self.type_index}")
        if self.type_index == 0 and self.lookahead != 0:
            raise ValueError("type 0 is evaluated at look-ahead 0 only")
        if self.lookahead < 0:
            raise ValueError("negative look-ahead")
        for name, v in (("degree", self.degree), ("benefit", self.benefit)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} out of [0,1]: {v}")


@dataclass(frozen=True)
class EquilibriumReport:
    """Equilibrium at a state: 1 minus the largest opportunity degree over
    the whole (k, type, scheme) grid, with every evaluated entry kept."""

    state: WorldState
    horizon: int
    degree: float
    opportunities: tuple[Opportunity, ...]


def free_run(sys: DynamicSystem, state: WorldState, k: int) -> frozenset[WorldState]:
    """States reachable in exactly ``k`` null-input steps (sinks repeat)."""
    if k < 0:
        raise ValueError("negative look-ahead")
    member = sys.lookup(state)
    current: frozenset[WorldState] = frozenset((member if member is not None else state,))
    for _ in range(k):
        step: set[WorldState] = set()
        for s in current:
            if s in sys:
                step |= free_successors(sys, s)
            else:
                step.add(s)
        current = frozenset(step)
    return current


def free_run_set(
    sys: DynamicSystem, states: Iterable[WorldState], k: int
) -> frozenset[WorldState]:
    out: set[WorldState] = set()
    for s in states:
        out |= free_run(sys, s, k)
    return frozenset(out)


def des_of(desmap: DesirabilityMap, states: Iterable[WorldState]) -> float:
    """Desirability of a set of states: the minimum over its members."""
    values = [desmap.value(s) for s in states]
    if not values:
        raise ValueError("desirability of an empty state set is undefined")
    return min(values)


def _cached_free_run(
    sys: DynamicSystem, state: WorldState, k: int, cache: dict
) -> frozenset[WorldState]:
    key = (state.atoms, k)
    if key not in cache:
        cache[key] = free_run(sys, state, k)
    return cache[key]


def _benefit(
    scheme: Scheme,
    state: WorldState,
    k: int,
    desmap: DesirabilityMap,
    sys: DynamicSystem,
    fr_cache: dict,
) -> float:
    outcomes = scheme.outcomes(state)
    if outcomes is None:
        return 0.0
    future: set[WorldState] = set()
    for o in outcomes:
        future |= _cached_free_run(sys, o, k, fr_cache)
    return des_of(desmap, future)


def benefit(
    scheme: Scheme,
    state: WorldState,
    k: int,
    desmap: DesirabilityMap,
    sys: DynamicSystem,
) -> float:
    """Degree to which acting now leads, after a k-step free run, to
    desirable states: Des of the future of all alternative outcomes.
    An inapplicable scheme has benefit 0 (not vacuous 1)."""
    return _benefit(scheme, state, k, desmap, sys, {})


def opportunity_degree(
    i: int,
    scheme: Scheme,
    state: WorldState,
    k: int,
    desmap: DesirabilityMap,
    sys: DynamicSystem,
) -> float:
    """Degree of the type-``i`` opportunity for ``scheme`` at ``state``
    with look-ahead ``k``."""
    degree, _, _ = _opportunity(i, scheme, state, k, desmap, sys)
    return degree


def _state_order(state: WorldState) -> tuple[str, str]:
    return (state.label or "", ",".join(sorted(str(a) for a in state.atoms)))


def _opportunity(
    i: int,
    scheme: Scheme,
    state: WorldState,
    k: int,
    desmap: DesirabilityMap,
    sys: DynamicSystem,
    bnf_cache: dict | None = None,
    fr_cache: dict | None = None,
) -> tuple[float, float, WorldState]:
    """(degree, benefit term, acting state) for one grid entry."""
    if i == 0 and k != 0:
        raise ValueError("type 0 is defined at look-ahead 0 only")
    if not 0 <= i <= 6:
        raise ValueError(f"opportunity type out of range: {i}")
    if fr_cache is None:
        fr_cache = {}

    def bnf(s: WorldState, depth: int) -> float:
        if bnf_cache is None:
            return _benefit(scheme, s, depth, desmap, sys, fr_cache)
        key = (scheme.key, s.atoms, depth)
        if key not in bnf_cache:
            bnf_cache[key] = _benefit(scheme, s, depth, desmap, sys, fr_cache)
        return bnf_cache[key]

    if i == 0:
        b = bnf(state, 0)
        return min(1.0 - desmap.value(state), b), b, state

    future = sorted(_cached_free_run(sys, state, k, fr_cache), key=_state_order)
    if i == 1:
        b = max(bnf(s, 0) for s in future)
        return min(1.0 - desmap.value(state), b), b, state
    if i == 2:
        b = min(bnf(s, 0) for s in future)
        return min(1.0 - desmap.value(state), b), b, state
    if i in (3, 4):
        inner = [(min(1.0 - desmap.value(s), bnf(s, 0)), s) for s in future]
        best_value, best_state = max(inner, key=lambda item: item[0])
        degree = best_value if i == 3 else min(v for v, _ in inner)
        return degree, bnf(best_state, 0), best_state
    undes = [1.0 - desmap.value(s) for s in future]
    b = bnf(state, k)
    if i == 5:
        return min(max(undes), b), b, state
    return min(min(undes), b), b, state


def equilibrium(
    state: WorldState,
    horizon: int,
    schemes: tuple[Scheme, ...],
    desmap: DesirabilityMap,
    sys: DynamicSystem,
) -> EquilibriumReport:
    """Evaluate the full opportunity grid and the equilibrium degree.

    Type 0 is evaluated at k=0 only; types 1-6 at k in 1..horizon (their
    k=0 values all collapse to the type-0 value, so skipping them changes
    nothing but duplicate entries).
    """
    if horizon < 0:
        raise ValueError("negative horizon")
    bnf_cache: dict = {}
    fr_cache: dict = {}
    entries: list[Opportunity] = []
    grid: list[tuple[int, int]] = [(0, 0)]
    grid += [(i, k) for k in range(1, horizon + 1) for i in range(1, 7)]
    for scheme in sorted(schemes, key=lambda s: s.key):
        for i, k in grid:
            degree, bnf_term, acting = _opportunity(
                i, scheme, state, k, desmap, sys, bnf_cache, fr_cache
            )
            entries.append(
                Opportunity(
                    scheme=scheme,
                    acting_state=acting,
                    type_index=i,
                    lookahead=k,
                    degree=degree,
                    benefit=bnf_term,
                )
            )
    top = max((o.degree for o in entries), default=0.0)
    return EquilibriumReport(state, horizon, 1.0 - top, tuple(entries))


def maximal_opportunities(
    state: WorldState,
    horizon: int,
    schemes: tuple[Scheme, ...],
    desmap: DesirabilityMap,
    sys: DynamicSystem,
) -> tuple[Opportunity, ...]:
    """The argmax set of the opportunity grid; empty iff equilibrium is 1."""
    report = equilibrium(state, horizon, schemes, desmap, sys)
    if report.degree == 1.0:
        return ()
    top = max(o.degree for o in report.opportunities)
    return tuple(o for o in report.opportunities if o.degree == top)


def eqm_step(
    state: WorldState,
    horizon: int,
    schemes: tuple[Scheme, ...],
    desmap: DesirabilityMap,
    sys: DynamicSystem,
    order,
) -> Opportunity | None:
    """One equilibrium-maintenance decision: None iff fully in equilibrium,
    else the maximal opportunity, ties resolved by ``order`` (a total
    order; see the selection module)."""
    top = maximal_opportunities(state, horizon, schemes, desmap, sys)
    if not top:
        return None
    return min(top, key=order.key)
