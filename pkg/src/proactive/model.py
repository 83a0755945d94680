"""Symbolic world model: predicate atoms, states, the transition system,
goals, desirability, and grounded actions.

Everything here is immutable after construction; all operations are pure
functions, so concurrent evaluation is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Union

AgentKind = Literal["human", "robot", "both"]


class ModelError(Exception):
    """Base error for world-model violations."""


class PreconditionError(ModelError):
    """Action applied in a state that does not satisfy its precondition."""


class UnknownStateError(ModelError):
    """State is not part of the transition system."""


@dataclass(frozen=True, order=True)
class Atom:
    """A ground predicate atom, e.g. ``gathered backpack``.

    Atoms compare structurally; the dataclass ordering (name, then args)
    is the canonical order used for deterministic serialization.
    """

    name: str
    args: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise ModelError("atom name must be nonempty")

    def __str__(self) -> str:
        return " ".join((self.name,) + self.args)

    @classmethod
    def parse(cls, text: str) -> "Atom":
        parts = text.split()
        if not parts:
            raise ModelError("empty atom")
        return cls(parts[0], tuple(parts[1:]))


def atoms_from_strings(texts: Iterable[str]) -> frozenset[Atom]:
    return frozenset(Atom.parse(t) for t in texts)


def atoms_to_strings(atoms: Iterable[Atom]) -> list[str]:
    return [str(a) for a in sorted(atoms)]


@dataclass(frozen=True, eq=False)
class WorldState:
    """A world state: a set of true atoms plus an optional display label.

    Two states are equal iff their atom sets are equal; the label never
    participates in equality or hashing.
    """

    atoms: frozenset[Atom]
    label: str | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorldState):
            return NotImplemented
        return self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __repr__(self) -> str:
        name = self.label or "state"
        return f"WorldState({name}: {{{', '.join(atoms_to_strings(self.atoms))}}})"

    def holds(self, atom: Atom) -> bool:
        return atom in self.atoms


# --- precondition formulas (closed world) ---


@dataclass(frozen=True)
class Atomic:
    atom: Atom


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Not:
    part: "Formula"


Formula = Union[Atomic, And, Or, Not]


def satisfies(state: WorldState, formula: Formula) -> bool:
    """Closed-world evaluation: an atom is true iff it is in the state."""
    if isinstance(formula, Atomic):
        return formula.atom in state.atoms
    if isinstance(formula, And):
        return all(satisfies(state, p) for p in formula.parts)
    if isinstance(formula, Or):
        return any(satisfies(state, p) for p in formula.parts)
    if isinstance(formula, Not):
        return not satisfies(state, formula.part)
    raise ModelError(f"not a formula: {formula!r}")


def formula_atoms(formula: Formula) -> frozenset[Atom]:
    if isinstance(formula, Atomic):
        return frozenset((formula.atom,))
    if isinstance(formula, Not):
        return formula_atoms(formula.part)
    if isinstance(formula, (And, Or)):
        out: frozenset[Atom] = frozenset()
        for p in formula.parts:
            out |= formula_atoms(p)
        return out
    raise ModelError(f"not a formula: {formula!r}")


# --- inputs and the transition system ---


@dataclass(frozen=True)
class InputLabel:
    """An external input: the null input, a human or robot action, or an
    environment event."""

    kind: Literal["null", "human-action", "robot-action", "environment"]
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "null" and self.name is not None:
            raise ModelError("the null input carries no name")
        if self.kind != "null" and not self.name:
            raise ModelError(f"{self.kind} input requires a name")

    def __str__(self) -> str:
        return "⊥" if self.kind == "null" else f"{self.kind}:{self.name}"


NULL_INPUT = InputLabel("null")


@dataclass(frozen=True)
class DynamicSystem:
    """Finite transition system over world states.

    The relation may be non-deterministic. States with no null-input
    successor are completed with an implicit self-loop so the free run is
    total (prediction over an empty future set never arises).
    """

    states: tuple[WorldState, ...]
    transitions: tuple[tuple[WorldState, InputLabel, WorldState], ...]
    _by_atoms: dict = field(default_factory=dict, repr=False, compare=False)
    _null_succ: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_atoms: dict[frozenset[Atom], WorldState] = {}
        for s in self.states:
            if s.atoms in by_atoms:
                raise ModelError(
                    f"duplicate state (same atoms): {by_atoms[s.atoms].label} / {s.label}"
                )
            by_atoms[s.atoms] = s
        succ: dict[frozenset[Atom], set[frozenset[Atom]]] = {}
        for frm, label, to in self.transitions:
            if frm.atoms not in by_atoms or to.atoms not in by_atoms:
                raise ModelError(f"transition endpoint not in states: {frm.label}->{to.label}")
            if label.kind == "null":
                succ.setdefault(frm.atoms, set()).add(to.atoms)
        object.__setattr__(self, "_by_atoms", by_atoms)
        object.__setattr__(self, "_null_succ", succ)

    def __contains__(self, state: WorldState) -> bool:
        return state.atoms in self._by_atoms

    def lookup(self, state: WorldState) -> WorldState | None:
        """Return the member state with the same atoms, if any."""
        return self._by_atoms.get(state.atoms)

    def by_label(self, label: str) -> WorldState | None:
        for s in self.states:
            if s.label == label:
                return s
        return None


def free_successors(sys: DynamicSystem, state: WorldState) -> frozenset[WorldState]:
    """All null-input successors of ``state``; a sink yields itself."""
    member = sys.lookup(state)
    if member is None:
        raise UnknownStateError(f"state not in system: {state!r}")
    succ = sys._null_succ.get(member.atoms)
    if not succ:
        return frozenset((member,))
    return frozenset(sys._by_atoms[a] for a in succ)


# --- desirability ---


@dataclass(frozen=True)
class DesirabilityMap:
    """Fuzzy membership of states in "desirable": state -> degree in [0, 1].

    Listed entries are keyed by state label for serialization but resolved
    by atom set; states outside the listing get ``default``.
    """

    entries: tuple[tuple[str, float], ...]
    default: float
    _by_atoms: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_system(
        cls, sys: DynamicSystem, degrees: dict[str, float], default: float
    ) -> "DesirabilityMap":
        for label, v in list(degrees.items()) + [("<default>", default)]:
            if not 0.0 <= v <= 1.0:
                raise ModelError(f"des out of range for {label}: {v}")
        by_atoms: dict[frozenset[Atom], float] = {}
        entries: list[tuple[str, float]] = []
        for s in sys.states:
            if s.label not in degrees:
                raise ModelError(f"no des value for state {s.label}")
            by_atoms[s.atoms] = degrees[s.label]
            entries.append((s.label or "", degrees[s.label]))
        extra = set(degrees) - {s.label for s in sys.states}
        if extra:
            raise ModelError(f"des entries for unknown states: {sorted(extra)}")
        dm = cls(entries=tuple(entries), default=default)
        object.__setattr__(dm, "_by_atoms", by_atoms)
        return dm

    def value(self, state: WorldState) -> float:
        return self._by_atoms.get(state.atoms, self.default)

    def serialize(self) -> str:
        parts = [f"{label}={value!r}" for label, value in self.entries]
        return f"default={self.default!r};" + ";".join(parts)


@dataclass(frozen=True)
class Goal:
    """A human goal: a nonempty conjunction of atoms that must hold."""

    name: str
    atoms: frozenset[Atom]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ModelError(f"goal {self.name} has no atoms")

    def satisfied_in(self, state: WorldState) -> bool:
        return self.atoms <= state.atoms


# --- grounded actions ---


@dataclass(frozen=True)
class Effect:
    """One effect alternative: atoms added and atoms deleted."""

    adds: frozenset[Atom] = frozenset()
    dels: frozenset[Atom] = frozenset()

    def __post_init__(self) -> None:
        if self.adds & self.dels:
            raise ModelError("add and delete sets overlap within one alternative")


@dataclass(frozen=True)
class GroundAction:
    """A fully instantiated action.

    ``effects`` holds one entry per alternative outcome; more than one
    entry marks a non-deterministic action.
    """

    name: str
    args: tuple[str, ...]
    agent: AgentKind
    precondition: Formula
    effects: tuple[Effect, ...]
    label: str | None = None

    def __post_init__(self) -> None:
        if not self.effects:
            raise ModelError(f"action {self.name} has no effect alternative")

    @property
    def key(self) -> str:
        return " ".join((self.name,) + self.args)

    @property
    def display(self) -> str:
        if self.label:
            return self.label
        return self.key.replace("-", " ")

    @property
    def deterministic(self) -> bool:
        return len(self.effects) == 1

    def human_capable(self) -> bool:
        return self.agent in ("human", "both")

    def robot_capable(self) -> bool:
        return self.agent in ("robot", "both")


def apply(state: WorldState, action: GroundAction) -> tuple[WorldState, ...]:
    """Successor states of ``state`` under ``action``, one per alternative."""
    if not satisfies(state, action.precondition):
        raise PreconditionError(f"{action.key} not applicable in {state!r}")
    out = []
    for eff in action.effects:
        out.append(WorldState((state.atoms - eff.dels) | eff.adds))
    return tuple(out)


@dataclass(frozen=True)
class GroundActionScheme:
    """A robot capability as a partial function on states: applicable
    exactly where the wrapped action's precondition holds, mapping the
    state to the set of alternative outcomes."""

    action: GroundAction

    def __post_init__(self) -> None:
        if not self.action.robot_capable():
            raise ModelError(f"{self.action.key} is not robot-capable")

    @property
    def key(self) -> str:
        return self.action.key

    @property
    def display(self) -> str:
        return self.action.display

    def outcomes(self, state: WorldState) -> tuple[WorldState, ...] | None:
        """Outcome states, or None when the scheme is inapplicable."""
        if not satisfies(state, self.action.precondition):
            return None
        return apply(state, self.action)
