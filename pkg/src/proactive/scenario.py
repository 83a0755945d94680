"""Scenario files: a JSON document tying together the planning domain, the
explicit free-run graph with desirability values, the goal set, capability
substitutions, and engine parameters.

The format is versioned (``"format": 1``). States carry a ``reconstructed``
flag marking content that is a modeling choice rather than a published
value. Sink states need no self-loop entry; the free run completes them
implicitly.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from . import pddl
from .model import (
    Atom,
    DesirabilityMap,
    DynamicSystem,
    Goal,
    GroundAction,
    GroundActionScheme,
    NULL_INPUT,
    WorldState,
    atoms_from_strings,
    atoms_to_strings,
)

_ORDER_KEYS = ("degree", "type", "benefit", "lookahead", "name")
MODES = ("hir", "eqm", "combined")


class ScenarioError(Exception):
    """Scenario file is malformed or inconsistent."""


@dataclass(frozen=True)
class ScenarioState:
    id: str
    atoms: tuple[str, ...]
    des: float
    reconstructed: bool = False
    pos: tuple[float, float] | None = None


@dataclass(frozen=True)
class Substitution:
    """Maps a human-only plan step to a robot communicative action."""

    action: str
    message: str


@dataclass(frozen=True)
class ModeConfig:
    substitutions: bool = False


@dataclass(frozen=True)
class EngineParams:
    lookahead: int = 2
    decrease_factor: float = 0.5
    increase_factor: float = 0.5
    choose_order: tuple[str, ...] = _ORDER_KEYS


@dataclass(frozen=True)
class ScenarioFile:
    """Syntactic form of a scenario document (what parse/render work on)."""

    format: int
    name: str
    domain_file: str | None
    domain_text: str | None
    problem_file: str | None
    problem_text: str | None
    initial: str
    goals: tuple[tuple[str, tuple[str, ...]], ...]
    states: tuple[ScenarioState, ...]
    free_run: tuple[tuple[str, str], ...]
    des_default: float
    action_labels: tuple[tuple[str, str], ...]
    substitutions: tuple[tuple[str, Substitution], ...]
    modes: tuple[tuple[str, ModeConfig], ...]
    params: EngineParams


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioError(message)


def parse_scenario(text: str) -> ScenarioFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "top level must be an object")
    _require(doc.get("format") == 1, f"unsupported format {doc.get('format')!r}")

    def source(section: str) -> tuple[str | None, str | None]:
        block = doc.get(section, {})
        _require(isinstance(block, dict), f"{section} must be an object")
        file_ref = block.get("file")
        text_ref = block.get("text")
        _require(
            (file_ref is None) != (text_ref is None),
            f"{section} needs exactly one of 'file' or 'text'",
        )
        return file_ref, text_ref

    domain_file, domain_text = source("domain")
    problem_file, problem_text = source("problem")

    states = []
    seen_ids: set[str] = set()
    for raw in doc.get("states", []):
        sid = raw.get("id")
        _require(isinstance(sid, str) and sid != "", "state id must be a nonempty string")
        _require(sid not in seen_ids, f"duplicate state id {sid}")
        seen_ids.add(sid)
        des = raw.get("des")
        _require(isinstance(des, (int, float)), f"state {sid}: des must be a number")
        _require(0.0 <= des <= 1.0, f"state {sid}: des out of range: {des}")
        pos = raw.get("pos")
        if pos is not None:
            _require(
                isinstance(pos, list) and len(pos) == 2,
                f"state {sid}: pos must be a pair",
            )
            pos = (float(pos[0]), float(pos[1]))
        states.append(
            ScenarioState(
                id=sid,
                atoms=tuple(raw.get("atoms", [])),
                des=float(des),
                reconstructed=bool(raw.get("reconstructed", False)),
                pos=pos,
            )
        )

    free_run = []
    for edge in doc.get("free_run", []):
        _require(isinstance(edge, list) and len(edge) == 2, f"bad free_run edge {edge!r}")
        frm, to = edge
        for sid in (frm, to):
            _require(sid in seen_ids, f"free_run references unknown state {sid}")
        free_run.append((frm, to))

    initial = doc.get("initial")
    _require(initial in seen_ids, f"initial references unknown state {initial!r}")

    goals = []
    for raw in doc.get("goals", []):
        _require(isinstance(raw.get("name"), str), "goal needs a name")
        _require(bool(raw.get("atoms")), f"goal {raw.get('name')} has no atoms")
        goals.append((raw["name"], tuple(raw["atoms"])))
    names = [g[0] for g in goals]
    _require(len(set(names)) == len(names), "duplicate goal name")

    des_default = doc.get("des_default", 0.0)
    _require(0.0 <= des_default <= 1.0, f"des_default out of range: {des_default}")

    substitutions = []
    for key, raw in doc.get("substitutions", {}).items():
        _require(isinstance(raw.get("action"), str), f"substitution {key} needs an action")
        substitutions.append((key, Substitution(raw["action"], raw.get("message", ""))))

    modes = []
    for key, raw in doc.get("modes", {}).items():
        _require(key in MODES, f"unknown mode {key}")
        modes.append((key, ModeConfig(substitutions=bool(raw.get("substitutions", False)))))

    raw_params = doc.get("params", {})
    lookahead = raw_params.get("lookahead", 2)
    _require(isinstance(lookahead, int) and lookahead >= 0, "lookahead must be an int >= 0")
    decrease = float(raw_params.get("decrease_factor", 0.5))
    increase = float(raw_params.get("increase_factor", 0.5))
    _require(0.0 <= decrease < 1.0, f"decrease_factor out of [0,1): {decrease}")
    _require(0.0 < increase <= 1.0, f"increase_factor out of (0,1]: {increase}")
    order = tuple(raw_params.get("choose_order", _ORDER_KEYS))
    _require(sorted(order) == sorted(_ORDER_KEYS), f"choose_order must permute {_ORDER_KEYS}")

    return ScenarioFile(
        format=1,
        name=str(doc.get("name", "")),
        domain_file=domain_file,
        domain_text=domain_text,
        problem_file=problem_file,
        problem_text=problem_text,
        initial=initial,
        goals=tuple(goals),
        states=tuple(states),
        free_run=tuple(free_run),
        des_default=float(des_default),
        action_labels=tuple(sorted(doc.get("action_labels", {}).items())),
        substitutions=tuple(sorted(substitutions)),
        modes=tuple(sorted(modes)),
        params=EngineParams(lookahead, decrease, increase, order),
    )


def render_scenario(sf: ScenarioFile) -> str:
    """Canonical JSON text; parse(render(parse(t))) == parse(t)."""
    doc: dict = {"format": sf.format, "name": sf.name}
    doc["domain"] = {"file": sf.domain_file} if sf.domain_file else {"text": sf.domain_text}
    doc["problem"] = {"file": sf.problem_file} if sf.problem_file else {"text": sf.problem_text}
    doc["initial"] = sf.initial
    doc["goals"] = [{"name": n, "atoms": list(atoms)} for n, atoms in sf.goals]
    doc["states"] = []
    for st in sf.states:
        raw: dict = {
            "id": st.id,
            "atoms": list(st.atoms),
            "des": st.des,
            "reconstructed": st.reconstructed,
        }
        if st.pos is not None:
            raw["pos"] = list(st.pos)
        doc["states"].append(raw)
    doc["free_run"] = [list(e) for e in sf.free_run]
    doc["des_default"] = sf.des_default
    doc["action_labels"] = dict(sf.action_labels)
    doc["substitutions"] = {
        k: {"action": s.action, "message": s.message} for k, s in sf.substitutions
    }
    doc["modes"] = {k: {"substitutions": m.substitutions} for k, m in sf.modes}
    doc["params"] = {
        "lookahead": sf.params.lookahead,
        "decrease_factor": sf.params.decrease_factor,
        "increase_factor": sf.params.increase_factor,
        "choose_order": list(sf.params.choose_order),
    }
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class ResolvedSubstitution:
    action: GroundAction
    message: str


@dataclass(frozen=True)
class Scenario:
    """A scenario resolved against its domain: ready for the engine."""

    file: ScenarioFile
    domain: pddl.DomainModel
    problem: pddl.ProblemModel
    system: DynamicSystem
    desmap: DesirabilityMap
    goals: tuple[Goal, ...]
    actions: tuple[GroundAction, ...]
    substitutions: tuple[tuple[str, ResolvedSubstitution], ...]

    @property
    def name(self) -> str:
        return self.file.name

    @property
    def params(self) -> EngineParams:
        return self.file.params

    @property
    def initial(self) -> WorldState:
        state = self.system.by_label(self.file.initial)
        assert state is not None
        return state

    @property
    def schemes(self) -> tuple[GroundActionScheme, ...]:
        return tuple(GroundActionScheme(a) for a in self.actions if a.robot_capable())

    def human_actions(self) -> tuple[GroundAction, ...]:
        return tuple(a for a in self.actions if a.human_capable())

    def mode_config(self, mode: str) -> ModeConfig:
        for key, cfg in self.file.modes:
            if key == mode:
                return cfg
        return ModeConfig()

    def substitution_map(self) -> dict[str, ResolvedSubstitution]:
        return dict(self.substitutions)

    def action_by_key(self, key: str) -> GroundAction | None:
        for a in self.actions:
            if a.key == key:
                return a
        return None


def resolve_scenario(sf: ScenarioFile, base_dir: Path | None = None) -> Scenario:
    """Parse the referenced PDDL, ground the actions, and build the runtime
    model. File references are resolved against ``base_dir``."""

    def load(file_ref: str | None, text: str | None, kind: str) -> str:
        if text is not None:
            return text
        _require(base_dir is not None, f"{kind} is a file reference but no base dir given")
        path = Path(base_dir) / file_ref  # type: ignore[arg-type,operator]
        _require(path.exists(), f"{kind} file not found: {path}")
        return path.read_text()

    domain = pddl.parse_domain(load(sf.domain_file, sf.domain_text, "domain"))
    problem = pddl.parse_problem(load(sf.problem_file, sf.problem_text, "problem"), domain)

    declared = {p.name: p.arity for p in domain.predicates}

    def check_atoms(atom_texts: tuple[str, ...], where: str) -> frozenset[Atom]:
        atoms = atoms_from_strings(atom_texts)
        for a in atoms:
            _require(a.name in declared, f"{where}: unknown predicate {a.name}")
            _require(
                len(a.args) == declared[a.name],
                f"{where}: arity mismatch for {a.name}",
            )
            for arg in a.args:
                _require(arg in problem.objects, f"{where}: unknown object {arg}")
        return atoms

    states = tuple(
        WorldState(check_atoms(st.atoms, f"state {st.id}"), st.id) for st in sf.states
    )
    by_id = {st.label: st for st in states}
    transitions = tuple(
        (by_id[frm], NULL_INPUT, by_id[to]) for frm, to in sf.free_run
    )
    system = DynamicSystem(states, transitions)
    desmap = DesirabilityMap.from_system(
        system, {st.id: st.des for st in sf.states}, sf.des_default
    )
    goals = tuple(
        Goal(name, check_atoms(atoms, f"goal {name}")) for name, atoms in sf.goals
    )

    labels = dict(sf.action_labels)
    grounded = []
    for action in pddl.ground(domain, problem.objects):
        if action.key in labels:
            action = dataclasses.replace(action, label=labels[action.key])
        grounded.append(action)
    by_key = {a.key: a for a in grounded}

    substitutions = []
    for key, sub in sf.substitutions:
        _require(key in by_key, f"substitution source {key} is not a ground action")
        _require(sub.action in by_key, f"substitution target {sub.action} is not a ground action")
        target = by_key[sub.action]
        _require(target.robot_capable(), f"substitution target {sub.action} is not robot-capable")
        substitutions.append((key, ResolvedSubstitution(target, sub.message)))

    return Scenario(
        file=sf,
        domain=domain,
        problem=problem,
        system=system,
        desmap=desmap,
        goals=goals,
        actions=tuple(grounded),
        substitutions=tuple(substitutions),
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    sf = parse_scenario(path.read_text())
    return resolve_scenario(sf, base_dir=path.parent)


def packaged_scenario_path() -> Path:
    """Path of the scenario shipped with the package."""
    return Path(__file__).parent / "data" / "domestic.scenario.json"


def default_scenario() -> Scenario:
    return load_scenario(packaged_scenario_path())
