"""Parser and renderer for the PDDL subset used by the planning models.

Supported constructs: ``:strips``, ``:negative-preconditions``,
``:disjunctive-preconditions``, a ``oneof`` effect for non-deterministic
outcomes (``or`` in effect position is accepted as an alias and normalized
to ``oneof``), and a non-standard ``:agent`` annotation on every action.
A single implicit ``object`` type; no hierarchy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    AgentKind,
    And,
    Atom,
    Atomic,
    Effect,
    Formula,
    GroundAction,
    Not,
    Or,
)


class ParseError(Exception):
    """Syntax or well-formedness error, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


# --- s-expression reader ---


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Node:
    """Either an atom token or a parenthesized list of nodes."""

    token: Token | None
    children: tuple["Node", ...] = ()
    line: int = 0
    col: int = 0

    @property
    def is_list(self) -> bool:
        return self.token is None

    @property
    def text(self) -> str:
        assert self.token is not None
        return self.token.text


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(Token(c, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            tokens.append(Token(text[start:i].lower(), line, start_col))
    return tokens


def _read(tokens: list[Token], pos: int) -> tuple[Node, int]:
    if pos >= len(tokens):
        last = tokens[-1] if tokens else Token("", 1, 1)
        raise ParseError("unexpected end of input", last.line, last.col)
    tok = tokens[pos]
    if tok.text == "(":
        children = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise ParseError("unbalanced '('", tok.line, tok.col)
            if tokens[pos].text == ")":
                return Node(None, tuple(children), tok.line, tok.col), pos + 1
            child, pos = _read(tokens, pos)
            children.append(child)
    if tok.text == ")":
        raise ParseError("unexpected ')'", tok.line, tok.col)
    return Node(tok, (), tok.line, tok.col), pos + 1


def read_sexpr(text: str) -> Node:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 1, 1)
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        extra = tokens[pos]
        raise ParseError("trailing content after top-level form", extra.line, extra.col)
    return node


# --- lifted model ---


@dataclass(frozen=True)
class LiftedAction:
    name: str
    parameters: tuple[str, ...]
    agent: AgentKind
    precondition: Formula
    effects: tuple[Effect, ...]


@dataclass(frozen=True)
class PredicateSignature:
    name: str
    arity: int


@dataclass(frozen=True)
class DomainModel:
    name: str
    requirements: tuple[str, ...]
    predicates: tuple[PredicateSignature, ...]
    actions: tuple[LiftedAction, ...]

    def predicate(self, name: str) -> PredicateSignature | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def action(self, name: str) -> LiftedAction | None:
        for a in self.actions:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class ProblemModel:
    name: str
    domain_name: str
    objects: tuple[str, ...]
    init: frozenset[Atom]
    goal: frozenset[Atom]


_KNOWN_REQUIREMENTS = {":strips", ":negative-preconditions", ":disjunctive-preconditions"}
_AGENTS = ("human", "robot", "both")


def _expect_list(node: Node, what: str) -> Node:
    if not node.is_list:
        raise ParseError(f"expected {what}", node.line, node.col)
    return node


def _head(node: Node) -> str:
    if not node.is_list or not node.children or node.children[0].is_list:
        raise ParseError("expected a named form", node.line, node.col)
    return node.children[0].text


class _DomainReader:
    """Turns the s-expression tree of a domain into a DomainModel."""

    def __init__(self) -> None:
        self.predicates: dict[str, PredicateSignature] = {}

    def read(self, root: Node) -> DomainModel:
        _expect_list(root, "(define ...)")
        if _head(root) != "define":
            raise ParseError("expected (define ...)", root.line, root.col)
        name = ""
        requirements: tuple[str, ...] = ()
        actions: list[LiftedAction] = []
        for section in root.children[1:]:
            head = _head(section)
            if head == "domain":
                name = self._symbol(section.children[1])
            elif head == ":requirements":
                requirements = tuple(self._requirement(c) for c in section.children[1:])
            elif head == ":predicates":
                for p in section.children[1:]:
                    sig = self._predicate_decl(p)
                    if sig.name in self.predicates:
                        raise ParseError(f"duplicate predicate {sig.name}", p.line, p.col)
                    self.predicates[sig.name] = sig
            elif head == ":action":
                actions.append(self._action(section))
            else:
                raise ParseError(f"unknown construct {head}", section.line, section.col)
        if not name:
            raise ParseError("missing (domain NAME)", root.line, root.col)
        names = [a.name for a in actions]
        if len(set(names)) != len(names):
            raise ParseError("duplicate action name", root.line, root.col)
        return DomainModel(name, requirements, tuple(self.predicates.values()), tuple(actions))

    def _symbol(self, node: Node) -> str:
        if node.is_list:
            raise ParseError("expected a name", node.line, node.col)
        return node.text

    def _requirement(self, node: Node) -> str:
        text = self._symbol(node)
        if text not in _KNOWN_REQUIREMENTS:
            raise ParseError(f"unsupported requirement {text}", node.line, node.col)
        return text

    def _predicate_decl(self, node: Node) -> PredicateSignature:
        _expect_list(node, "predicate declaration")
        name = _head(node)
        params = node.children[1:]
        for p in params:
            text = self._symbol(p)
            if not text.startswith("?") and text != "-" and text != "object":
                raise ParseError(f"expected variable, got {text}", p.line, p.col)
        arity = sum(1 for p in params if p.text.startswith("?"))
        return PredicateSignature(name, arity)

    def _params(self, node: Node) -> tuple[str, ...]:
        _expect_list(node, "parameter list")
        out = []
        rest = list(node.children)
        while rest:
            item = rest.pop(0)
            text = self._symbol(item)
            if text == "-":
                if not rest or self._symbol(rest[0]) != "object":
                    where = rest[0] if rest else item
                    raise ParseError("only the single type 'object' is supported", where.line, where.col)
                rest.pop(0)
                continue
            if not text.startswith("?"):
                raise ParseError(f"expected variable, got {text}", item.line, item.col)
            out.append(text)
        return tuple(out)

    def _atom(self, node: Node, variables: tuple[str, ...]) -> Atom:
        _expect_list(node, "atom")
        name = _head(node)
        sig = self.predicates.get(name)
        if sig is None:
            raise ParseError(f"unknown predicate {name}", node.line, node.col)
        args = []
        for a in node.children[1:]:
            text = self._symbol(a)
            if text.startswith("?") and text not in variables:
                raise ParseError(f"variable {text} not in parameters", a.line, a.col)
            args.append(text)
        if len(args) != sig.arity:
            raise ParseError(
                f"arity mismatch for {name}: expected {sig.arity}, got {len(args)}",
                node.line,
                node.col,
            )
        return Atom(name, tuple(args))

    def _formula(self, node: Node, variables: tuple[str, ...]) -> Formula:
        _expect_list(node, "formula")
        if not node.children:
            return And()
        head = _head(node)
        if head == "and":
            return And(tuple(self._formula(c, variables) for c in node.children[1:]))
        if head == "or":
            return Or(tuple(self._formula(c, variables) for c in node.children[1:]))
        if head == "not":
            if len(node.children) != 2:
                raise ParseError("not takes one argument", node.line, node.col)
            return Not(self._formula(node.children[1], variables))
        return Atomic(self._atom(node, variables))

    def _effect_conjunct(self, node: Node, variables: tuple[str, ...]) -> Effect:
        """A deterministic effect: an atom, (not atom), or an (and ...) of those."""
        adds: set[Atom] = set()
        dels: set[Atom] = set()

        def walk(n: Node) -> None:
            _expect_list(n, "effect")
            if n.children and not n.children[0].is_list and n.children[0].text == "and":
                for c in n.children[1:]:
                    walk(c)
            elif n.children and not n.children[0].is_list and n.children[0].text == "not":
                if len(n.children) != 2:
                    raise ParseError("not takes one argument", n.line, n.col)
                dels.add(self._atom(n.children[1], variables))
            elif not n.children:
                pass
            else:
                adds.add(self._atom(n, variables))

        walk(node)
        return Effect(frozenset(adds), frozenset(dels - adds))

    def _effects(self, node: Node, variables: tuple[str, ...]) -> tuple[Effect, ...]:
        _expect_list(node, "effect")
        if node.children and not node.children[0].is_list and node.children[0].text in ("oneof", "or"):
            alts = node.children[1:]
            if len(alts) < 2:
                raise ParseError("oneof needs at least two alternatives", node.line, node.col)
            return tuple(self._effect_conjunct(a, variables) for a in alts)
        return (self._effect_conjunct(node, variables),)

    def _action(self, node: Node) -> LiftedAction:
        name = self._symbol(node.children[1])
        fields: dict[str, Node] = {}
        rest = list(node.children[2:])
        while rest:
            keyword = self._symbol(rest.pop(0))
            if not rest:
                raise ParseError(f"{keyword} missing a value", node.line, node.col)
            fields[keyword] = rest.pop(0)
        for required in (":agent", ":effect"):
            if required not in fields:
                raise ParseError(f"action {name} missing {required}", node.line, node.col)
        agent_node = fields[":agent"]
        agent = self._symbol(agent_node)
        if agent not in _AGENTS:
            raise ParseError(f"unknown agent {agent}", agent_node.line, agent_node.col)
        params = self._params(fields[":parameters"]) if ":parameters" in fields else ()
        pre: Formula = And()
        if ":precondition" in fields:
            pre = self._formula(fields[":precondition"], params)
        effects = self._effects(fields[":effect"], params)
        unknown = set(fields) - {":agent", ":parameters", ":precondition", ":effect"}
        if unknown:
            raise ParseError(f"unknown construct {sorted(unknown)[0]}", node.line, node.col)
        return LiftedAction(name, params, agent, pre, effects)  # type: ignore[arg-type]


def parse_domain(text: str) -> DomainModel:
    return _DomainReader().read(read_sexpr(text))


def parse_problem(text: str, domain: DomainModel) -> ProblemModel:
    root = read_sexpr(text)
    if _head(root) != "define":
        raise ParseError("expected (define ...)", root.line, root.col)
    name = ""
    domain_name = ""
    objects: tuple[str, ...] = ()
    init: set[Atom] = set()
    goal: set[Atom] = set()

    def ground_atom(node: Node) -> Atom:
        _expect_list(node, "atom")
        pname = _head(node)
        sig = domain.predicate(pname)
        if sig is None:
            raise ParseError(f"unknown predicate {pname}", node.line, node.col)
        args = tuple(c.text for c in node.children[1:] if not c.is_list)
        if len(args) != sig.arity:
            raise ParseError(f"arity mismatch for {pname}", node.line, node.col)
        for a, c in zip(args, node.children[1:]):
            if a not in objects:
                raise ParseError(f"undeclared object {a}", c.line, c.col)
        return Atom(pname, args)

    for section in root.children[1:]:
        head = _head(section)
        if head == "problem":
            name = section.children[1].text
        elif head == ":domain":
            domain_name = section.children[1].text
            if domain_name != domain.name:
                raise ParseError(
                    f"problem is for domain {domain_name}, not {domain.name}",
                    section.line,
                    section.col,
                )
        elif head == ":objects":
            objects = tuple(c.text for c in section.children[1:] if not c.is_list)
        elif head == ":init":
            for c in section.children[1:]:
                init.add(ground_atom(c))
        elif head == ":goal":
            body = section.children[1]
            if body.is_list and body.children and not body.children[0].is_list and body.children[0].text == "and":
                for c in body.children[1:]:
                    goal.add(ground_atom(c))
            else:
                goal.add(ground_atom(body))
        else:
            raise ParseError(f"unknown construct {head}", section.line, section.col)
    return ProblemModel(name, domain_name, objects, frozenset(init), frozenset(goal))


# --- grounding ---


def _substitute(atom: Atom, binding: dict[str, str]) -> Atom:
    return Atom(atom.name, tuple(binding.get(a, a) for a in atom.args))


def _substitute_formula(f: Formula, binding: dict[str, str]) -> Formula:
    if isinstance(f, Atomic):
        return Atomic(_substitute(f.atom, binding))
    if isinstance(f, And):
        return And(tuple(_substitute_formula(p, binding) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_substitute_formula(p, binding) for p in f.parts))
    return Not(_substitute_formula(f.part, binding))


def ground(domain: DomainModel, objects: tuple[str, ...]) -> tuple[GroundAction, ...]:
    """Instantiate every lifted action over every parameter binding."""
    out: list[GroundAction] = []
    for lifted in domain.actions:
        for combo in itertools.product(objects, repeat=len(lifted.parameters)):
            binding = dict(zip(lifted.parameters, combo))
            effects = tuple(
                Effect(
                    frozenset(_substitute(a, binding) for a in eff.adds),
                    frozenset(_substitute(a, binding) for a in eff.dels),
                )
                for eff in lifted.effects
            )
            out.append(
                GroundAction(
                    name=lifted.name,
                    args=combo,
                    agent=lifted.agent,
                    precondition=_substitute_formula(lifted.precondition, binding),
                    effects=effects,
                )
            )
    return tuple(out)


# --- canonical rendering ---


def _render_atom_schema(sig: PredicateSignature) -> str:
    vars_ = " ".join(f"?x{i}" for i in range(sig.arity))
    return f"({sig.name} {vars_})" if vars_ else f"({sig.name})"


def _render_atom(atom: Atom) -> str:
    inner = " ".join((atom.name,) + atom.args)
    return f"({inner})"


def _render_formula(f: Formula) -> str:
    if isinstance(f, Atomic):
        return _render_atom(f.atom)
    if isinstance(f, And):
        return "(and " + " ".join(_render_formula(p) for p in f.parts) + ")" if f.parts else "(and)"
    if isinstance(f, Or):
        return "(or " + " ".join(_render_formula(p) for p in f.parts) + ")" if f.parts else "(or)"
    return f"(not {_render_formula(f.part)})"


def _render_effect(eff: Effect) -> str:
    parts = [_render_atom(a) for a in sorted(eff.adds)]
    parts += [f"(not {_render_atom(a)})" for a in sorted(eff.dels)]
    if len(parts) == 1:
        return parts[0]
    return "(and " + " ".join(parts) + ")" if parts else "(and)"


def _render_effects(effects: tuple[Effect, ...]) -> str:
    if len(effects) == 1:
        return _render_effect(effects[0])
    return "(oneof " + " ".join(_render_effect(e) for e in effects) + ")"


def render_domain(domain: DomainModel) -> str:
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append("  (:requirements " + " ".join(domain.requirements) + ")")
    lines.append("  (:predicates " + " ".join(_render_atom_schema(p) for p in domain.predicates) + ")")
    for a in domain.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :agent {a.agent}")
        if a.parameters:
            lines.append("    :parameters (" + " ".join(a.parameters) + ")")
        lines.append(f"    :precondition {_render_formula(a.precondition)}")
        lines.append(f"    :effect {_render_effects(a.effects)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def render_problem(problem: ProblemModel) -> str:
    lines = [f"(define (problem {problem.name})"]
    lines.append(f"  (:domain {problem.domain_name})")
    lines.append("  (:objects " + " ".join(problem.objects) + ")")
    lines.append("  (:init " + " ".join(_render_atom(a) for a in sorted(problem.init)) + ")")
    lines.append("  (:goal (and " + " ".join(_render_atom(a) for a in sorted(problem.goal)) + ")))")
    return "\n".join(lines) + "\n"
