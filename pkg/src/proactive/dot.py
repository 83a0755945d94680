"""Graphviz DOT export of a scenario graph.

Nodes are labeled with the state id and its desirability and filled on a
green-to-red ramp (green = desirable). Free-run edges are solid; robot
action edges (scheme outcomes that land on another listed state) are
dashed and labeled.
"""

from __future__ import annotations

from .model import NULL_INPUT
from .scenario import Scenario


def des_color(des: float) -> str:
    """Hex fill on a green (des=1) to red (des=0) ramp."""
    clamped = min(1.0, max(0.0, des))
    red = round(0xE5 - clamped * (0xE5 - 0x4C))
    green = round(0x4C + clamped * (0xAF - 0x4C))
    blue = 0x50
    return f"#{red:02x}{green:02x}{blue:02x}"


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def action_edges(scenario: Scenario) -> list[tuple[str, str, str]]:
    """(from-id, action key, to-id) for robot schemes whose outcome is a
    listed state other than the source."""
    out = []
    for state in scenario.system.states:
        for scheme in scenario.schemes:
            outcomes = scheme.outcomes(state)
            if outcomes is None:
                continue
            for succ in outcomes:
                member = scenario.system.lookup(succ)
                if member is not None and member.atoms != state.atoms:
                    out.append((state.label or "", scheme.key, member.label or ""))
    return sorted(set(out))


def render_dot(scenario: Scenario) -> str:
    lines = ["digraph scenario {", "  rankdir=LR;", "  node [style=filled, shape=box];"]
    for st in scenario.file.states:
        label = f"{st.id}\\ndes={st.des}"
        lines.append(
            f"  {_quote(st.id)} [label={_quote(label)}, fillcolor={_quote(des_color(st.des))}];"
        )
    for frm, label, to in scenario.system.transitions:
        if label == NULL_INPUT:
            lines.append(f"  {_quote(frm.label or '')} -> {_quote(to.label or '')};")
    for frm, key, to in action_edges(scenario):
        lines.append(
            f"  {_quote(frm)} -> {_quote(to)} [style=dashed, label={_quote(key)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
