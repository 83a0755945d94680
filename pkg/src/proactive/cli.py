"""Command-line interface.

Subcommands: ``run`` (replay a trajectory), ``opps`` (opportunity grid at
a state), ``graph`` (DOT export), ``repl`` (interactive stepping), and
``serve`` (HTTP bridge for the steering panel).

Exit codes: 0 ok, 1 internal error, 2 input error. Log level comes from
the PROACTIVE_LOG environment variable (debug|info|...).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import eqm, select, sim
from .dot import render_dot
from .pddl import ParseError
from .scenario import Scenario, ScenarioError, load_scenario, packaged_scenario_path
from .trace import TraceEvent

log = logging.getLogger("proactive")


class InputError(Exception):
    """User input problem; maps to exit code 2."""


def _configure_logging() -> None:
    level = os.environ.get("PROACTIVE_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _load(path: str | None) -> Scenario:
    target = Path(path) if path else packaged_scenario_path()
    if not target.exists():
        raise InputError(f"scenario file not found: {target}")
    try:
        return load_scenario(target)
    except (ScenarioError, ParseError) as exc:
        raise InputError(f"cannot load scenario: {exc}") from exc


def format_table(rows: list[list[str]], header: list[str]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def run_table(events: list[TraceEvent]) -> str:
    rows = []
    for e in events:
        intention = e.intention["goal"] if e.intention else "-"
        action = e.dispatched["label"] if e.dispatched else "-"
        rows.append([str(e.step), e.state, intention, action])
    return format_table(rows, ["step", "state", "intention", "action"])


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    trajectory = [s for s in args.trajectory.split(",") if s] if args.trajectory else []
    try:
        events = sim.replay(scenario, args.mode, trajectory, args.seed)
    except sim.SimError as exc:
        raise InputError(str(exc)) from exc
    if args.json:
        for e in events:
            sys.stdout.write(e.to_json() + "\n")
    elif events:
        sys.stdout.write(run_table(events))
    return 0


def cmd_opps(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    state = scenario.system.by_label(args.state)
    if state is None:
        raise InputError(f"unknown state id {args.state!r}")
    horizon = args.K if args.K is not None else scenario.params.lookahead
    report = eqm.equilibrium(
        state, horizon, scenario.schemes, scenario.desmap, scenario.system
    )
    order = select.ChooseOrder(scenario.params.choose_order)
    rows = []
    for opp in sorted(report.opportunities, key=order.key):
        rows.append(
            [
                opp.scheme.key,
                str(opp.type_index),
                str(opp.lookahead),
                f"{opp.degree:.6g}",
                f"{opp.benefit:.6g}",
                opp.acting_state.label or args.state,
            ]
        )
    sys.stdout.write(f"state {args.state}  K={horizon}  Eq={report.degree:.6g}\n")
    sys.stdout.write(format_table(rows, ["action", "type", "k", "degree", "benefit", "acting"]))
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    out = Path(args.out)
    out.write_text(render_dot(scenario))
    log.info("wrote %s", out)
    return 0


class _LocalRepl:
    """Repl backend running the engine in-process."""

    def __init__(self, scenario: Scenario, mode: str, seed: int):
        self.session = sim.Session(scenario, mode, seed)

    def start(self) -> TraceEvent:
        return self.session.start()

    def go(self, target: str) -> TraceEvent:
        return self.session.step_to(target)

    def do(self, action: str) -> TraceEvent:
        return self.session.pick_human_action(action)

    def set_mode(self, mode: str) -> None:
        self.session.set_mode(mode)

    def describe(self) -> tuple[str, list[str], list[str]]:
        s = self.session
        return s.label, s.enabled_transitions(), s.enabled_human_actions()


class _RemoteRepl:
    """Repl backend steering a running bridge (thin HTTP client)."""

    def __init__(self, url: str):
        import httpx

        self.http = httpx.Client(base_url=url.rstrip("/"), timeout=10.0)

    def _event(self, response) -> TraceEvent:
        if response.status_code >= 400:
            raise sim.IllegalPickError(response.json().get("detail", response.text))
        return TraceEvent.from_dict(response.json())

    def start(self) -> TraceEvent:
        info = self.http.get("/v1/session").json()
        lines = self.http.get("/v1/trace").text.splitlines()
        if lines:
            return TraceEvent.from_json(lines[-1])
        return self._event(self.http.post("/v1/reset", json={"seed": info["seed"]}))

    def go(self, target: str) -> TraceEvent:
        return self._event(self.http.post("/v1/step", json={"to": target}))

    def do(self, action: str) -> TraceEvent:
        return self._event(self.http.post("/v1/step", json={"action": action}))

    def set_mode(self, mode: str) -> None:
        response = self.http.post("/v1/mode", json={"mode": mode})
        if response.status_code >= 400:
            raise sim.SimError(response.json().get("detail", response.text))

    def describe(self) -> tuple[str, list[str], list[str]]:
        info = self.http.get("/v1/session").json()
        return (
            info["current_state"],
            info["enabled_transitions"],
            info["enabled_human_actions"],
        )


def cmd_repl(args: argparse.Namespace) -> int:
    if args.url:
        backend = _RemoteRepl(args.url)
    else:
        backend = _LocalRepl(_load(args.scenario), args.mode, args.seed)
    event = backend.start()
    _print_repl_event(event)
    sys.stdout.write(_repl_help())
    for line in sys.stdin:
        words = line.split()
        if not words:
            continue
        command = words[0]
        try:
            if command in ("quit", "exit", "q"):
                break
            elif command == "go" and len(words) > 1:
                _print_repl_event(backend.go(words[1]))
            elif command == "do" and len(words) > 1:
                _print_repl_event(backend.do(" ".join(words[1:])))
            elif command == "mode" and len(words) > 1:
                backend.set_mode(words[1])
                sys.stdout.write(f"mode set to {words[1]}\n")
            elif command == "show":
                _print_repl_state(backend)
            else:
                sys.stdout.write(_repl_help())
        except sim.SimError as exc:
            sys.stdout.write(f"error: {exc}\n")
    return 0


def _repl_help() -> str:
    return (
        "commands: go <state-id> | do <human action> | mode hir|eqm|combined"
        " | show | quit\n"
    )


def _print_repl_state(backend) -> None:
    label, edges, human_actions = backend.describe()
    sys.stdout.write(f"state: {label}\n")
    sys.stdout.write(f"edges: {', '.join(edges) or '(none)'}\n")
    sys.stdout.write(f"human actions: {', '.join(human_actions) or '(none)'}\n")


def _print_repl_event(event: TraceEvent) -> None:
    intention = event.intention["goal"] if event.intention else "-"
    action = event.dispatched["label"] if event.dispatched else "-"
    sys.stdout.write(
        f"[{event.step}] {event.state}: intention={intention} action={action}"
        f" -> {event.result_state}\n"
    )
    if event.dispatched and event.dispatched.get("message"):
        sys.stdout.write(f'    robot says: "{event.dispatched["message"]}"\n')


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    scenario_path = args.scenario or str(packaged_scenario_path())
    app = create_app(scenario_path, mode=args.mode, seed=args.seed)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proactive",
        description="Proactive agent engine: intention-based and prediction-based decisions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a scripted free-run trajectory")
    run.add_argument("--scenario", help="scenario file (default: packaged domestic scenario)")
    run.add_argument("--mode", choices=sim.MODES, default="combined")
    run.add_argument("--trajectory", default="", help="comma-separated state ids")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--json", action="store_true", help="emit JSONL trace events")
    run.set_defaults(func=cmd_run)

    opps = sub.add_parser("opps", help="opportunity degrees at a state")
    opps.add_argument("--scenario")
    opps.add_argument("--state", required=True)
    opps.add_argument("--K", type=int, default=None, help="look-ahead horizon")
    opps.set_defaults(func=cmd_opps)

    graph = sub.add_parser("graph", help="export the scenario graph as DOT")
    graph.add_argument("--scenario")
    graph.add_argument("--out", required=True, help="output .dot path")
    graph.set_defaults(func=cmd_graph)

    repl = sub.add_parser("repl", help="interactive stepping session")
    repl.add_argument("--scenario")
    repl.add_argument("--mode", choices=sim.MODES, default="combined")
    repl.add_argument("--seed", type=int, default=0)
    repl.add_argument("--url", help="steer a running bridge instead of a local session")
    repl.set_defaults(func=cmd_repl)

    serve = sub.add_parser("serve", help="run the HTTP bridge")
    serve.add_argument("--scenario")
    serve.add_argument("--mode", choices=sim.MODES, default="combined")
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error")
        sys.stderr.write(f"internal error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
