"""HTTP bridge: exposes one simulation session to the steering panel.

JSON bodies mirror the trace schema exactly; every mutation returns the
resulting trace event. One session per server process, loopback by
default, CORS open for localhost dev servers. Mutations are serialized
with a non-blocking lock: a concurrent mutation gets 409.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, model_validator

from . import eqm, hir, select, sim
from .dot import action_edges
from .model import WorldState
from .scenario import load_scenario
from .trace import dump_jsonl


class StepRequest(BaseModel):
    """Either a free-run edge pick (``to``) or a human action pick."""

    to: str | None = None
    action: str | None = None
    outcome: int | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "StepRequest":
        if (self.to is None) == (self.action is None):
            raise ValueError("provide exactly one of 'to' or 'action'")
        return self


class ModeRequest(BaseModel):
    mode: str


class ResetRequest(BaseModel):
    seed: int = 0
    mode: str | None = None
    initial: str | None = None


def _session_info(session: sim.Session) -> dict:
    return {
        "current_state": session.label,
        "mode": session.mode,
        "step": len(session.events),
        "K": session.scenario.params.lookahead,
        "seed": session.seed,
        "enabled_transitions": session.enabled_transitions(),
        "enabled_human_actions": session.enabled_human_actions(),
    }


def _current_opportunities(session: sim.Session) -> dict:
    """Pure view of what the current state's decision would be."""
    scenario = session.scenario
    state = WorldState(session.atoms, label=session.label)
    order = select.ChooseOrder(scenario.params.choose_order)
    if session.mode == "hir":
        subs = scenario.substitution_map() if scenario.mode_config("hir").substitutions else {}
        step = hir.proactive_step(state, scenario.goals, scenario.actions, subs)
        if step is None:
            return {"opportunities": [], "chosen": None}
        _, action, message = step
        record = {
            "source": "HIR",
            "action": action.key,
            "label": action.display,
            "acting_state": session.label,
            "type": None,
            "k": None,
            "degree": None,
            "benefit": None,
            "message": message,
        }
        return {"opportunities": [record], "chosen": record}
    subs = (
        scenario.substitution_map()
        if scenario.mode_config(session.mode).substitutions
        else {}
    )
    opps = select.collect(
        state,
        scenario.params.lookahead,
        scenario.goals,
        scenario.actions,
        scenario.schemes,
        scenario.desmap,
        select.ScalingConfig(
            scenario.params.decrease_factor, scenario.params.increase_factor
        ),
        subs,
        scenario.system,
        include_hir=session.mode == "combined",
        include_eqm=True,
    )
    chosen = select.choose(opps, order)
    ranked = sorted(opps, key=order.key)
    return {
        "opportunities": [sim._opp_record(o, session.label) for o in ranked],
        "chosen": sim._opp_record(chosen, session.label) if chosen else None,
    }


def create_app(scenario_path: str, mode: str = "combined", seed: int = 0) -> FastAPI:
    scenario = load_scenario(scenario_path)
    session = sim.Session(scenario, mode, seed)
    session.start()

    app = FastAPI(title="proactive bridge", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.session = session
    app.state.mutate_lock = threading.Lock()

    def locked():
        if not app.state.mutate_lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="another step is in progress")
        return app.state.mutate_lock

    @app.get("/v1/graph")
    def graph() -> dict:
        states = []
        for st in scenario.file.states:
            states.append(
                {
                    "id": st.id,
                    "atoms": list(st.atoms),
                    "des": st.des,
                    "reconstructed": st.reconstructed,
                    "pos": list(st.pos) if st.pos else None,
                }
            )
        edges = [
            {"from": frm, "label": "", "to": to, "kind": "free"}
            for frm, to in scenario.file.free_run
        ]
        edges += [
            {"from": frm, "label": key, "to": to, "kind": "action"}
            for frm, key, to in action_edges(scenario)
        ]
        return {"states": states, "edges": edges, "initial": scenario.file.initial}

    @app.get("/v1/session")
    def session_info() -> dict:
        return _session_info(session)

    @app.get("/v1/opportunities")
    def opportunities() -> dict:
        return _current_opportunities(session)

    @app.post("/v1/step")
    def step(req: StepRequest) -> dict:
        lock = locked()
        try:
            if req.to is not None:
                event = session.step_to(req.to)
            else:
                event = session.pick_human_action(req.action or "", req.outcome)
        except sim.SimError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        finally:
            lock.release()
        return event.to_dict()

    @app.post("/v1/mode")
    def set_mode(req: ModeRequest) -> dict:
        lock = locked()
        try:
            session.set_mode(req.mode)
        except sim.SimError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        finally:
            lock.release()
        return _session_info(session)

    @app.post("/v1/reset")
    def reset(req: ResetRequest) -> dict:
        lock = locked()
        try:
            nonlocal_session = sim.Session(
                scenario, req.mode or session.mode, req.seed
            )
            event = nonlocal_session.start(req.initial)
            session.__dict__.update(nonlocal_session.__dict__)
        except sim.SimError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        finally:
            lock.release()
        return event.to_dict()

    @app.get("/v1/trace")
    def trace() -> PlainTextResponse:
        return PlainTextResponse(
            dump_jsonl(session.events), media_type="application/x-ndjson"
        )

    ui_dir = Path("frontend/dist")
    if ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
