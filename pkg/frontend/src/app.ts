// Session controller and page wiring. One in-flight mutation at a time;
// after every mutation the session view is re-fetched (polling model).

import { ApiError, BridgeClient, parseTrace } from "./api";
import type { GraphResponse, SessionInfo, TraceEvent } from "./types";
import { MODES } from "./types";
import { renderGraph } from "./graph";
import { renderDecision, renderPicks, renderTimeline } from "./table";

export interface PanelState {
  graph: GraphResponse | null;
  session: SessionInfo | null;
  events: TraceEvent[];
  selectedStep: number | null;
  busy: boolean;
  error: string | null;
}

export class SessionController {
  state: PanelState = {
    graph: null,
    session: null,
    events: [],
    selectedStep: null,
    busy: false,
    error: null,
  };

  constructor(
    readonly client: BridgeClient,
    readonly onChange: (state: PanelState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  async load(): Promise<void> {
    this.state.graph = await this.client.getGraph();
    this.state.session = await this.client.getSession();
    this.state.events = parseTrace(await this.client.getTrace());
    this.state.selectedStep = this.lastStep();
    this.emit();
  }

  lastStep(): number | null {
    const events = this.state.events;
    return events.length > 0 ? events[events.length - 1].step : null;
  }

  selectedEvent(): TraceEvent | null {
    if (this.state.selectedStep === null) return null;
    return this.state.events.find((e) => e.step === this.state.selectedStep) ?? null;
  }

  select(step: number): void {
    this.state.selectedStep = step;
    this.emit();
  }

  private async mutate(run: () => Promise<TraceEvent | null>): Promise<void> {
    if (this.state.busy) return;
    this.state.busy = true;
    this.state.error = null;
    this.emit();
    try {
      const event = await run();
      if (event !== null) {
        this.state.events = parseTrace(await this.client.getTrace());
        this.state.selectedStep = event.step;
      }
      this.state.session = await this.client.getSession();
    } catch (error) {
      this.state.error = error instanceof ApiError ? error.message : String(error);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  pickTransition(target: string): Promise<void> {
    return this.mutate(() => this.client.stepTo(target));
  }

  pickHumanAction(action: string): Promise<void> {
    return this.mutate(() => this.client.stepAction(action));
  }

  setMode(mode: string): Promise<void> {
    return this.mutate(async () => {
      this.state.session = await this.client.setMode(mode);
      return null;
    });
  }

  reset(seed: number): Promise<void> {
    return this.mutate(async () => {
      const event = await this.client.reset(seed);
      return event;
    });
  }
}

function required(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export function mountPanel(root: Document, client: BridgeClient): SessionController {
  const graphBox = required("graph");
  const decisionBox = required("decision");
  const timelineBox = required("timeline");
  const picksBox = required("picks");
  const statusBox = required("status");
  const modeBox = required("mode") as HTMLSelectElement;
  const resetButton = required("reset") as HTMLButtonElement;
  const seedInput = required("seed") as HTMLInputElement;

  for (const mode of MODES) {
    const option = root.createElement("option");
    option.value = mode;
    option.textContent = mode;
    modeBox.appendChild(option);
  }

  const controller = new SessionController(client, (state) => {
    if (state.graph && state.session) {
      renderGraph(
        graphBox,
        state.graph,
        state.session.current_state,
        state.busy ? [] : state.session.enabled_transitions,
        { onPickTransition: (target) => void controller.pickTransition(target) },
      );
      modeBox.value = state.session.mode;
      seedInput.value = String(state.session.seed);
    }
    renderDecision(decisionBox, controller.selectedEvent());
    renderTimeline(timelineBox, state.events, state.selectedStep, (step) =>
      controller.select(step),
    );
    renderPicks(
      picksBox,
      state.session?.enabled_human_actions ?? [],
      state.busy,
      (action) => void controller.pickHumanAction(action),
    );
    statusBox.textContent = state.error
      ? `error: ${state.error}`
      : state.busy
        ? "working…"
        : state.session
          ? `state ${state.session.current_state} · mode ${state.session.mode} · K=${state.session.K} · seed ${state.session.seed}`
          : "connecting…";
  });

  modeBox.addEventListener("change", () => void controller.setMode(modeBox.value));
  resetButton.addEventListener("click", () =>
    void controller.reset(Number(seedInput.value) || 0),
  );

  void controller.load().catch((error) => {
    statusBox.textContent = `cannot reach the bridge: ${error}`;
  });
  return controller;
}
