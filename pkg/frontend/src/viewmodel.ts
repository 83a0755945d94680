// Pure presentation logic: ranking, colors, and row selection.
// Every value shown comes from the bridge; nothing is recomputed here.

import type { GraphEdge, OpportunityRecord, TraceEvent } from "./types";

// Presentation mirror of the engine's choose order: degree desc, type
// asc, benefit desc, look-ahead asc, action name asc. Engine traces
// arrive pre-sorted; this comparator only keeps views stable.
export function compareOpportunities(a: OpportunityRecord, b: OpportunityRecord): number {
  const degree = (b.degree ?? 0) - (a.degree ?? 0);
  if (degree !== 0) return degree;
  const type = (a.type ?? 0) - (b.type ?? 0);
  if (type !== 0) return type;
  const benefit = (b.benefit ?? 0) - (a.benefit ?? 0);
  if (benefit !== 0) return benefit;
  const lookahead = (a.k ?? 0) - (b.k ?? 0);
  if (lookahead !== 0) return lookahead;
  return a.action < b.action ? -1 : a.action > b.action ? 1 : 0;
}

export function rankedOpportunities(event: TraceEvent): OpportunityRecord[] {
  return [...event.opportunities].sort(compareOpportunities);
}

export function isChosenRow(event: TraceEvent, row: OpportunityRecord): boolean {
  const chosen = event.chosen;
  if (chosen === null) return false;
  return (
    chosen.source === row.source &&
    chosen.action === row.action &&
    chosen.type === row.type &&
    chosen.k === row.k &&
    chosen.acting_state === row.acting_state
  );
}

// Same green-to-red ramp the DOT export uses: des=1 -> #4caf50, des=0 -> #e54c50.
export function desColor(des: number): string {
  const clamped = Math.min(1, Math.max(0, des));
  const red = Math.round(0xe5 - clamped * (0xe5 - 0x4c));
  const green = Math.round(0x4c + clamped * (0xaf - 0x4c));
  const blue = 0x50;
  const hex = (v: number) => v.toString(16).padStart(2, "0");
  return `#${hex(red)}${hex(green)}${hex(blue)}`;
}

export function formatDegree(value: number | null): string {
  if (value === null) return "—";
  return value.toFixed(3).replace(/\.?0+$/, "") || "0";
}

// The session's current node on the graph: trajectory labels prime a
// base state (s2.0' -> s2.0); fall back to the raw id for listed states.
export function graphAnchor(currentState: string, knownIds: Set<string>): string | null {
  if (knownIds.has(currentState)) return currentState;
  const unprimed = currentState.replace(/'+$/, "");
  return knownIds.has(unprimed) ? unprimed : null;
}

export interface TimelineRow {
  step: number;
  state: string;
  mode: string;
  summary: string;
  message: string | null;
}

export function timelineRows(events: TraceEvent[]): TimelineRow[] {
  return events.map((event) => ({
    step: event.step,
    state: event.state,
    mode: event.mode,
    summary: summarize(event),
    message: event.dispatched?.message ?? null,
  }));
}

function summarize(event: TraceEvent): string {
  if (!event.changed) return "no change";
  const parts: string[] = [];
  if (event.intention) parts.push(`intends ${event.intention.goal}`);
  if (event.dispatched) {
    parts.push(event.dispatched.label);
  } else if (event.chosen?.deferred) {
    parts.push(`defers ${event.chosen.label} @ ${event.chosen.acting_state}`);
  } else if (!event.chosen) {
    parts.push("idle");
  }
  return parts.join(" · ") || "idle";
}

// Fallback layout when the scenario ships no positions: a simple grid.
export function gridPositions(ids: string[]): Map<string, [number, number]> {
  const out = new Map<string, [number, number]>();
  const columns = Math.max(1, Math.ceil(Math.sqrt(ids.length)));
  ids.forEach((id, index) => {
    out.set(id, [index % columns, Math.floor(index / columns)]);
  });
  return out;
}

export function edgeKey(edge: GraphEdge): string {
  return `${edge.from}->${edge.to}:${edge.kind}:${edge.label}`;
}
