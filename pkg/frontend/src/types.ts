// Wire types mirroring the bridge's JSON exactly (trace schema 1).
// The panel never computes degrees or plans; it renders these as-is.

export interface OpportunityRecord {
  source: "HIR" | "EqM";
  action: string;
  label: string;
  acting_state: string;
  type: number | null;
  k: number | null;
  degree: number | null;
  benefit: number | null;
  message: string | null;
  deferred?: boolean;
}

export interface IntentionRecord {
  goal: string;
  plan: string[];
  length: number;
}

export interface DispatchRecord {
  action: string;
  label: string;
  message: string | null;
  outcome_index: number;
}

export interface TraceEvent {
  schema: number;
  step: number;
  mode: string;
  state: string;
  changed: boolean;
  atoms: string[];
  intention: IntentionRecord | null;
  opportunities: OpportunityRecord[];
  chosen: OpportunityRecord | null;
  dispatched: DispatchRecord | null;
  result_state: string;
  result_atoms: string[];
  seed: number;
}

export interface GraphState {
  id: string;
  atoms: string[];
  des: number;
  reconstructed: boolean;
  pos: [number, number] | null;
}

export interface GraphEdge {
  from: string;
  label: string;
  to: string;
  kind: "free" | "action";
}

export interface GraphResponse {
  states: GraphState[];
  edges: GraphEdge[];
  initial: string;
}

export interface SessionInfo {
  current_state: string;
  mode: string;
  step: number;
  K: number;
  seed: number;
  enabled_transitions: string[];
  enabled_human_actions: string[];
}

export type Mode = "hir" | "eqm" | "combined";
export const MODES: Mode[] = ["hir", "eqm", "combined"];
