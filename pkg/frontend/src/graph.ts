// SVG state-graph view: nodes colored by desirability, free-run edges
// solid, robot-action edges dashed, the session's current node ringed,
// enabled transitions clickable.

import type { GraphResponse } from "./types";
import { desColor, edgeKey, graphAnchor, gridPositions } from "./viewmodel";

const CELL = 150;
const RADIUS = 26;
const PAD = 60;

export interface GraphCallbacks {
  onPickTransition: (target: string) => void;
}

interface Layout {
  positions: Map<string, [number, number]>;
  width: number;
  height: number;
}

function layout(graph: GraphResponse): Layout {
  const positions = new Map<string, [number, number]>();
  const missing = graph.states.filter((s) => s.pos === null).map((s) => s.id);
  const fallback = gridPositions(missing);
  for (const state of graph.states) {
    const cell = state.pos ?? fallback.get(state.id)!;
    positions.set(state.id, [PAD + cell[0] * CELL, PAD + cell[1] * CELL * 0.8]);
  }
  let width = 0;
  let height = 0;
  for (const [x, y] of positions.values()) {
    width = Math.max(width, x + PAD);
    height = Math.max(height, y + PAD);
  }
  return { positions, width, height };
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

export function renderGraph(
  container: HTMLElement,
  graph: GraphResponse,
  currentState: string,
  enabledTransitions: string[],
  callbacks: GraphCallbacks,
): void {
  const { positions, width, height } = layout(graph);
  container.replaceChildren();
  const svg = svgElement("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "graph-svg",
  });

  const marker = svgElement("marker", {
    id: "arrow",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgElement("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#777" }));
  const defs = svgElement("defs", {});
  defs.appendChild(marker);
  svg.appendChild(defs);

  const anchor = graphAnchor(currentState, new Set(positions.keys()));
  const enabled = new Set(enabledTransitions);

  for (const edge of graph.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    if (edge.from === edge.to) continue; // self-loops stay implicit
    const [x1, y1] = from;
    const [x2, y2] = to;
    const dx = x2 - x1;
    const dy = y2 - y1;
    const norm = Math.hypot(dx, dy) || 1;
    const sx = x1 + (dx / norm) * RADIUS;
    const sy = y1 + (dy / norm) * RADIUS;
    const ex = x2 - (dx / norm) * (RADIUS + 4);
    const ey = y2 - (dy / norm) * (RADIUS + 4);
    const line = svgElement("line", {
      x1: String(sx),
      y1: String(sy),
      x2: String(ex),
      y2: String(ey),
      class: edge.kind === "free" ? "edge-free" : "edge-action",
      "marker-end": "url(#arrow)",
    });
    line.dataset.edge = edgeKey(edge);
    svg.appendChild(line);
    if (edge.kind === "action") {
      const text = svgElement("text", {
        x: String((sx + ex) / 2),
        y: String((sy + ey) / 2 - 4),
        class: "edge-label",
      });
      text.textContent = edge.label;
      svg.appendChild(text);
    }
  }

  for (const state of graph.states) {
    const [x, y] = positions.get(state.id)!;
    const group = svgElement("g", { class: "node", "data-id": state.id });
    const pickable = anchor !== null && enabled.has(state.id) && state.id !== anchor;
    const circle = svgElement("circle", {
      cx: String(x),
      cy: String(y),
      r: String(RADIUS),
      fill: desColor(state.des),
      class: [
        state.id === anchor ? "node-current" : "",
        pickable ? "node-pickable" : "",
      ]
        .filter(Boolean)
        .join(" "),
    });
    if (pickable) {
      circle.addEventListener("click", () => callbacks.onPickTransition(state.id));
    }
    group.appendChild(circle);
    const label = svgElement("text", {
      x: String(x),
      y: String(y - 2),
      class: "node-label",
    });
    label.textContent = state.id;
    group.appendChild(label);
    const des = svgElement("text", {
      x: String(x),
      y: String(y + 12),
      class: "node-des",
    });
    des.textContent = state.des.toFixed(1);
    group.appendChild(des);
    svg.appendChild(group);
  }

  container.appendChild(svg);
}
