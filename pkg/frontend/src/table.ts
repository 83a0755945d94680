// DOM builders for the decision panel and the trace timeline.
// Pure functions of the last fetched state; no reasoning here.

import type { TraceEvent } from "./types";
import {
  formatDegree,
  isChosenRow,
  rankedOpportunities,
  timelineRows,
} from "./viewmodel";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderDecision(container: HTMLElement, event: TraceEvent | null): void {
  container.replaceChildren();
  if (event === null) {
    container.appendChild(el("p", "empty", "No decisions yet."));
    return;
  }
  const heading = el(
    "h3",
    undefined,
    `Step ${event.step} · ${event.state} · ${event.mode}`,
  );
  container.appendChild(heading);

  const intention = el(
    "p",
    "intention",
    event.intention
      ? `Recognized intention: ${event.intention.goal} (${event.intention.length} steps left)`
      : "Recognized intention: none",
  );
  container.appendChild(intention);

  if (!event.changed) {
    container.appendChild(el("p", "empty", "State unchanged — nothing evaluated."));
    return;
  }

  const rows = rankedOpportunities(event);
  if (rows.length === 0 && !event.dispatched) {
    container.appendChild(el("p", "empty", "No opportunities for acting."));
  } else if (rows.length > 0) {
    const table = el("table", "opps") as HTMLTableElement;
    const head = table.createTHead().insertRow();
    for (const title of ["", "source", "action", "type", "k", "degree", "benefit"]) {
      head.appendChild(el("th", undefined, title));
    }
    const body = table.createTBody();
    for (const row of rows) {
      const tr = body.insertRow();
      const chosen = isChosenRow(event, row);
      if (chosen) tr.className = "chosen";
      tr.insertCell().textContent = chosen ? "▶" : "";
      tr.insertCell().textContent = row.source;
      const action = tr.insertCell();
      action.textContent = row.label + (row.deferred ? " (deferred)" : "");
      tr.insertCell().textContent = row.type === null ? "—" : `Opp${row.type}`;
      tr.insertCell().textContent = row.k === null ? "—" : String(row.k);
      tr.insertCell().textContent = formatDegree(row.degree);
      tr.insertCell().textContent = formatDegree(row.benefit);
    }
    container.appendChild(table);
  }

  const outcome = el("p", "dispatch");
  if (event.dispatched) {
    outcome.textContent = `Robot does: ${event.dispatched.label} → ${event.result_state}`;
    if (event.dispatched.message) {
      outcome.textContent += ` — “${event.dispatched.message}”`;
    }
  } else if (event.chosen?.deferred) {
    outcome.textContent = `Deferred: ${event.chosen.label} once at ${event.chosen.acting_state}`;
  } else {
    outcome.textContent = "Robot does nothing.";
  }
  container.appendChild(outcome);
}

export function renderTimeline(
  container: HTMLElement,
  events: TraceEvent[],
  selected: number | null,
  onSelect: (step: number) => void,
): void {
  container.replaceChildren();
  if (events.length === 0) {
    container.appendChild(el("p", "empty", "Trace is empty."));
    return;
  }
  const list = el("ol", "timeline");
  for (const row of timelineRows(events)) {
    const item = el("li", row.step === selected ? "selected" : "");
    const button = el("button", "timeline-row") as HTMLButtonElement;
    button.textContent = `${row.step} · ${row.state} — ${row.summary}`;
    button.addEventListener("click", () => onSelect(row.step));
    item.appendChild(button);
    if (row.message) item.appendChild(el("div", "speech", `“${row.message}”`));
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderPicks(
  container: HTMLElement,
  humanActions: string[],
  busy: boolean,
  onPick: (action: string) => void,
): void {
  container.replaceChildren();
  if (humanActions.length === 0) {
    container.appendChild(el("p", "empty", "No human actions available."));
    return;
  }
  for (const action of humanActions) {
    const button = el("button", "pick") as HTMLButtonElement;
    button.textContent = action;
    button.disabled = busy;
    button.addEventListener("click", () => onPick(action));
    container.appendChild(button);
  }
}
