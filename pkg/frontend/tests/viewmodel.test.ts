import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { parseTrace } from "../src/api";
import type { TraceEvent } from "../src/types";
import {
  compareOpportunities,
  desColor,
  formatDegree,
  graphAnchor,
  gridPositions,
  isChosenRow,
  rankedOpportunities,
  timelineRows,
} from "../src/viewmodel";

const FIXTURES = fileURLToPath(new URL("../../tests/fixtures/", import.meta.url));

function golden(name: string): TraceEvent[] {
  return parseTrace(readFileSync(FIXTURES + `golden_${name}.jsonl`, "utf8"));
}

describe("opportunity ranking", () => {
  it("mirrors the engine order on the golden combined trace", () => {
    for (const event of golden("combined")) {
      const ranked = rankedOpportunities(event);
      expect(ranked.map((o) => [o.source, o.action, o.type, o.k])).toEqual(
        event.opportunities.map((o) => [o.source, o.action, o.type, o.k]),
      );
    }
  });

  it("intention row outranks the dishes row at s1.0", () => {
    const event = golden("combined")[1];
    const ranked = rankedOpportunities(event);
    expect(ranked[0]).toMatchObject({ source: "HIR", action: "gather water-bottle" });
    expect(ranked[1]).toMatchObject({ source: "EqM", action: "clean-dishes" });
  });

  it("is a total order: equal keys fall back to the action name", () => {
    const base = golden("combined")[1].opportunities[1];
    const other = { ...base, action: "aaa" };
    expect(compareOpportunities(other, base)).toBeLessThan(0);
  });
});

describe("chosen-row identity", () => {
  it("flags exactly the trace event's chosen field", () => {
    const event = golden("combined")[1];
    const flagged = rankedOpportunities(event).filter((row) => isChosenRow(event, row));
    expect(flagged).toHaveLength(1);
    expect(flagged[0].action).toBe("gather water-bottle");
    expect(flagged[0].source).toBe("HIR");
  });

  it("flags nothing when the event chose nothing", () => {
    const event = golden("hir")[0];
    expect(event.chosen).toBeNull();
    expect(rankedOpportunities(event).some((row) => isChosenRow(event, row))).toBe(false);
  });
});

describe("mode isolation in traces", () => {
  it("intention-only traces carry no prediction rows", () => {
    for (const event of golden("hir")) {
      expect(event.opportunities.every((o) => o.source === "HIR")).toBe(true);
    }
  });

  it("prediction-only traces carry no intention rows", () => {
    for (const event of golden("eqm")) {
      expect(event.opportunities.every((o) => o.source === "EqM")).toBe(true);
      expect(event.intention).toBeNull();
    }
  });
});

describe("desirability color ramp", () => {
  it("matches the DOT export endpoints", () => {
    expect(desColor(1.0)).toBe("#4caf50");
    expect(desColor(0.0)).toBe("#e54c50");
  });

  it("clamps out-of-range values", () => {
    expect(desColor(2)).toBe(desColor(1));
    expect(desColor(-1)).toBe(desColor(0));
  });
});

describe("helpers", () => {
  it("formats degrees compactly", () => {
    expect(formatDegree(null)).toBe("—");
    expect(formatDegree(0.4)).toBe("0.4");
    expect(formatDegree(0.19999999999999996)).toBe("0.2");
  });

  it("anchors primed labels to their base node", () => {
    const ids = new Set(["s2.0", "s3.0"]);
    expect(graphAnchor("s2.0'", ids)).toBe("s2.0");
    expect(graphAnchor("s3.0", ids)).toBe("s3.0");
    expect(graphAnchor("zzz", ids)).toBeNull();
  });

  it("summarizes events for the timeline", () => {
    const rows = timelineRows(golden("hir"));
    expect(rows[1].summary).toContain("intends hiking");
    expect(rows[1].summary).toContain("gather water bottle");
    expect(rows[3].summary).toBe("no change");
    expect(rows[2].message).toBe("ready to leave now");
  });

  it("grid layout covers every id", () => {
    const positions = gridPositions(["a", "b", "c", "d", "e"]);
    expect(positions.size).toBe(5);
    const seen = new Set([...positions.values()].map(([x, y]) => `${x},${y}`));
    expect(seen.size).toBe(5);
  });
});
