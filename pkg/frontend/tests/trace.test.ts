import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { TraceError, maxPosition, parseTrace, replaySteps } from "../src/trace";

const FIXTURES = join(__dirname, "fixtures");

describe("parseTrace", () => {
  it("parses moves, atoms and copy lineage", () => {
    const t = parseTrace(
      ["1,A,1,3", "# copy,5,2", "1,B,2,a1", "2,B,5,2", ""].join("\n"),
    );
    expect(t.moves).toHaveLength(3);
    expect(t.moves[1]).toEqual({ round: 1, side: "B", boardId: 2, selection: "a1" });
    expect(t.lineage.get(5)).toBe(2);
    expect(t.rounds).toBe(2);
  });

  it("accepts an empty trace as an empty timeline", () => {
    const steps = replaySteps(parseTrace(""));
    expect(steps).toHaveLength(1);
    expect(steps[0].boards).toEqual([]);
  });

  it("rejects malformed lines", () => {
    expect(() => parseTrace("1,A,1")).toThrow(TraceError);
    expect(() => parseTrace("x,A,1,1")).toThrow(TraceError);
    expect(() => parseTrace("1,C,1,1")).toThrow(TraceError);
    expect(() => parseTrace("1,A,1,zero")).toThrow(TraceError);
  });
});

describe("replaySteps", () => {
  it("copies inherit their parent history", () => {
    const t = parseTrace(["1,A,1,2", "# copy,3,1", "2,A,3,1"].join("\n"));
    const steps = replaySteps(t);
    const last = steps[steps.length - 1];
    const copy = last.boards.find((b) => b.id === 3);
    expect(copy?.history.map((h) => h.selection)).toEqual([2, 1]);
  });

  it("steps scrub forward one move at a time", () => {
    const t = parseTrace(["1,A,1,1", "1,B,2,1"].join("\n"));
    const steps = replaySteps(t);
    expect(steps.map((s) => s.index)).toEqual([0, 1, 2]);
    expect(steps[1].boards).toHaveLength(1);
    expect(steps[2].boards).toHaveLength(2);
  });
});

describe("the ten-versus-nine figure trace", () => {
  const text = readFileSync(join(FIXTURES, "ten_v_nine.trace"), "utf-8");

  it("loads without error", () => {
    const t = parseTrace(text);
    expect(t.rounds).toBe(4);
    expect(t.moves.length).toBeGreaterThan(100);
    const steps = replaySteps(t);
    expect(steps).toHaveLength(t.moves.length + 1);
    expect(maxPosition(steps)).toBe(10);
  });

  it("opens at the centre of the nine-board", () => {
    const t = parseTrace(text);
    expect(t.moves[0]).toEqual({ round: 1, side: "B", boardId: 2, selection: 5 });
  });

  it("contains a play on top", () => {
    const t = parseTrace(text);
    const seen = new Map<number, Set<number | string>>();
    let onTop = false;
    for (const mv of t.moves) {
      const s = seen.get(mv.boardId) ?? new Set();
      if (s.has(mv.selection)) onTop = true;
      s.add(mv.selection);
      seen.set(mv.boardId, s);
    }
    expect(onTop).toBe(true);
  });
});
