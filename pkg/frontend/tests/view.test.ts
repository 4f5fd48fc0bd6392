import { describe, expect, it } from "vitest";

import type { SessionPayload } from "../src/types";
import { ROUND_COLORS, boardView, roundColor, sessionView } from "../src/view";

function payload(partial: Partial<SessionPayload>): SessionPayload {
  return {
    id: "t",
    humanRole: "Spoiler",
    variant: "ms",
    rounds: 2,
    roundsLeft: 1,
    turn: { role: "Spoiler", player: "human" },
    sideA: [],
    sideB: [],
    alivePairs: [],
    finished: false,
    flags: [],
    ...partial,
  };
}

describe("roundColor", () => {
  it("uses red, blue, green for the first three rounds", () => {
    expect(roundColor(1)).toBe("#d62728");
    expect(roundColor(2)).toBe("#1f77b4");
    expect(roundColor(3)).toBe("#2ca02c");
  });

  it("cycles beyond the palette", () => {
    expect(roundColor(ROUND_COLORS.length + 1)).toBe(roundColor(1));
  });
});

describe("boardView", () => {
  it("marks played dots with their round colors", () => {
    const v = boardView({ id: 1, n: 3, history: [2] }, "A", new Set([1]));
    expect(v.dots.map((d) => d.rounds)).toEqual([[], [1], []]);
    expect(v.dots[1].colors).toEqual([roundColor(1)]);
    expect(v.alive).toBe(true);
  });

  it("stacks rounds on a play on top", () => {
    const v = boardView({ id: 4, n: 2, history: [1, 1] }, "B", new Set());
    expect(v.dots[0].rounds).toEqual([1, 2]);
    expect(v.dots[0].colors).toEqual([roundColor(1), roundColor(2)]);
    expect(v.alive).toBe(false);
  });

  it("renders atoms after the row", () => {
    const v = boardView({ id: 2, n: 2, history: ["a1", 2] }, "A", new Set());
    expect(v.atoms).toEqual([
      { label: "a1", rounds: [1], colors: [roundColor(1)] },
    ]);
    expect(v.dots[1].rounds).toEqual([2]);
  });
});

describe("sessionView", () => {
  it("is a pure function of the payload", () => {
    const p = payload({
      sideA: [{ id: 1, n: 3, history: [2] }],
      sideB: [
        { id: 3, n: 2, history: [1] },
        { id: 4, n: 2, history: [2] },
      ],
      alivePairs: [[1, 4]],
    });
    const a = sessionView(p);
    const b = sessionView(p);
    expect(a).toEqual(b);
    expect(a.boardsB.map((x) => x.alive)).toEqual([false, true]);
    expect(a.status).toContain("round 2 of 2");
  });

  it("announces the winner on finished sessions", () => {
    const won = sessionView(
      payload({ finished: true, winner: "Duplicator", roundsLeft: 0 }),
    );
    expect(won.status).toContain("Duplicator wins");
    const lost = sessionView(
      payload({ finished: true, winner: "Spoiler", roundsLeft: 0 }),
    );
    expect(lost.status).toContain("all pairs dead");
  });

  it("surfaces the heuristic flag", () => {
    expect(sessionView(payload({ flags: ["heuristic"] })).heuristic).toBe(true);
    expect(sessionView(payload({})).heuristic).toBe(false);
  });
});
