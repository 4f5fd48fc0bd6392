/**
 * Pure view models: rendering is a function of the session payload.
 *
 * A board is a row of dots; a dot played in round k wears that round's
 * color (round 1 red, round 2 blue, round 3 green, then the palette
 * cycles).  Atoms render as an extra labeled cell after the row.
 */

import type { BoardPayload, SessionPayload, Side } from "./types";

export const ROUND_COLORS = [
  "#d62728", // round 1: red
  "#1f77b4", // round 2: blue
  "#2ca02c", // round 3: green
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

export function roundColor(round: number): string {
  return ROUND_COLORS[(round - 1) % ROUND_COLORS.length];
}

export interface DotView {
  position: number; // 1-based
  /** Rounds in which this element was selected (play-on-top gives several). */
  rounds: number[];
  colors: string[];
}

export interface AtomView {
  label: string;
  rounds: number[];
  colors: string[];
}

export interface BoardView {
  id: number;
  side: Side;
  dots: DotView[];
  atoms: AtomView[];
  alive: boolean;
}

export interface SessionView {
  boardsA: BoardView[];
  boardsB: BoardView[];
  roundsLeft: number;
  status: string;
  alivePairs: [number, number][];
  heuristic: boolean;
}

export function boardView(
  board: BoardPayload,
  side: Side,
  aliveIds: Set<number>,
): BoardView {
  const dotRounds = new Map<number, number[]>();
  const atomRounds = new Map<string, number[]>();
  board.history.forEach((sel, i) => {
    if (typeof sel === "number") {
      const rs = dotRounds.get(sel) ?? [];
      rs.push(i + 1);
      dotRounds.set(sel, rs);
    } else {
      const rs = atomRounds.get(sel) ?? [];
      rs.push(i + 1);
      atomRounds.set(sel, rs);
    }
  });
  const dots: DotView[] = [];
  for (let p = 1; p <= board.n; p++) {
    const rounds = dotRounds.get(p) ?? [];
    dots.push({ position: p, rounds, colors: rounds.map(roundColor) });
  }
  const atoms: AtomView[] = [...atomRounds.entries()]
    .sort(([x], [y]) => x.localeCompare(y))
    .map(([label, rounds]) => ({ label, rounds, colors: rounds.map(roundColor) }));
  return { id: board.id, side, dots, atoms, alive: aliveIds.has(board.id) };
}

export function sessionView(s: SessionPayload): SessionView {
  const aliveIds = new Set<number>(s.alivePairs.flat());
  const status = s.finished
    ? s.winner === "Duplicator"
      ? "Duplicator wins: a pair survived"
      : "Spoiler wins: all pairs dead"
    : `round ${s.rounds - s.roundsLeft + 1} of ${s.rounds}: ` +
      `${s.turn.role} (${s.turn.player}) to move`;
  return {
    boardsA: s.sideA.map((b) => boardView(b, "A", aliveIds)),
    boardsB: s.sideB.map((b) => boardView(b, "B", aliveIds)),
    roundsLeft: s.roundsLeft,
    status,
    alivePairs: s.alivePairs,
    heuristic: s.flags.includes("heuristic"),
  };
}

/** Positions a Spoiler click may select on a board (any position; the
 * same point again is a legal play on top). */
export function selectablePositions(board: BoardPayload): number[] {
  return Array.from({ length: board.n }, (_, i) => i + 1);
}
