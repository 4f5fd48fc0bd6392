/**
 * Strategy-lab trace files: parsing and step-through replay.
 *
 * A trace line is "round,side,board-id,selection" with 1-based positions
 * and atoms written "a1", "a2", ...  Comment lines start with "#"; a
 * "# copy,new,parent" comment records Duplicator copy lineage.  Replay
 * builds one timeline step per line so the UI can scrub forward and
 * back.
 */

import type { Selection, Side } from "./types";

export interface TraceMove {
  round: number;
  side: Side;
  boardId: number;
  selection: Selection;
}

export interface Trace {
  moves: TraceMove[];
  /** copy board id -> parent board id */
  lineage: Map<number, number>;
  rounds: number;
}

export class TraceError extends Error {}

export function parseTrace(text: string): Trace {
  const moves: TraceMove[] = [];
  const lineage = new Map<number, number>();
  let rounds = 0;
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const copy = line.match(/^#\s*copy,(\d+),(\d+)$/);
      if (copy) lineage.set(Number(copy[1]), Number(copy[2]));
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== 4) {
      throw new TraceError(`line ${i + 1}: expected 4 fields, got ${parts.length}`);
    }
    const [roundStr, side, boardStr, selStr] = parts;
    const round = Number(roundStr);
    const boardId = Number(boardStr);
    if (!Number.isInteger(round) || round < 1) {
      throw new TraceError(`line ${i + 1}: bad round ${JSON.stringify(roundStr)}`);
    }
    if (side !== "A" && side !== "B") {
      throw new TraceError(`line ${i + 1}: bad side ${JSON.stringify(side)}`);
    }
    if (!Number.isInteger(boardId) || boardId < 1) {
      throw new TraceError(`line ${i + 1}: bad board id ${JSON.stringify(boardStr)}`);
    }
    let selection: Selection;
    if (/^a\d+$/.test(selStr)) {
      selection = selStr;
    } else {
      selection = Number(selStr);
      if (!Number.isInteger(selection) || selection < 1) {
        throw new TraceError(`line ${i + 1}: bad selection ${JSON.stringify(selStr)}`);
      }
    }
    moves.push({ round, side, boardId, selection });
    rounds = Math.max(rounds, round);
  }
  return { moves, lineage, rounds };
}

export interface ReplayBoard {
  id: number;
  side: Side;
  history: { round: number; selection: Selection }[];
}

export interface ReplayStep {
  index: number; // moves applied so far
  move: TraceMove | null;
  boards: ReplayBoard[];
}

/**
 * Timeline of board states, one step per move.  Board sizes are not part
 * of the trace, so replay tracks histories only; the renderer sizes rows
 * to the largest position seen.
 */
export function replaySteps(trace: Trace): ReplayStep[] {
  const boards = new Map<number, ReplayBoard>();
  const resolveParent = (id: number): ReplayBoard | undefined => {
    let p = trace.lineage.get(id);
    while (p !== undefined && !boards.has(p)) p = trace.lineage.get(p);
    return p === undefined ? undefined : boards.get(p);
  };
  const snapshot = (): ReplayBoard[] =>
    [...boards.values()]
      .map((b) => ({ ...b, history: [...b.history] }))
      .sort((x, y) => x.id - y.id);
  const steps: ReplayStep[] = [{ index: 0, move: null, boards: [] }];
  trace.moves.forEach((mv, i) => {
    let b = boards.get(mv.boardId);
    if (!b) {
      const parent = resolveParent(mv.boardId);
      b = {
        id: mv.boardId,
        side: mv.side,
        history: parent ? [...parent.history] : [],
      };
      boards.set(mv.boardId, b);
    }
    b.history.push({ round: mv.round, selection: mv.selection });
    steps.push({ index: i + 1, move: mv, boards: snapshot() });
  });
  return steps;
}

export function maxPosition(steps: ReplayStep[]): number {
  let max = 1;
  for (const step of steps) {
    for (const b of step.boards) {
      for (const h of b.history) {
        if (typeof h.selection === "number" && h.selection > max) max = h.selection;
      }
    }
  }
  return max;
}
