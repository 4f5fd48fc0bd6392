/** Wire types mirroring the session service JSON. */

export type Side = "A" | "B";
export type Role = "Spoiler" | "Duplicator";

/** A selection as it appears on the wire: 1-based position or "a1". */
export type Selection = number | string;

export interface BoardPayload {
  id: number;
  n: number;
  history: Selection[];
}

export interface SessionPayload {
  id: string;
  humanRole: Role;
  variant: "ms" | "atoms";
  rounds: number;
  roundsLeft: number;
  turn: { role: Role; player: "human" | "engine" | "n/a" };
  sideA: BoardPayload[];
  sideB: BoardPayload[];
  alivePairs: [number, number][];
  finished: boolean;
  winner?: Role;
  flags: string[];
}

export interface SpoilerHint {
  losing: boolean;
  side: Side;
  selections: Record<string, Selection>;
}

export interface DuplicatorHint {
  losing: boolean;
  replacements: Record<string, Selection[]>;
}

export type Hint = SpoilerHint | DuplicatorHint;

export function isSpoilerHint(h: Hint): h is SpoilerHint {
  return "selections" in h;
}
