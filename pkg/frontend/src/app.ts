/**
 * DOM shell: a play screen and a trace replay screen.
 *
 * All game logic lives server-side; this file only wires clicks to the
 * API client and paints the pure view models.
 */

import { ApiError, Client } from "./api";
import { maxPosition, parseTrace, replaySteps, type ReplayStep } from "./trace";
import type { Selection, SessionPayload, Side } from "./types";
import { isSpoilerHint } from "./types";
import { roundColor, sessionView, type BoardView } from "./view";

const client = new Client("");

interface PlayState {
  session: SessionPayload | null;
  /** Pending Spoiler picks: board id -> selection. */
  picks: Map<number, Selection>;
  pickSide: Side | null;
  /** Pending Duplicator replacements: board id -> selections. */
  copies: Map<number, Selection[]>;
  message: string;
}

const play: PlayState = {
  session: null,
  picks: new Map(),
  pickSide: null,
  copies: new Map(),
  message: "",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function paintBoard(view: BoardView, onDot?: (pos: number) => void): HTMLElement {
  const row = el("div", `board side-${view.side}${view.alive ? " alive" : " dead"}`);
  row.appendChild(el("span", "board-id", `${view.side}${view.id}`));
  for (const dot of view.dots) {
    const d = el("button", "dot", String(dot.position));
    if (dot.rounds.length) {
      d.style.background = dot.colors[dot.colors.length - 1];
      d.classList.add("played");
      d.title = `rounds ${dot.rounds.join(", ")}`;
    }
    if (onDot) d.addEventListener("click", () => onDot(dot.position));
    else d.disabled = true;
    row.appendChild(d);
  }
  for (const atom of view.atoms) {
    const a = el("span", "atom", atom.label);
    a.style.background = atom.colors[atom.colors.length - 1];
    row.appendChild(a);
  }
  return row;
}

function repaintPlay(): void {
  const root = document.getElementById("play");
  if (!root || !play.session) return;
  root.textContent = "";
  const v = sessionView(play.session);
  root.appendChild(el("p", "status", v.status + (v.heuristic ? " (heuristic)" : "")));
  if (play.message) root.appendChild(el("p", "message", play.message));
  const humanSpoiler = play.session.humanRole === "Spoiler";
  const myTurn = !play.session.finished && play.session.turn.player === "human";
  for (const [label, boards] of [
    ["side A", v.boardsA],
    ["side B", v.boardsB],
  ] as const) {
    root.appendChild(el("h3", undefined, label));
    for (const bv of boards) {
      root.appendChild(
        paintBoard(bv, myTurn ? (pos) => onDotClick(bv, pos) : undefined),
      );
    }
  }
  const controls = el("div", "controls");
  const submit = el("button", undefined, "submit move");
  submit.addEventListener("click", onSubmit);
  submit.disabled = !myTurn;
  controls.appendChild(submit);
  const hint = el("button", undefined, "hint");
  hint.addEventListener("click", onHint);
  hint.disabled = !myTurn;
  controls.appendChild(hint);
  if (!humanSpoiler) {
    const fill = el("button", undefined, "oblivious fill");
    fill.title = "ask the engine to complete every remaining copy";
    fill.addEventListener("click", onObliviousFill);
    fill.disabled = !myTurn;
    controls.appendChild(fill);
  }
  const undo = el("button", undefined, "undo");
  undo.addEventListener("click", onUndo);
  controls.appendChild(undo);
  root.appendChild(controls);
}

function onDotClick(bv: BoardView, pos: number): void {
  if (!play.session) return;
  if (play.session.humanRole === "Spoiler") {
    if (play.pickSide && play.pickSide !== bv.side) {
      play.picks.clear();
    }
    play.pickSide = bv.side;
    play.picks.set(bv.id, pos);
    play.message = `picked ${bv.side}${bv.id}(${pos})`;
  } else {
    const sels = play.copies.get(bv.id) ?? [];
    sels.push(pos);
    play.copies.set(bv.id, sels);
    play.message = `copy of ${bv.side}${bv.id} at ${pos}`;
  }
  repaintPlay();
}

async function guarded(fn: () => Promise<void>): Promise<void> {
  try {
    await fn();
    play.message = "";
  } catch (e) {
    play.message = e instanceof ApiError ? `${e.status}: ${e.message}` : String(e);
  }
  repaintPlay();
}

async function onSubmit(): Promise<void> {
  await guarded(async () => {
    if (!play.session) return;
    if (play.session.humanRole === "Spoiler") {
      if (!play.pickSide) throw new Error("pick one element per board first");
      const selections: Record<string, Selection> = {};
      for (const [id, sel] of play.picks) selections[String(id)] = sel;
      play.session = await client.spoilerMove(play.session.id, play.pickSide, selections);
      play.picks.clear();
      play.pickSide = null;
    } else {
      const replacements: Record<string, Selection[]> = {};
      for (const [id, sels] of play.copies) replacements[String(id)] = sels;
      play.session = await client.duplicatorMove(play.session.id, replacements);
      play.copies.clear();
    }
  });
}

async function onHint(): Promise<void> {
  await guarded(async () => {
    if (!play.session) return;
    const hint = await client.hint(play.session.id);
    if (isSpoilerHint(hint)) {
      play.pickSide = hint.side;
      play.picks = new Map(
        Object.entries(hint.selections).map(([id, sel]) => [Number(id), sel]),
      );
    } else {
      play.copies = new Map(
        Object.entries(hint.replacements).map(([id, sels]) => [Number(id), sels]),
      );
    }
    play.message = hint.losing ? "best effort — no winning move" : "winning move staged";
  });
}

async function onObliviousFill(): Promise<void> {
  await guarded(async () => {
    if (!play.session) return;
    const hint = await client.hint(play.session.id);
    if (!isSpoilerHint(hint)) {
      play.copies = new Map(
        Object.entries(hint.replacements).map(([id, sels]) => [Number(id), sels]),
      );
      play.session = await client.duplicatorMove(
        play.session.id,
        hint.replacements,
      );
      play.copies.clear();
    }
  });
}

async function onUndo(): Promise<void> {
  await guarded(async () => {
    if (!play.session) return;
    play.session = await client.undo(play.session.id);
    play.picks.clear();
    play.copies.clear();
  });
}

async function onNewGame(ev: Event): Promise<void> {
  ev.preventDefault();
  await guarded(async () => {
    const form = ev.target as HTMLFormElement;
    const data = new FormData(form);
    play.session = await client.createSession({
      a: String(data.get("a") || "lo:3").split(","),
      b: String(data.get("b") || "lo:2").split(","),
      rounds: Number(data.get("rounds") || 2),
      variant: data.get("atoms") ? "atoms" : "ms",
      humanRole: (data.get("role") as "Spoiler" | "Duplicator") || "Spoiler",
    });
  });
}

// ---------------------------------------------------------------- replay

let steps: ReplayStep[] = [];
let cursor = 0;

function repaintReplay(): void {
  const root = document.getElementById("replay-view");
  if (!root) return;
  root.textContent = "";
  if (!steps.length) return;
  const step = steps[cursor];
  root.appendChild(
    el("p", "status", step.move
      ? `step ${step.index}/${steps.length - 1}: round ${step.move.round}, ` +
        `${step.move.side}${step.move.boardId}(${step.move.selection})`
      : `step 0/${steps.length - 1}`),
  );
  const width = maxPosition(steps);
  for (const b of step.boards) {
    const row = el("div", `board side-${b.side}`);
    row.appendChild(el("span", "board-id", `${b.side}${b.id}`));
    const byPos = new Map<number, number>();
    for (const h of b.history) {
      if (typeof h.selection === "number") byPos.set(h.selection, h.round);
    }
    for (let p = 1; p <= width; p++) {
      const d = el("span", "dot", String(p));
      const round = byPos.get(p);
      if (round !== undefined) {
        d.style.background = roundColor(round);
        d.classList.add("played");
      }
      row.appendChild(d);
    }
    for (const h of b.history) {
      if (typeof h.selection === "string") {
        const a = el("span", "atom", h.selection);
        a.style.background = roundColor(h.round);
        row.appendChild(a);
      }
    }
    root.appendChild(row);
  }
}

function wireReplay(): void {
  const file = document.getElementById("trace-file") as HTMLInputElement | null;
  file?.addEventListener("change", async () => {
    const f = file.files?.[0];
    if (!f) return;
    try {
      steps = replaySteps(parseTrace(await f.text()));
      cursor = 0;
    } catch (e) {
      steps = [];
      const root = document.getElementById("replay-view");
      if (root) root.textContent = `load error: ${String(e)}`;
      return;
    }
    repaintReplay();
  });
  document.getElementById("step-back")?.addEventListener("click", () => {
    cursor = Math.max(0, cursor - 1);
    repaintReplay();
  });
  document.getElementById("step-fwd")?.addEventListener("click", () => {
    cursor = Math.min(steps.length - 1, cursor + 1);
    repaintReplay();
  });
}

export function start(): void {
  document.getElementById("new-game")?.addEventListener("submit", (ev) => {
    void onNewGame(ev);
  });
  wireReplay();
}

if (typeof document !== "undefined" && document.getElementById("play")) {
  start();
}
