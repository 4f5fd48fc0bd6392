"""HTTP session service: play games against the engine over JSON.

Sessions are in-memory; pass ``persist_dir`` to also journal every session
to a file (a ``#``-comment header plus strategy-lab trace lines) and
restore the sessions on restart.

The engine's Duplicator is the oblivious strategy pruned for UI
legibility: duplicate-canonical boards go first, then dead boards, and
the survivors are capped at ``UI_BOARD_CAP`` — at solvable sizes the cap
never discards a board that a Duplicator win still needs.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .budget import Budget, BudgetExceeded
from .ms import SIDE_A, SIDE_B, game_state, ms_winner
from .structures import (
    Board,
    DomainError,
    UsageError,
    atom,
    board,
    canonical_key,
    extend,
    is_atom,
    partial_iso,
)

UI_BOARD_CAP = 8
SOLVABLE_N = 5
SOLVABLE_R = 3

from .cli import parse_structure  # noqa: E402  (shared spec grammar)


def _sel_of_json(v, n: int, atoms: int):
    if isinstance(v, str) and v.startswith("a"):
        j = int(v[1:])
        if not 1 <= j <= atoms:
            raise UsageError(f"atom {v} out of range")
        return atom(j - 1)
    i = int(v)
    if not 1 <= i <= n:
        raise UsageError(f"position {v} out of range")
    return ("e", i - 1)


def _sel_to_json(sel):
    return f"a{sel[1] + 1}" if is_atom(sel) else sel[1] + 1


@dataclass
class Session:
    id: str
    human_role: str
    atoms: bool
    rounds: int
    specs: tuple
    side_a: list = field(default_factory=list)
    side_b: list = field(default_factory=list)
    board_ids: dict = field(default_factory=dict)  # id(Board) -> int
    next_id: int = 1
    round_index: int = 0  # completed rounds
    phase: str = "Spoiler"
    pending_side: str | None = None  # side Spoiler just moved on
    history: list = field(default_factory=list)  # snapshots for undo
    log: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    # -- bookkeeping ------------------------------------------------------
    def bid(self, b: Board) -> int:
        key = id(b)
        if key not in self.board_ids:
            self.board_ids[key] = self.next_id
            self.next_id += 1
        return self.board_ids[key]

    def atom_count(self) -> int:
        return self.rounds if self.atoms else 0

    def boards(self, side: str):
        return self.side_a if side == SIDE_A else self.side_b

    @property
    def finished(self) -> bool:
        return self.round_index >= self.rounds and self.phase == "Spoiler"

    def alive(self):
        return [
            (self.bid(a), self.bid(b))
            for a in self.side_a
            for b in self.side_b
            if len(a.history) == len(b.history) and partial_iso(a, b)
        ]

    def turn_role(self) -> str:
        return self.phase

    def snapshot(self):
        return (
            list(self.side_a),
            list(self.side_b),
            self.round_index,
            self.phase,
            self.pending_side,
            list(self.log),
            list(self.flags),
        )

    def restore(self, snap):
        (
            self.side_a,
            self.side_b,
            self.round_index,
            self.phase,
            self.pending_side,
            self.log,
            self.flags,
        ) = (list(snap[0]), list(snap[1]), snap[2], snap[3], snap[4], list(snap[5]), list(snap[6]))

    def to_json(self):
        def side(boards):
            return [
                {
                    "id": self.bid(b),
                    "n": b.struct.n,
                    "history": [_sel_to_json(s) for s in b.history],
                }
                for b in boards
            ]

        turn_player = "n/a"
        if not self.finished:
            turn_player = "human" if self.turn_role() == self.human_role else "engine"
        alive = self.alive()
        state = {
            "id": self.id,
            "humanRole": self.human_role,
            "variant": "atoms" if self.atoms else "ms",
            "rounds": self.rounds,
            "roundsLeft": self.rounds - self.round_index,
            "turn": {"role": self.turn_role(), "player": turn_player},
            "sideA": side(self.side_a),
            "sideB": side(self.side_b),
            "alivePairs": [list(p) for p in alive],
            "finished": self.finished,
            "flags": self.flags,
        }
        if self.finished:
            state["winner"] = "Duplicator" if alive else "Spoiler"
        return state


class CreateSession(BaseModel):
    a: list[str]
    b: list[str]
    rounds: int
    variant: str = "ms"
    humanRole: str = "Spoiler"


class MoveBody(BaseModel):
    side: str | None = None
    selections: dict[str, int | str] | None = None
    replacements: dict[str, list[int | str]] | None = None


def _engine_budget() -> Budget:
    return Budget()


def _game_state(sess: Session, rounds_left: int | None = None):
    return game_state(
        sess.side_a,
        sess.side_b,
        rounds_left if rounds_left is not None else sess.rounds - sess.round_index,
        atoms=sess.atoms,
    )


def _all_sels(b: Board, atoms: int):
    return [("e", i) for i in range(b.struct.n)] + [atom(j) for j in range(atoms)]


def _expand_capped(sess: Session, side: str, budget: Budget):
    """Oblivious Duplicator reply on `side`, pruned and capped for the UI."""
    atoms = sess.atom_count()
    out, seen = [], set()
    for b in sess.boards(side):
        for sel in _all_sels(b, atoms):
            child = extend(b, sel, atoms_allowed=sess.atoms)
            key = canonical_key(child)
            if key not in seen:
                seen.add(key)
                out.append(child)
    other = sess.boards(SIDE_A if side == SIDE_B else SIDE_B)
    alive = [c for c in out if any(partial_iso(c, o) for o in other)]
    dead = [c for c in out if c not in alive]
    kept = alive + dead
    if len(kept) <= UI_BOARD_CAP:
        return kept
    kept = kept[: max(UI_BOARD_CAP, len(alive))]
    if len(kept) > UI_BOARD_CAP:
        # Trim alive boards only when the solver confirms the verdict holds.
        rounds_left = sess.rounds - sess.round_index - 1
        solvable = (
            max(b.struct.n for b in kept) <= SOLVABLE_N and rounds_left <= SOLVABLE_R
        )
        while len(kept) > UI_BOARD_CAP:
            victim = kept[-1]
            trimmed = kept[:-1]
            if solvable:
                try:
                    sides = (trimmed, other) if side == SIDE_A else (other, trimmed)
                    before = (kept, other) if side == SIDE_A else (other, kept)
                    full = ms_winner(game_state(*before, rounds_left, atoms=sess.atoms), budget)
                    cut = ms_winner(game_state(*sides, rounds_left, atoms=sess.atoms), budget)
                    if full.winner == "Duplicator" and cut.winner != "Duplicator":
                        kept = [victim] + trimmed[:-1]
                        continue
                except BudgetExceeded:
                    sess.flags.append("heuristic")
            else:
                sess.flags.append("heuristic")
            kept = trimmed
    return kept


def _engine_spoiler_move(sess: Session, budget: Budget):
    """Solver-optimal Spoiler move; falls back to a default when losing."""
    st = _game_state(sess)
    heuristic = False
    try:
        verdict = ms_winner(st, budget)
    except BudgetExceeded:
        verdict = None
        heuristic = True
    if verdict is not None and verdict.winner == "Spoiler" and verdict.certificate:
        mv = verdict.certificate.rounds[0]
        sels = dict(mv.moves)
        side = mv.side
        boards = sess.boards(side)
        return side, {b: sels.get(b.key, ("e", 0)) for b in boards}, heuristic
    side = SIDE_A
    return side, {b: ("e", 0) for b in sess.boards(side)}, True


def _log_moves(sess: Session, rnd: int, side: str, pairs):
    for b, sel in pairs:
        sess.log.append(f"{rnd},{side},{sess.bid(b)},{_sel_to_json(sel)}")


def _apply_spoiler(sess: Session, side: str, moves: dict):
    new = []
    logged = []
    for b in sess.boards(side):
        sel = moves[b]
        child = extend(b, sel, atoms_allowed=sess.atoms)
        sess.board_ids[id(child)] = sess.bid(b)
        new.append(child)
        logged.append((child, sel))
    if side == SIDE_A:
        sess.side_a = new
    else:
        sess.side_b = new
    _log_moves(sess, sess.round_index + 1, side, logged)
    sess.phase = "Duplicator"
    sess.pending_side = side


def _apply_duplicator(sess: Session, boards, parents=None):
    side = SIDE_A if sess.pending_side == SIDE_B else SIDE_B
    logged = []
    for i, child in enumerate(boards):
        if parents is not None:
            sess.board_ids.setdefault(id(child), None)
            if sess.board_ids[id(child)] is None:
                del sess.board_ids[id(child)]
                pid = sess.bid(parents[i])
                sess.log.append(f"# copy,{sess.next_id},{pid}")
                sess.board_ids[id(child)] = sess.next_id
                sess.next_id += 1
        logged.append((child, child.history[-1]))
    if side == SIDE_A:
        sess.side_a = list(boards)
    else:
        sess.side_b = list(boards)
    _log_moves(sess, sess.round_index + 1, side, logged)
    sess.phase = "Spoiler"
    sess.pending_side = None
    sess.round_index += 1


def _run_engine(sess: Session):
    """Let the engine play until it is the human's turn or the game ends."""
    budget = _engine_budget()
    while not sess.finished and sess.turn_role() != sess.human_role:
        if sess.phase == "Spoiler":
            side, moves, heuristic = _engine_spoiler_move(sess, budget)
            if heuristic:
                sess.flags.append("heuristic")
            _apply_spoiler(sess, side, moves)
        else:
            side = SIDE_A if sess.pending_side == SIDE_B else SIDE_B
            originals = list(sess.boards(side))
            expanded = _expand_capped(sess, side, budget)
            parents = [
                next(o for o in originals if e.history[: len(o.history)] == o.history and e.struct == o.struct)
                for e in expanded
            ]
            _apply_duplicator(sess, expanded, parents)


def create_app(persist_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="msgames service")
    sessions: dict[str, Session] = {}

    def persist(sess: Session):
        if not persist_dir:
            return
        os.makedirs(persist_dir, exist_ok=True)
        meta = {
            "id": sess.id,
            "a": list(sess.specs[0]),
            "b": list(sess.specs[1]),
            "rounds": sess.rounds,
            "variant": "atoms" if sess.atoms else "ms",
            "humanRole": sess.human_role,
        }
        path = os.path.join(persist_dir, f"{sess.id}.trace")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# session " + json.dumps(meta) + "\n")
            for line in sess.log:
                fh.write(line + "\n")

    def new_session(body: CreateSession) -> Session:
        if body.humanRole not in ("Spoiler", "Duplicator"):
            raise UsageError("humanRole must be Spoiler or Duplicator")
        if body.variant not in ("ms", "atoms"):
            raise UsageError("variant must be ms or atoms")
        if body.rounds < 1:
            raise UsageError("rounds must be >= 1")
        side_a = [board(parse_structure(s)) for s in body.a]
        side_b = [board(parse_structure(s)) for s in body.b]
        sess = Session(
            id=secrets.token_hex(8),
            human_role=body.humanRole,
            atoms=body.variant == "atoms",
            rounds=body.rounds,
            specs=(tuple(body.a), tuple(body.b)),
            side_a=side_a,
            side_b=side_b,
        )
        for b in side_a + side_b:
            sess.bid(b)
        _game_state(sess)  # validates shapes up front
        _run_engine(sess)
        return sess

    def restore_sessions():
        if not persist_dir or not os.path.isdir(persist_dir):
            return
        for name in os.listdir(persist_dir):
            if not name.endswith(".trace"):
                continue
            with open(os.path.join(persist_dir, name), encoding="utf-8") as fh:
                lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
            if not lines or not lines[0].startswith("# session "):
                continue
            meta = json.loads(lines[0][len("# session ") :])
            sess = Session(
                id=meta["id"],
                human_role=meta["humanRole"],
                atoms=meta["variant"] == "atoms",
                rounds=meta["rounds"],
                specs=(tuple(meta["a"]), tuple(meta["b"])),
                side_a=[board(parse_structure(s)) for s in meta["a"]],
                side_b=[board(parse_structure(s)) for s in meta["b"]],
            )
            by_id = {}
            for b in sess.side_a + sess.side_b:
                by_id[sess.bid(b)] = b
            for line in lines[1:]:
                if line.startswith("# copy,"):
                    _, nid, pid = line.removeprefix("# ").split(",")
                    by_id[int(nid)] = by_id[int(pid)]
                    continue
                rnd, side, bid_, sel = line.split(",")
                bid_, rnd = int(bid_), int(rnd)
                base = by_id[bid_]
                atoms_n = sess.atom_count()
                child = extend(
                    base,
                    _sel_of_json(sel, base.struct.n, atoms_n),
                    atoms_allowed=sess.atoms,
                )
                boards = sess.boards(side)
                if base in boards:
                    boards[boards.index(base)] = child
                else:
                    boards.append(child)
                sess.board_ids[id(child)] = bid_
                by_id[bid_] = child
            # Recompute round/phase from history lengths.
            la = max((len(b.history) for b in sess.side_a), default=0)
            lb = max((len(b.history) for b in sess.side_b), default=0)
            sess.round_index = min(la, lb)
            if la != lb:
                sess.phase = "Duplicator"
                sess.pending_side = SIDE_A if la > lb else SIDE_B
            else:
                sess.phase = "Spoiler"
            # Drop stragglers that never moved in a completed round.
            sess.side_a = [b for b in sess.side_a if len(b.history) >= sess.round_index]
            sess.side_b = [b for b in sess.side_b if len(b.history) >= sess.round_index]
            sess.log = lines[1:]
            sessions[sess.id] = sess

    restore_sessions()

    def get_session(sid: str) -> Session:
        if sid not in sessions:
            raise HTTPException(404, "unknown session")
        return sessions[sid]

    @app.post("/sessions", status_code=201)
    def post_sessions(body: CreateSession):
        try:
            sess = new_session(body)
        except (UsageError, DomainError) as exc:
            raise HTTPException(400, str(exc))
        sessions[sess.id] = sess
        persist(sess)
        return sess.to_json()

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        return get_session(sid).to_json()

    @app.post("/sessions/{sid}/move")
    def post_move(sid: str, body: MoveBody):
        sess = get_session(sid)
        with sess.lock:
            if sess.finished:
                raise HTTPException(409, "game is finished")
            if sess.turn_role() != sess.human_role:
                raise HTTPException(409, "not your turn")
            snap = sess.snapshot()
            try:
                if sess.human_role == "Spoiler":
                    _human_spoiler(sess, body)
                else:
                    _human_duplicator(sess, body)
                _run_engine(sess)
            except (UsageError, DomainError, KeyError, ValueError) as exc:
                sess.restore(snap)
                raise HTTPException(400, f"illegal move: {exc}")
            sess.history.append(snap)
            persist(sess)
            return sess.to_json()

    def _human_spoiler(sess: Session, body: MoveBody):
        if body.side not in (SIDE_A, SIDE_B):
            raise UsageError("side must be A or B")
        if not body.selections:
            raise UsageError("selections are required")
        boards = sess.boards(body.side)
        by_id = {sess.bid(b): b for b in boards}
        moves = {}
        for key, raw in body.selections.items():
            b = by_id[int(key)]
            moves[b] = _sel_of_json(raw, b.struct.n, sess.atom_count())
        missing = [bid for bid in by_id if by_id[bid] not in moves]
        if missing:
            raise UsageError(f"missing selections for boards {missing}")
        _apply_spoiler(sess, body.side, moves)

    def _human_duplicator(sess: Session, body: MoveBody):
        if not body.replacements:
            raise UsageError("replacements are required")
        side = SIDE_A if sess.pending_side == SIDE_B else SIDE_B
        boards = sess.boards(side)
        by_id = {sess.bid(b): b for b in boards}
        out, parents = [], []
        total = sum(len(v) for v in body.replacements.values())
        if total > UI_BOARD_CAP:
            raise UsageError(f"at most {UI_BOARD_CAP} boards")
        for key, raws in body.replacements.items():
            base = by_id[int(key)]
            if not raws:
                raise UsageError("each board needs at least one selection")
            for raw in raws:
                sel = _sel_of_json(raw, base.struct.n, sess.atom_count())
                out.append(extend(base, sel, atoms_allowed=sess.atoms))
                parents.append(base)
        if set(body.replacements) != set(map(str, by_id)):
            raise UsageError("every board needs a replacement list")
        # First copy per base keeps its id; extras get fresh ids.
        seen = set()
        for child, base in zip(out, parents):
            pid = sess.bid(base)
            if pid not in seen:
                seen.add(pid)
                sess.board_ids[id(child)] = pid
        _apply_duplicator(sess, out, parents)

    @app.post("/sessions/{sid}/hint")
    def post_hint(sid: str):
        sess = get_session(sid)
        with sess.lock:
            if sess.finished:
                raise HTTPException(409, "game is finished")
            if sess.turn_role() != sess.human_role:
                raise HTTPException(409, "not your turn")
            budget = _engine_budget()
            try:
                if sess.human_role == "Spoiler":
                    verdict = ms_winner(_game_state(sess), budget)
                    losing = verdict.winner != "Spoiler"
                    if not losing and verdict.certificate:
                        mv = verdict.certificate.rounds[0]
                        sels = dict(mv.moves)
                        boards = sess.boards(mv.side)
                        return {
                            "losing": False,
                            "side": mv.side,
                            "selections": {
                                str(sess.bid(b)): _sel_to_json(sels.get(b.key, ("e", 0)))
                                for b in boards
                            },
                        }
                    side = SIDE_A
                    return {
                        "losing": True,
                        "side": side,
                        "selections": {
                            str(sess.bid(b)): 1 for b in sess.boards(side)
                        },
                    }
                side = SIDE_A if sess.pending_side == SIDE_B else SIDE_B
                expanded = _expand_capped(sess, side, budget)
                by_parent: dict[str, list] = {}
                originals = list(sess.boards(side))
                for child in expanded:
                    parent = next(
                        o
                        for o in originals
                        if child.history[: len(o.history)] == o.history
                        and child.struct == o.struct
                    )
                    by_parent.setdefault(str(sess.bid(parent)), []).append(
                        _sel_to_json(child.history[-1])
                    )
                # Oblivious play preserves any Duplicator win, so the hint
                # is losing exactly when the round's opening position was.
                def trim(b: Board) -> Board:
                    hist = b.history[:-1]
                    atoms_n = sum(
                        1 for i, s in enumerate(hist) if is_atom(s) and s not in hist[:i]
                    )
                    return Board(b.struct, hist, atoms_n)

                pre_moved = [trim(b) for b in sess.boards(sess.pending_side)]
                pre = (
                    (pre_moved, originals)
                    if sess.pending_side == SIDE_A
                    else (originals, pre_moved)
                )
                losing = False
                try:
                    losing = (
                        ms_winner(
                            game_state(
                                *pre,
                                sess.rounds - sess.round_index,
                                atoms=sess.atoms,
                            ),
                            budget,
                        ).winner
                        == "Spoiler"
                    )
                except UsageError:
                    pass
                return {"losing": losing, "replacements": by_parent}
            except BudgetExceeded:
                raise HTTPException(422, "hint budget exceeded")

    @app.post("/sessions/{sid}/undo")
    def post_undo(sid: str):
        sess = get_session(sid)
        with sess.lock:
            if not sess.history:
                raise HTTPException(409, "nothing to undo")
            sess.restore(sess.history.pop())
            persist(sess)
            return sess.to_json()

    return app
