"""Scripted strategies and the harnesses that check them.

Spoiler scripts are played against the oblivious Duplicator (every possible
reply via copies), so a run is a single deterministic playout.  Duplicator
scripts are deterministic bounded-copy reply rules; certifying one means
enumerating every legal Spoiler play sequence against it and showing some
alive pair always survives.  Certification success is checked with a sound
per-board shortcut on the final round (a board that cannot be killed while
its own partner replies are in play keeps Duplicator alive no matter what
happens elsewhere); when the shortcut does not apply, the harness falls
back to full enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest
from typing import Callable, Optional

from .budget import Budget
from .ms import (
    SIDE_A,
    SIDE_B,
    GameState,
    _all_selections,
    _legal,
    alive_pairs,
    game_state,
)
from .structures import (
    Board,
    Sel,
    UsageError,
    atom,
    board,
    elem,
    extend,
    is_atom,
    make_linear_order,
    partial_iso,
)


class ScriptDefect(RuntimeError):
    """A script returned an illegal or out-of-bounds move."""


@dataclass(frozen=True)
class SpoilerScript:
    name: str
    mover: Callable  # (GameState) -> (side, {board_key: Sel})


@dataclass(frozen=True)
class DuplicatorScript:
    name: str
    bound: int
    replier: Callable  # (GameState, side, moves_by_key, Board) -> tuple[Sel, ...]


@dataclass(frozen=True)
class RunResult:
    spoiler_won: bool
    trace: str


@dataclass(frozen=True)
class Certification:
    certified: bool
    refutation: Optional[str]
    nodes: int


def _sel_text(sel: Sel) -> str:
    kind, idx = sel
    return f"a{idx + 1}" if kind == "a" else str(idx + 1)


def _trace_line(rnd: int, side: str, board_id: int, sel: Sel) -> str:
    return f"{rnd},{side},{board_id},{_sel_text(sel)}"


def _ordered_selections(b: Board, atoms: bool, no_play_on_top: bool):
    """Legal selections, elements ordered center-outward, atoms last."""
    sels = [s for s in _all_selections(b, atoms) if _legal(b, s, atoms, no_play_on_top)]
    mid = (b.struct.n - 1) / 2

    def rank(s):
        if is_atom(s):
            return (1, s[1])
        return (0, abs(s[1] - mid), s[1])

    return sorted(sels, key=rank)


def _default_sel(b: Board, state: GameState) -> Sel:
    sels = _ordered_selections(b, state.atoms, state.no_play_on_top)
    if not sels:
        raise ScriptDefect(f"board {b.key} has no legal selection")
    return sels[0]


# ---------------------------------------------------------------------------
# run_spoiler: script vs the oblivious Duplicator.
# ---------------------------------------------------------------------------


def run_spoiler(script: SpoilerScript, state: GameState, budget: Optional[Budget] = None) -> RunResult:
    """Play a Spoiler script against full oblivious expansion."""
    budget = budget or Budget()
    lines = []
    next_id = [1]
    ids_a = {}
    ids_b = {}
    side_a, side_b = list(state.side_a), list(state.side_b)
    for b in side_a:
        ids_a[id(b)] = next_id[0]
        next_id[0] += 1
    for b in side_b:
        ids_b[id(b)] = next_id[0]
        next_id[0] += 1

    cur = state
    total = state.rounds_left
    for rnd in range(1, total + 1):
        budget.tick()
        side, moves = script.mover(cur)
        if side not in (SIDE_A, SIDE_B):
            raise ScriptDefect(f"{script.name}: bad side {side!r}")
        want = cur.constraint_at(0)
        if want != "*" and side != want:
            raise ScriptDefect(f"{script.name}: side {side} violates constraint {want}")
        moving, ids_m = (side_a, ids_a) if side == SIDE_A else (side_b, ids_b)
        other, ids_o = (side_b, ids_b) if side == SIDE_A else (side_a, ids_a)
        new_moving = []
        for b in moving:
            sel = moves.get(b.key)
            if sel is None:
                sel = _default_sel(b, cur)
            if not _legal(b, sel, cur.atoms, cur.no_play_on_top):
                raise ScriptDefect(f"{script.name}: illegal selection {sel} on {b.key}")
            child = extend(b, sel, atoms_allowed=cur.atoms)
            lines.append(_trace_line(rnd, side, ids_m[id(b)], sel))
            ids_m[id(child)] = ids_m[id(b)]
            new_moving.append(child)
        new_other = []
        for b in other:
            for sel in _ordered_selections(b, cur.atoms, False):
                child = extend(b, sel, atoms_allowed=cur.atoms)
                ids_o[id(child)] = next_id[0]
                lines.append(_trace_line(rnd, "B" if side == SIDE_A else "A", next_id[0], sel))
                next_id[0] += 1
                new_other.append(child)
        if side == SIDE_A:
            side_a, side_b = new_moving, new_other
        else:
            side_a, side_b = new_other, new_moving
        cur = GameState(
            tuple(side_a),
            tuple(side_b),
            cur.rounds_left - 1,
            cur.constraints[1:],
            cur.atoms,
            cur.no_play_on_top,
        )
        # GameState dedupes; keep the raw lists for ids but play on from the
        # raw boards to keep trace ids stable.
        side_a, side_b = list(side_a), list(side_b)

    won = not any(partial_iso(a, b) for a in side_a for b in side_b)
    return RunResult(won, "\n".join(lines))


# ---------------------------------------------------------------------------
# certify_duplicator: exhaustive Spoiler vs a deterministic bounded script.
# ---------------------------------------------------------------------------


def _script_replies(script, state, side, moves, original):
    replies = script.replier(state, side, moves, original)
    if not replies:
        replies = (_default_sel(original, state),)
    if len(replies) > script.bound:
        raise ScriptDefect(f"{script.name}: {len(replies)} replies exceeds bound {script.bound}")
    out = []
    for sel in replies:
        if not _legal(original, sel, state.atoms, False):
            raise ScriptDefect(f"{script.name}: illegal reply {sel} on {original.key}")
        out.append(extend(original, sel, atoms_allowed=state.atoms))
    return out


def _spoiler_maps(boards, state):
    """Every Spoiler selection map over the side, deduped per board."""
    per_board = []
    for b in boards:
        sels = _ordered_selections(b, state.atoms, state.no_play_on_top)
        seen = {}
        for s in sels:
            k = extend(b, s, atoms_allowed=state.atoms).key
            if k not in seen:
                seen[k] = s
        per_board.append(list(seen.values()))
    idx = [0] * len(per_board)
    while True:
        yield {boards[i].key: per_board[i][idx[i]] for i in range(len(boards))}
        i = len(per_board) - 1
        while i >= 0:
            idx[i] += 1
            if idx[i] < len(per_board[i]):
                break
            idx[i] = 0
            i -= 1
        if i < 0:
            return


def certify_duplicator(
    script: DuplicatorScript, state: GameState, budget: Optional[Budget] = None
) -> Certification:
    budget = budget or Budget()
    memo = {}
    plan = {}
    nodes = [0]

    def allowed_sides(st):
        want = st.constraint_at(0)
        if want == "*":
            return (SIDE_B, SIDE_A)
        return (want,)

    def state_key(st):
        return (
            frozenset(b.key for b in st.side_a),
            frozenset(b.key for b in st.side_b),
            st.rounds_left,
            st.constraints,
        )

    def successor(st, side, moves):
        moving = st.side_a if side == SIDE_A else st.side_b
        other = st.side_b if side == SIDE_A else st.side_a
        new_moving = tuple(extend(b, moves[b.key], atoms_allowed=st.atoms) for b in moving)
        new_other = []
        for o in other:
            new_other.extend(_script_replies(script, st, side, moves, o))
        new_other = tuple(new_other)
        if side == SIDE_A:
            a, b = new_moving, new_other
        else:
            a, b = new_other, new_moving
        return GameState(a, b, st.rounds_left - 1, st.constraints[1:], st.atoms, st.no_play_on_top)

    def final_round_spoiler_wins(st, side):
        """Final round only.  First a sound per-board shortcut: if some moved
        board cannot be killed even counting only its own partners' replies,
        Duplicator survives every map.  Otherwise assemble the per-board
        killing selections and verify the full map (cross-partner pairs
        included), falling back to exhaustion if that map fails."""
        moving = st.side_a if side == SIDE_A else st.side_b
        other = st.side_b if side == SIDE_A else st.side_a
        killing = {}
        for b in moving:
            kill_sel = None
            for sel in _ordered_selections(b, st.atoms, st.no_play_on_top):
                budget.tick()
                child = extend(b, sel, atoms_allowed=st.atoms)
                trial_moves = {x.key: (sel if x.key == b.key else _default_sel(x, st)) for x in moving}
                matched = False
                for o in other:
                    for y in _script_replies(script, st, side, trial_moves, o):
                        if partial_iso(child, y):
                            matched = True
                            break
                    if matched:
                        break
                if not matched:
                    kill_sel = sel
                    break
            if kill_sel is None:
                return False, None  # this board survives against any map
            killing[b.key] = kill_sel
        succ = successor(st, side, killing)
        if not any(partial_iso(a, b) for a in succ.side_a for b in succ.side_b):
            return True, killing
        for moves in _spoiler_maps(list(moving), st):
            budget.tick()
            succ = successor(st, side, moves)
            if not any(partial_iso(a, b) for a in succ.side_a for b in succ.side_b):
                return True, moves
        return False, None

    def spoiler_wins(st) -> bool:
        key = state_key(st)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes[0] += 1
        result = False
        for side in allowed_sides(st):
            moving = st.side_a if side == SIDE_A else st.side_b
            if not moving:
                continue
            if st.rounds_left == 1:
                won, moves = final_round_spoiler_wins(st, side)
                if won:
                    plan[key] = (side, moves)
                    result = True
                    break
                continue
            for moves in _spoiler_maps(list(moving), st):
                budget.tick()
                if spoiler_wins(successor(st, side, moves)):
                    plan[key] = (side, moves)
                    result = True
                    break
            if result:
                break
        memo[key] = result
        return result

    if spoiler_wins(state):
        # Rebuild the refuting line as a trace.
        lines = []
        st = state
        ids = {}
        nid = [1]
        for b in list(st.side_a) + list(st.side_b):
            ids[id(b)] = nid[0]
            nid[0] += 1
        rnd = 0
        while st.rounds_left > 0:
            key = state_key(st)
            if key not in plan:
                break
            side, moves = plan[key]
            rnd += 1
            moving = st.side_a if side == SIDE_A else st.side_b
            for b in moving:
                lines.append(_trace_line(rnd, side, ids.get(id(b), 0), moves[b.key]))
            nxt = successor(st, side, moves)
            # Map ids through: moved boards keep ids, replies get fresh ones.
            old_moved = list(moving)
            new_moved = list(nxt.side_a if side == SIDE_A else nxt.side_b)
            for ob, nb in zip(old_moved, new_moved):
                ids[id(nb)] = ids.get(id(ob), 0)
            reply_side = "B" if side == SIDE_A else "A"
            for nb in nxt.side_b if side == SIDE_A else nxt.side_a:
                if id(nb) not in ids:
                    ids[id(nb)] = nid[0]
                    h = nb.history
                    lines.append(_trace_line(rnd, reply_side, nid[0], h[-1]))
                    nid[0] += 1
            st = nxt
        return Certification(False, "\n".join(lines), nodes[0])
    return Certification(True, None, nodes[0])


# ---------------------------------------------------------------------------
# The pact reply: mirror on matched short sides, recursive gap matching.
# This is the reduction machinery: atoms answer like-labelled atoms,
# play-on-top answers the same round's point, and a fresh point is answered
# in the corresponding gap at the same distance from the nearer played end.
# An exact-centre move into a gap one element shorter splits into the two
# nearest replies (the two-board response of the even-size analysis).
# ---------------------------------------------------------------------------


def _element_rounds(b: Board):
    return [(i, s[1]) for i, s in enumerate(b.history) if not is_atom(s)]


def pact_replies(o: Board, x: Board, s: Sel, split: bool = True):
    """Candidate replies on o to a selection s on its partner x."""
    if is_atom(s):
        j = s[1]
        if j <= o.atom_count:
            return (atom(j),)
        return (atom(o.atom_count),)
    p = s[1]
    for i, q in enumerate(x.history):
        if q == s:
            return (o.history[i],)
    xs = _element_rounds(x)
    left = [(q, i) for i, q in xs if q < p]
    right = [(q, i) for i, q in xs if q > p]
    u, ui = max(left) if left else (-1, None)
    v, vi = min(right) if right else (x.struct.n, None)
    u2 = o.history[ui][1] if ui is not None else -1
    v2 = o.history[vi][1] if vi is not None else o.struct.n
    if v2 - u2 <= 1:
        return ()  # the corresponding gap is empty
    dl, dr = p - u, v - p
    lo_cand = u2 + dl if u2 + dl < v2 else v2 - 1
    hi_cand = v2 - dr if v2 - dr > u2 else u2 + 1
    if dl == dr and split and lo_cand != hi_cand:
        return (elem(hi_cand), elem(lo_cand))
    near = lo_cand if dl <= dr else hi_cand
    return (elem(near),)


def _pact_replier(state, side, moves, original):
    moved = state.side_a if side == SIDE_A else state.side_b
    tops, per_board = [], []
    for x in moved:
        s = moves[x.key]
        rs = list(pact_replies(original, x, s))
        # Mirror replies to a repeated point must survive the cap below,
        # otherwise an on-top probe goes unanswered on every child.
        if s in x.history:
            tops.extend(rs)
        else:
            per_board.append(rs)
    # Round-robin across moved boards so each board's primary reply beats
    # any board's secondary to the cap.
    interleaved = [r for tier in zip_longest(*per_board) for r in tier if r is not None]
    out = []
    seen = set()
    for r in tops + interleaved:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return tuple(out[:4])


def split_board_duplicator() -> DuplicatorScript:
    """Even-round atoms strategy: short-side matching with a first-round
    split into the two near-middle replies when Spoiler opens dead centre."""
    return DuplicatorScript("split_board_duplicator", 4, _pact_replier)


def reduction_duplicator() -> DuplicatorScript:
    """Pact play on boards whose matched first moves are already on the
    table; everything reduces to mirroring plus gap matching."""
    return DuplicatorScript("reduction_duplicator", 4, _pact_replier)


def plain2_duplicator() -> DuplicatorScript:
    return DuplicatorScript("plain2_duplicator", 4, _pact_replier)


def plain3_duplicator() -> DuplicatorScript:
    """Three-round plain strategy: ends answer ends, a middle opening on a
    size-4 board answers with every position, otherwise pact play."""

    def replier(state, side, moves, original):
        if not original.history:
            (x,) = [b for b in (state.side_a if side == SIDE_A else state.side_b)]
            s = moves[x.key]
            if not is_atom(s):
                p, n, n2 = s[1], x.struct.n, original.struct.n
                if p in (0, 1):
                    return (elem(p),)
                if p in (n - 1, n - 2):
                    return (elem(n2 - 1 - (n - 1 - p)),)
                if n2 == 4:
                    return tuple(elem(i) for i in range(4))
        return _pact_replier(state, side, moves, original)

    return DuplicatorScript("plain3_duplicator", 4, replier)


def naive_mirror_duplicator() -> DuplicatorScript:
    """The failed recursion of the ten-versus-nine analysis: mirror the
    opening move by position, mimic anything at or left of a board's first
    move, and play the three-round strategy obliviously on the right."""

    def replier(state, side, moves, original):
        moved = state.side_a if side == SIDE_A else state.side_b
        if not original.history:
            (x,) = list(moved)
            s = moves[x.key]
            p = min(s[1], original.struct.n - 1)
            return (elem(p),)
        first = original.history[0][1]
        out = []
        seen = set()
        for x in moved:
            s = moves[x.key]
            if is_atom(s):
                continue
            p = s[1]
            xf = x.history[0][1]
            if p <= xf:
                cand = (elem(min(p, first)),)
            elif len(original.history) == 1 and first + 1 <= original.struct.n - 1:
                # Opening of the sub-game on the right: reply with every
                # position right of the first move (the oblivious copies).
                cand = tuple(elem(i) for i in range(first + 1, original.struct.n))
            else:
                cand = pact_replies(original, x, s)
            for c in cand:
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return tuple(out[:4])

    return DuplicatorScript("naive_mirror_duplicator", 4, replier)


# ---------------------------------------------------------------------------
# Spoiler scripts.
# ---------------------------------------------------------------------------


def ten_v_nine_spoiler() -> SpoilerScript:
    """Four rounds on 10 versus 9: open at the centre of the small side,
    then middle of each long side, the reply table, and the gap punch."""

    def reply_rule(c, lo, hi, d):
        # c: our earlier centre move; [lo, hi]: active window; d: their move.
        if d < lo or d > hi or d == c:
            return c
        if abs(d - c) == 1:
            return c
        if d in (lo, hi):
            return d
        if abs(d - c) == 2:
            return c + (1 if d > c else -1)
        if d in (lo + 1, hi - 1):
            return lo if d == lo + 1 else hi
        return c

    def mover(state):
        rnd = 4 - state.rounds_left
        if rnd == 0:
            (b,) = state.side_b
            return SIDE_B, {b.key: elem(b.struct.n // 2)}
        if rnd == 1:
            moves = {}
            for b in state.side_a:
                d1 = b.history[0][1]
                n = b.struct.n
                left, right = d1, n - 1 - d1
                if right >= left:
                    moves[b.key] = elem(d1 + (right + 1) // 2)
                else:
                    moves[b.key] = elem(d1 - (left + 1) // 2)
            return SIDE_A, moves
        if rnd == 2:
            moves = {}
            for b in state.side_b:
                s1, d2 = b.history[0][1], b.history[1][1]
                moves[b.key] = elem(reply_rule(s1, 0, b.struct.n - 1, d2))
            return SIDE_B, moves
        moves = {}
        for b in state.side_a:
            d1, s2 = b.history[0][1], b.history[1][1]
            d3 = b.history[2][1] if not is_atom(b.history[2]) else s2
            moves[b.key] = _punch(b, d1, s2, d3, 0, b.struct.n - 1)
        return SIDE_A, moves

    return SpoilerScript("ten_v_nine_spoiler", mover)


def _punch(b: Board, d1, s2, d3, lo, hi) -> Sel:
    """Fourth-round break: inside the (d1, s2) gap normally, but beyond s2
    when Duplicator's third move already reached it."""
    played = {q[1] for q in b.history if not is_atom(q)}
    if s2 > d1:
        if d3 >= s2:
            cand = [i for i in range(s2 + 1, hi + 1) if i not in played]
        else:
            cand = [i for i in range(d1 + 1, s2) if i not in played]
        return elem(cand[0]) if cand else elem(s2)
    if s2 < d1:
        if d3 <= s2:
            cand = [i for i in range(lo, s2) if i not in played]
        else:
            cand = [i for i in range(s2 + 1, d1) if i not in played]
        return elem(cand[-1]) if cand else elem(s2)
    return elem(d1)


def middle_recursive_spoiler() -> SpoilerScript:
    """Five rounds on 21 versus 20, driven by the five-quantifier threshold
    sentence: Spoiler opens at the dead centre (the outer witness) and on
    each later round plays, per board, a verifying witness on the big side
    and a refuting one on the small side.  Any cross pair that stayed
    isomorphic would have to agree on the quantifier-free matrix, so none
    survive."""
    from .library import library
    from .sentences import Exists, _eval_naive

    phi = library("phi5")

    def mover(state):
        rnd = 5 - state.rounds_left
        node = phi
        for _ in range(rnd):
            node = node.body
        side = SIDE_A if isinstance(node, Exists) else SIDE_B
        want = isinstance(node, Exists)
        boards = state.side_a if side == SIDE_A else state.side_b
        moves = {}
        for b in boards:
            env = {f"x{i + 1}": q[1] for i, q in enumerate(b.history)}
            n = b.struct.n
            less = b.struct.relations["<"]
            pick = None
            for v in range(n):
                holds = _eval_naive(
                    node.body, {**env, node.var: v}, list(range(n)), less, {}
                )
                if holds == want:
                    pick = v
                    break
            moves[b.key] = elem(pick if pick is not None else b.history[0][1] if b.history else 0)
        return side, moves

    return SpoilerScript("middle_recursive_spoiler", mover)


# ---------------------------------------------------------------------------
# The classic-game wrapper: a Spoiler script for the two-board E-F game,
# checked against every Duplicator reply.
# ---------------------------------------------------------------------------


def run_ef_spoiler(script_name: str, a, b, rounds: int) -> RunResult:
    """Play the halving strategy for the E-F game on two linear orders and
    verify it beats every Duplicator reply.  Only the halving strategy is
    scripted; a is the larger order."""
    if script_name != "ef_appendixA_spoiler":
        raise UsageError(f"unknown E-F script {script_name!r}")
    lines = []

    def order_iso(ha, hb):
        if len(ha) != len(hb):
            return False
        for i in range(len(ha)):
            for j in range(len(ha)):
                if (ha[i] < ha[j]) != (hb[i] < hb[j]) or (ha[i] == ha[j]) != (hb[i] == hb[j]):
                    return False
        return True

    def spoiler_move(wa, wb):
        # wa, wb: inclusive windows (lo, hi) in a and b; play into the
        # bigger window per the halving rule.
        la = wa[1] - wa[0] + 1
        if la % 2 == 1:
            return wa[0] + la // 2
        return wa[0] + la // 2 - 1

    def wins(ha, hb, wa, wb, r, rnd):
        if not order_iso(ha, hb):
            return True
        if r == 0:
            return False
        s = spoiler_move(wa, wb)
        lines.append(_trace_line(rnd, "A", 1, elem(s)))
        for d in range(b.n):
            if wins_after(ha + (s,), hb + (d,), wa, wb, s, d, r - 1, rnd):
                continue
            return False
        return True

    def wins_after(ha, hb, wa, wb, s, d, r, rnd):
        if not order_iso(ha, hb):
            return True
        if r == 0:
            return False
        # Recurse into the side where b's window is strictly smaller.
        left_a = (wa[0], s - 1)
        right_a = (s + 1, wa[1])
        left_b = (wb[0], d - 1)
        right_b = (d + 1, wb[1])

        def size(w):
            return max(0, w[1] - w[0] + 1)

        if size(left_b) < size(left_a):
            return wins(ha, hb, left_a, left_b, r, rnd + 1)
        return wins(ha, hb, right_a, right_b, r, rnd + 1)

    won = wins((), (), (0, a.n - 1), (0, b.n - 1), rounds, 1)
    return RunResult(won, "\n".join(lines))


# ---------------------------------------------------------------------------
# Laddering: adjacent-pair certifications chained through ≡_r transitivity.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LadderReport:
    rounds: int
    sizes: tuple
    atoms: bool
    adjacent: tuple  # ((big, small, certified), ...)
    all_duplicator: bool


def ladder(
    script_maker: Callable[[], DuplicatorScript],
    sizes,
    rounds: int,
    atoms: bool = False,
    budget: Optional[Budget] = None,
) -> LadderReport:
    sizes = tuple(sorted(sizes))
    results = []
    ok = True
    for small, big in zip(sizes, sizes[1:]):
        state = game_state(
            (board(make_linear_order(big), ()),),
            (board(make_linear_order(small), ()),),
            rounds,
            atoms=atoms,
        )
        cert = certify_duplicator(script_maker(), state, budget)
        results.append((big, small, cert.certified))
        ok = ok and cert.certified
    if not ok:
        raise UsageError(
            "gap in adjacent certifications: " + repr([r for r in results if not r[2]])
        )
    return LadderReport(rounds, sizes, atoms, tuple(results), True)
