"""Classic two-board Ehrenfeucht-Fraisse game solver, plus the fixed-prefix
variant in which a quantifier sequence dictates which structure Spoiler
must play in each round ('E' -> first board, 'A' -> second board).

Two engines share the API: an exact interval-abstraction engine for
constant-free linear orders (positions inside a gap are summarized by the
gap's length capped at 2^rounds - 1, the classic threshold below which
linear orders of different sizes are r-round distinguishable), and a
generic memoized minimax for arbitrary structures.  The abstraction is
validated against the generic engine in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .budget import Budget
from .structures import (
    ATOM,
    Board,
    Sel,
    UsageError,
    elem,
    extend,
    partial_iso,
)

SPOILER = "Spoiler"
DUPLICATOR = "Duplicator"


@dataclass
class StrategyNode:
    """One Spoiler move with a branch per Duplicator reply.

    A reply mapping to None means the resulting pair is no longer partially
    isomorphic (a dead leaf).
    """

    side: str  # "A" or "B": which board Spoiler plays on
    selection: Sel
    replies: dict = field(default_factory=dict)  # Sel -> StrategyNode | None


@dataclass
class EfVerdict:
    winner: str
    witness: Optional[StrategyNode] = None
    already_dead: bool = False  # boards were not partially isomorphic at entry


def _validate(a: Board, b: Board, rounds: int) -> None:
    if rounds < 0:
        raise UsageError("rounds must be >= 0")
    if a.struct.vocabulary != b.struct.vocabulary:
        raise UsageError("boards must share a vocabulary")
    if len(a.history) != len(b.history):
        raise UsageError("boards must have equal history length")


def _is_plain_lo(b: Board) -> bool:
    return b.struct.is_linear_order and b.atom_count == 0


# ---------------------------------------------------------------------------
# Interval-abstraction engine for constant-free linear orders.
#
# A live position is summarized by the gap lengths around the selected
# slots on each board: ((gA_0, gB_0), ..., (gA_k, gB_k)) for k slots.  The
# slots themselves carry no further information; a move is either on top of
# slot i (the only live reply is the matching slot) or into gap i at some
# offset (live replies are offsets in the matching gap).
# ---------------------------------------------------------------------------


def _lo_state(a: Board, b: Board):
    """Gap-pair summary of a live pair of linear-order boards, or None if dead."""
    if a.sig != b.sig:
        return None
    pos_a = sorted({s[1] for s in a.history})
    pos_b = sorted({s[1] for s in b.history})
    return (_gaps(a.struct.n, pos_a), _gaps(b.struct.n, pos_b))


def _gaps(n: int, pos: list[int]) -> tuple[int, ...]:
    if not pos:
        return (n,)
    out = [pos[0]]
    for p, q in zip(pos, pos[1:]):
        out.append(q - p - 1)
    out.append(n - 1 - pos[-1])
    return tuple(out)


def _normalize(pairs, rounds: int):
    cap = (1 << rounds) - 1
    capped = tuple((min(ga, cap), min(gb, cap)) for ga, gb in pairs)
    return min(capped, capped[::-1])


def _lo_spoiler_wins(pairs, rounds: int, prefix: str, memo: dict, budget: Budget) -> bool:
    if rounds == 0:
        return False
    state = (_normalize(pairs, rounds), rounds, prefix)
    hit = memo.get(state)
    if hit is not None:
        return hit
    budget.tick()
    pairs = state[0]
    sides = ("A", "B") if not prefix else ("A",) if prefix[0] == "E" else ("B",)
    tail = prefix[1:] if prefix else ""
    result = False
    for side in sides:
        mover = 0 if side == "A" else 1
        other = 1 - mover
        # Play on top of an existing slot: the only live reply mirrors it.
        if len(pairs) > 1:
            if _lo_spoiler_wins(pairs, rounds - 1, tail, memo, budget):
                result = True
                break
        # Play inside a gap.
        for g, pair in enumerate(pairs):
            glen = pair[mover]
            olen = pair[other]
            if glen == 0:
                continue
            for off in range(glen):
                if olen == 0:
                    result = True  # no live reply at all
                    break
                wins_all = True
                for off2 in range(olen):
                    left = [off, off2] if mover == 0 else [off2, off]
                    right = [glen - off - 1, olen - off2 - 1] if mover == 0 else [
                        olen - off2 - 1,
                        glen - off - 1,
                    ]
                    succ = (
                        pairs[:g]
                        + (tuple(left), tuple(right))
                        + pairs[g + 1 :]
                    )
                    if not _lo_spoiler_wins(succ, rounds - 1, tail, memo, budget):
                        wins_all = False
                        break
                if wins_all:
                    result = True
                    break
            if result:
                break
        if result:
            break
    memo[state] = result
    return result


# ---------------------------------------------------------------------------
# Generic memoized minimax over concrete boards.
# ---------------------------------------------------------------------------


def _generic_spoiler_wins(a: Board, b: Board, rounds: int, prefix: str, memo: dict, budget: Budget) -> bool:
    if not partial_iso(a, b):
        return True
    if rounds == 0:
        return False
    key = (a.key, b.key, rounds, prefix)
    hit = memo.get(key)
    if hit is not None:
        return hit
    budget.tick()
    sides = ("A", "B") if not prefix else ("A",) if prefix[0] == "E" else ("B",)
    tail = prefix[1:] if prefix else ""
    result = False
    for side in sides:
        mover, other = (a, b) if side == "A" else (b, a)
        for i in range(mover.struct.n):
            m = extend(mover, elem(i))
            wins_all = True
            for j in range(other.struct.n):
                o = extend(other, elem(j))
                pair = (m, o) if side == "A" else (o, m)
                if not _generic_spoiler_wins(pair[0], pair[1], rounds - 1, tail, memo, budget):
                    wins_all = False
                    break
            if wins_all:
                result = True
                break
        if result:
            break
    memo[key] = result
    return result


def _build_witness(a: Board, b: Board, rounds: int, prefix: str, memo: dict, budget: Budget) -> Optional[StrategyNode]:
    """Extract a Spoiler strategy tree from a won position (concrete engine)."""
    if not partial_iso(a, b):
        return None
    sides = ("A", "B") if not prefix else ("A",) if prefix[0] == "E" else ("B",)
    tail = prefix[1:] if prefix else ""
    for side in sides:
        mover, other = (a, b) if side == "A" else (b, a)
        for i in range(mover.struct.n):
            m = extend(mover, elem(i))
            ok = True
            for j in range(other.struct.n):
                o = extend(other, elem(j))
                pair = (m, o) if side == "A" else (o, m)
                if not _generic_spoiler_wins(pair[0], pair[1], rounds - 1, tail, memo, budget):
                    ok = False
                    break
            if not ok:
                continue
            node = StrategyNode(side=side, selection=elem(i))
            for j in range(other.struct.n):
                o = extend(other, elem(j))
                pair = (m, o) if side == "A" else (o, m)
                if not partial_iso(pair[0], pair[1]):
                    node.replies[elem(j)] = None
                else:
                    node.replies[elem(j)] = _build_witness(
                        pair[0], pair[1], rounds - 1, tail, memo, budget
                    )
            return node
    raise AssertionError("witness requested for a position Spoiler does not win")


def _solve(a: Board, b: Board, rounds: int, prefix: str, budget: Optional[Budget], want_witness: bool) -> EfVerdict:
    _validate(a, b, rounds)
    if prefix:
        if len(prefix) != rounds or any(c not in "EA" for c in prefix):
            raise UsageError("prefix must be a string over {E, A} of length rounds")
    budget = budget or Budget()
    if not partial_iso(a, b):
        return EfVerdict(SPOILER, witness=None, already_dead=True)
    if _is_plain_lo(a) and _is_plain_lo(b) and not want_witness:
        state = _lo_state(a, b)
        wins = _lo_spoiler_wins(tuple(zip(*state)), rounds, prefix, {}, budget)
    else:
        memo: dict = {}
        wins = _generic_spoiler_wins(a, b, rounds, prefix, memo, budget)
        if wins and want_witness:
            witness = _build_witness(a, b, rounds, prefix, memo, budget)
            return EfVerdict(SPOILER, witness=witness)
    return EfVerdict(SPOILER if wins else DUPLICATOR)


def ef_winner(a: Board, b: Board, rounds: int, budget: Optional[Budget] = None, want_witness: bool = False) -> EfVerdict:
    """Exact winner of the r-round E-F game from this position.

    A Spoiler strategy tree is attached when want_witness is set (kept
    optional because full trees are large at campaign scale).
    """
    return _solve(a, b, rounds, "", budget, want_witness)


def ef_prefix_winner(a: Board, b: Board, prefix: str, budget: Optional[Budget] = None, want_witness: bool = False) -> EfVerdict:
    """Winner of the side-constrained E-F game for a quantifier sequence."""
    if not prefix:
        raise UsageError("prefix must be non-empty")
    return _solve(a, b, len(prefix), prefix, budget, want_witness)
