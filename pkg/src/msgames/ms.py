"""Multi-structural game solver on two sets of boards.

The Duplicator is reduced away by the oblivious strategy: she copies every
board on her side and makes every possible selection, which is known to be
optimal for her.  That leaves a one-player search for Spoiler: each round
he picks a side (subject to per-round constraints), one selection per board
on that side, the other side expands to all extensions, and he wins iff no
cross pair of boards is partially isomorphic once the rounds run out.

Soundness levers used by the search, each of which only removes options
that are dominated or irrelevant:

* dead boards (no partially-isomorphic partner) are dropped — deadness is
  permanent, and Duplicator only needs one surviving pair;
* a selection that leaves a moving board with no partner at all dominates
  any other selection for that board (fewer surviving pairs, and a smaller
  board set is never worse for Spoiler);
* in the final round Spoiler's requirement decomposes per moving board:
  each board independently needs one selection whose signature no partner
  can replicate;
* states are memoized on the canonical keys of their alive boards.

A winning search leaves behind a per-state plan from which a round-by-round
certificate is assembled; `replay_certificate` re-checks a certificate with
none of the solver machinery (plain partial_iso over the full oblivious
expansion).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .budget import Budget
from .structures import (
    Board,
    Sel,
    UsageError,
    atom,
    elem,
    extend,
    is_atom,
    partial_iso,
)

SPOILER = "Spoiler"
DUPLICATOR = "Duplicator"

SIDE_A = "A"
SIDE_B = "B"
FREE = "*"


def _dedupe(boards) -> tuple:
    seen = {}
    for b in boards:
        seen.setdefault(b.key, b)
    return tuple(seen[k] for k in sorted(seen))


@dataclass(frozen=True)
class GameState:
    """Two deduplicated sets of boards plus round bookkeeping.

    `constraints` is a string over {A, B, *}, one character per upcoming
    round (shorter strings are padded with * on the right): A forces
    Spoiler's move onto side_a that round, B onto side_b.
    """

    side_a: tuple
    side_b: tuple
    rounds_left: int
    constraints: str = ""
    atoms: bool = False
    no_play_on_top: bool = False

    def __post_init__(self):
        if self.rounds_left < 0:
            raise UsageError("rounds_left must be >= 0")
        if not self.side_a or not self.side_b:
            raise UsageError("both sides must be non-empty")
        if len(self.constraints) > self.rounds_left:
            raise UsageError("more constraints than rounds")
        if any(c not in "AB*" for c in self.constraints):
            raise UsageError("constraints must be over {A, B, *}")
        boards = list(self.side_a) + list(self.side_b)
        vocab = boards[0].struct.vocabulary
        hist = len(boards[0].history)
        for b in boards:
            if b.struct.vocabulary != vocab:
                raise UsageError("all boards must share a vocabulary")
            if len(b.history) != hist:
                raise UsageError("all boards must have equal history length")
        object.__setattr__(self, "side_a", _dedupe(self.side_a))
        object.__setattr__(self, "side_b", _dedupe(self.side_b))

    def constraint_at(self, round_index: int) -> str:
        if round_index < len(self.constraints):
            return self.constraints[round_index]
        return FREE


def game_state(a: Sequence[Board], b: Sequence[Board], rounds: int, **kw) -> GameState:
    return GameState(tuple(a), tuple(b), rounds, **kw)


def prefix_constraints(prefix: str) -> str:
    """Translate a quantifier prefix (E/A) into side constraints.

    An existential quantifier forces Spoiler into side_a, a universal one
    into side_b.
    """
    if any(c not in "EA" for c in prefix):
        raise UsageError("prefix must be over {E, A}")
    return "".join(SIDE_A if c == "E" else SIDE_B for c in prefix)


@dataclass(frozen=True)
class RoundMove:
    side: str  # SIDE_A | SIDE_B
    moves: tuple  # sorted tuple of (CanonicalKey, Sel), alive boards only


@dataclass(frozen=True)
class SpoilerCertificate:
    rounds: tuple  # tuple of RoundMove


@dataclass
class MsVerdict:
    winner: str
    certificate: Optional[SpoilerCertificate] = None
    witness_pair: Optional[tuple] = None  # (Board, Board), rounds_left=0 only


def duplicator_expand(boards, atoms: bool = False) -> tuple:
    """Every single-selection extension of every board, deduplicated.

    Under atoms, extensions include every previously-introduced atom id and
    one fresh atom per board.
    """
    out = []
    for b in boards:
        for sel in _all_selections(b, atoms):
            out.append(extend(b, sel, atoms_allowed=atoms))
    return _dedupe(out)


def _all_selections(b: Board, atoms: bool):
    sels = [elem(i) for i in range(b.struct.n)]
    if atoms:
        sels += [atom(j) for j in range(b.atom_count + 1)]
    return sels


def alive_pairs(state: GameState) -> set:
    """Cross pairs (keyA, keyB) that are still partially isomorphic."""
    out = set()
    for a in state.side_a:
        for b in state.side_b:
            if partial_iso(a, b):
                out.add((a.key, b.key))
    return out


class _Engine:
    def __init__(self, atoms: bool, no_play_on_top: bool, budget: Budget):
        self.atoms = atoms
        self.no_top = no_play_on_top
        self.budget = budget
        self.boards: dict = {}  # key -> Board
        self._classes: dict = {}  # key -> tuple of (sel, child Board), key-deduped
        self._expand: dict = {}  # key -> tuple of child Boards (Duplicator side)
        self._extsigs: dict = {}  # key -> frozenset of child sigs
        self.memo: dict = {}  # state key -> bool
        self.plan: dict = {}  # state key -> (side, moves dict key->Sel)

    # -- per-board caches ---------------------------------------------------

    def _reg(self, b: Board) -> Board:
        return self.boards.setdefault(b.key, b)

    def spoiler_classes(self, b: Board):
        """Spoiler's candidate selections, deduplicated by successor key."""
        hit = self._classes.get(b.key)
        if hit is None:
            taken = {s[1] for s in b.history if not is_atom(s)}
            out = []
            seen = set()
            for sel in _all_selections(b, self.atoms):
                if self.no_top and not is_atom(sel) and sel[1] in taken:
                    continue
                child = self._reg(extend(b, sel, atoms_allowed=self.atoms))
                if child.key not in seen:
                    seen.add(child.key)
                    out.append((sel, child))
            hit = tuple(out)
            self._classes[b.key] = hit
        return hit

    def expand(self, b: Board):
        hit = self._expand.get(b.key)
        if hit is None:
            hit = tuple(
                self._reg(extend(b, sel, atoms_allowed=self.atoms))
                for sel in _all_selections(b, self.atoms)
            )
            self._expand[b.key] = hit
        return hit

    def extsigs(self, b: Board) -> frozenset:
        hit = self._extsigs.get(b.key)
        if hit is None:
            hit = frozenset(c.sig for c in self.expand(b))
            self._extsigs[b.key] = hit
        return hit

    # -- search -------------------------------------------------------------

    def win(self, side_a, side_b, rounds: int, cons: str) -> bool:
        """Spoiler-win value; sides are iterables of Boards."""
        by_sig: dict = {}
        for b in side_b:
            by_sig.setdefault(b.sig, []).append(b)
        alive_a = [a for a in side_a if a.sig in by_sig]
        sigs_a = {a.sig for a in alive_a}
        alive_b = [b for b in side_b if b.sig in sigs_a]
        if not alive_a:
            return True
        if rounds == 0:
            return False
        state = (
            frozenset(a.key for a in alive_a),
            frozenset(b.key for b in alive_b),
            rounds,
            cons,
        )
        hit = self.memo.get(state)
        if hit is not None:
            return hit
        self.budget.tick()
        want = cons[0] if cons else FREE
        tail = cons[1:] if cons else ""
        result = False
        for side in (SIDE_A, SIDE_B):
            if want != FREE and side != want:
                continue
            moving = alive_a if side == SIDE_A else alive_b
            other = alive_b if side == SIDE_A else alive_a
            if self.no_top and any(not self.spoiler_classes(m) for m in moving):
                continue  # a stuck board forces Spoiler onto the other side
            if rounds == 1:
                got = self._final_round(moving, other)
            else:
                got = self._interior_round(side, moving, other, rounds, tail)
            if got is not None:
                self.plan[state] = (side, got)
                result = True
                break
        self.memo[state] = result
        return result

    def _final_round(self, moving, other):
        """Per-board decomposition: each moving board independently needs a
        selection whose signature no alive partner can match."""
        moves = {}
        for m in moving:
            partners = [o for o in other if o.sig == m.sig]
            choice = None
            for sel, child in self.spoiler_classes(m):
                if all(child.sig not in self.extsigs(p) for p in partners):
                    choice = sel
                    break
            if choice is None:
                return None
            moves[m.key] = choice
        return moves

    def _interior_round(self, side, moving, other, rounds, tail):
        expanded = _dedupe(c for o in other for c in self.expand(o))
        exp_sigs = {c.sig for c in expanded}
        if rounds == 2:
            return self._round_two(side, moving, expanded, exp_sigs, tail)
        fixed_moves = {}
        undecided = []
        for m in moving:
            classes = self.spoiler_classes(m)
            dead_choice = next(
                ((sel, child) for sel, child in classes if child.sig not in exp_sigs),
                None,
            )
            if dead_choice is not None:
                # Leaves the board with no partner: dominates every other
                # selection for it (the board drops out of the game).
                fixed_moves[m.key] = dead_choice[0]
            else:
                undecided.append((m, classes))
        undecided.sort(key=lambda mc: len(mc[1]))

        def dfs(i, chosen):
            if i == len(undecided):
                succ_moving = tuple(chosen)
                sides = (
                    (succ_moving, expanded) if side == SIDE_A else (expanded, succ_moving)
                )
                if self.win(sides[0], sides[1], rounds - 1, tail):
                    return {}
                return None
            for sel, child in undecided[i][1]:
                sub = dfs(i + 1, chosen + [child])
                if sub is not None:
                    sub[undecided[i][0].key] = sel
                    return sub
            return None

        got = dfs(0, [])
        if got is None:
            return None
        got.update(fixed_moves)
        return got

    # -- two-rounds-left decomposition --------------------------------------
    #
    # With exactly two rounds to go, the value of each candidate successor is
    # itself a final-round question, and the product over per-board
    # selections untangles: winning the final round on the just-moved side
    # is a per-board condition (each board needs one selection whose
    # extension is dead or final-round killable versus the fixed expansion),
    # while winning it on the expanded side is antitone in the set of chosen
    # extensions and yields to a heavily pruned assignment search.

    def _kill_sel(self, b: Board, partners):
        """A selection whose signature no partner can replicate, or None."""
        for sel, child in self.spoiler_classes(b):
            if all(child.sig not in self.extsigs(p) for p in partners):
                return sel
        return None

    def _round_two(self, side, moving, expanded, exp_sigs, tail):
        other_side = SIDE_B if side == SIDE_A else SIDE_A
        final_want = tail[0] if tail else FREE
        class_lists = [(m, self.spoiler_classes(m)) for m in moving]
        by_sig: dict = {}
        for o in expanded:
            by_sig.setdefault(o.sig, []).append(o)

        if final_want in (FREE, side):
            got = self._round_two_same_side(side, class_lists, by_sig, exp_sigs, tail)
            if got is not None:
                return got
        if final_want in (FREE, other_side):
            got = self._round_two_flip_side(
                side, other_side, class_lists, expanded, by_sig, tail
            )
            if got is not None:
                return got
        return None

    def _succ_plan_key(self, side, children, expanded, tail):
        child_sigs = {c.sig for c in children}
        alive_children = frozenset(c.key for c in children if c.sig in {o.sig for o in expanded})
        alive_exp = frozenset(o.key for o in expanded if o.sig in child_sigs)
        if side == SIDE_A:
            return (alive_children, alive_exp, 1, tail)
        return (alive_exp, alive_children, 1, tail)

    def _round_two_same_side(self, side, class_lists, by_sig, exp_sigs, tail):
        moves = {}
        kill_moves = {}
        children = []
        for m, classes in class_lists:
            choice = None
            for sel, child in classes:
                if child.sig not in exp_sigs:
                    choice = (sel, child, None)
                    break
                kill = self._kill_sel(child, by_sig[child.sig])
                if kill is not None:
                    choice = (sel, child, kill)
                    break
            if choice is None:
                return None
            sel, child, kill = choice
            moves[m.key] = sel
            children.append(child)
            if kill is not None:
                kill_moves[child.key] = kill
        expanded = [o for bucket in by_sig.values() for o in bucket]
        succ_key = self._succ_plan_key(side, children, expanded, tail)
        self.plan.setdefault(succ_key, (side, kill_moves))
        return moves

    def _round_two_flip_side(self, side, other_side, class_lists, expanded, by_sig, tail):
        # Good replies of expanded board o against a chosen extension c:
        # selections of o whose signature c cannot match in the last round.
        good: dict = {}

        def good_replies(o: Board, c: Board):
            hit = good.get((o.key, c.key))
            if hit is None:
                ext = self.extsigs(c)
                hit = frozenset(
                    sel for sel, oc in self.spoiler_classes(o) if oc.sig not in ext
                )
                good[(o.key, c.key)] = hit
            return hit

        class_lists = sorted(class_lists, key=lambda mc: len(mc[1]))

        def dfs(i, feas):
            if i == len(class_lists):
                return {}
            m, classes = class_lists[i]
            for sel, child in classes:
                new_feas = feas
                dead_end = False
                for o in by_sig.get(child.sig, ()):
                    cur = new_feas.get(o.key)
                    if cur is None:
                        cur = good_replies(o, child)
                    else:
                        cur = cur & good_replies(o, child)
                    if not cur:
                        dead_end = True
                        break
                    new_feas = dict(new_feas)
                    new_feas[o.key] = cur
                if dead_end:
                    continue
                sub = dfs(i + 1, new_feas)
                if sub is not None:
                    sub[m.key] = (sel, child)
                    return sub
            return None

        got = dfs(0, {})
        if got is None:
            return None
        children = [child for _, child in got.values()]
        child_sigs = {c.sig for c in children}
        kill_moves = {}
        for o in expanded:
            if o.sig not in child_sigs:
                continue
            partners = [c for c in children if c.sig == o.sig]
            feas = None
            for c in partners:
                g = good_replies(o, c)
                feas = g if feas is None else feas & g
            kill_moves[o.key] = min(feas)
        succ_key = self._succ_plan_key(side, children, expanded, tail)
        self.plan.setdefault(succ_key, (other_side, kill_moves))
        return {mk: sel for mk, (sel, _child) in got.items()}

    # -- certificate extraction --------------------------------------------

    def extract(self, side_a, side_b, rounds: int, cons: str) -> SpoilerCertificate:
        out = []
        while True:
            by_sig: dict = {}
            for b in side_b:
                by_sig.setdefault(b.sig, []).append(b)
            alive_a = [a for a in side_a if a.sig in by_sig]
            sigs_a = {a.sig for a in alive_a}
            alive_b = [b for b in side_b if b.sig in sigs_a]
            if not alive_a:
                return SpoilerCertificate(tuple(out))
            state = (
                frozenset(a.key for a in alive_a),
                frozenset(b.key for b in alive_b),
                rounds,
                cons,
            )
            side, moves = self.plan[state]
            out.append(RoundMove(side, tuple(sorted(moves.items()))))
            moving = alive_a if side == SIDE_A else alive_b
            other = alive_b if side == SIDE_A else alive_a
            succ_moving = tuple(
                self._reg(extend(m, moves[m.key], atoms_allowed=self.atoms))
                for m in moving
            )
            succ_other = _dedupe(c for o in other for c in self.expand(o))
            side_a, side_b = (
                (succ_moving, succ_other) if side == SIDE_A else (succ_other, succ_moving)
            )
            rounds -= 1
            cons = cons[1:] if cons else ""


def ms_winner(state: GameState, budget: Optional[Budget] = None) -> MsVerdict:
    """Exact winner of the multi-structural game from this state."""
    budget = budget or Budget()
    if state.rounds_left == 0:
        pairs = alive_pairs(state)
        if pairs:
            ka, kb = min(pairs)
            wa = next(b for b in state.side_a if b.key == ka)
            wb = next(b for b in state.side_b if b.key == kb)
            return MsVerdict(DUPLICATOR, witness_pair=(wa, wb))
        return MsVerdict(SPOILER, certificate=SpoilerCertificate(()))
    eng = _Engine(state.atoms, state.no_play_on_top, budget)
    side_a = tuple(eng._reg(b) for b in state.side_a)
    side_b = tuple(eng._reg(b) for b in state.side_b)
    cons = state.constraints
    if eng.win(side_a, side_b, state.rounds_left, cons):
        cert = eng.extract(side_a, side_b, state.rounds_left, cons)
        return MsVerdict(SPOILER, certificate=cert)
    return MsVerdict(DUPLICATOR)


# ---------------------------------------------------------------------------
# Independent certificate replay.
# ---------------------------------------------------------------------------


def _legal(b: Board, sel: Sel, atoms: bool, no_top: bool) -> bool:
    if is_atom(sel):
        return atoms and sel[1] <= b.atom_count
    if not (0 <= sel[1] < b.struct.n):
        return False
    if no_top and sel[1] in {s[1] for s in b.history if not is_atom(s)}:
        return False
    return True


def replay_certificate(state: GameState, cert: SpoilerCertificate) -> bool:
    """Re-check a certificate against the full oblivious Duplicator.

    Uses only extend/partial_iso — none of the solver's pruning or caches.
    Boards absent from a round's move map (dead ones) get the first legal
    selection, which cannot matter: a dead pair stays dead.
    """
    side_a, side_b = replay_boards(state, cert)
    return not any(partial_iso(a, b) for a in side_a for b in side_b)


def replay_boards(state: GameState, cert: SpoilerCertificate):
    """Play a certificate out and return the two leaf board lists.

    Same move rules as replay_certificate; sentence synthesis consumes the
    leaves directly.
    """
    if not isinstance(cert, SpoilerCertificate):
        raise UsageError("not a certificate")
    if len(cert.rounds) > state.rounds_left:
        raise UsageError("certificate has more rounds than the state allows")
    side_a, side_b = list(state.side_a), list(state.side_b)
    for rnd_index, rnd in enumerate(cert.rounds):
        if rnd.side not in (SIDE_A, SIDE_B):
            raise UsageError("bad side in certificate")
        want = state.constraint_at(rnd_index)
        if want != FREE and rnd.side != want:
            raise UsageError("certificate violates side constraints")
        moves = dict(rnd.moves)
        moving = side_a if rnd.side == SIDE_A else side_b
        other = side_b if rnd.side == SIDE_A else side_a
        new_moving = []
        for b in moving:
            sel = moves.get(b.key)
            if sel is None:
                sel = next(
                    (
                        s
                        for s in _all_selections(b, state.atoms)
                        if _legal(b, s, state.atoms, state.no_play_on_top)
                    ),
                    None,
                )
                if sel is None:
                    raise UsageError("board has no legal selection")
            elif not _legal(b, sel, state.atoms, state.no_play_on_top):
                raise UsageError(f"illegal selection {sel} in certificate")
            new_moving.append(extend(b, sel, atoms_allowed=state.atoms))
        new_other = list(duplicator_expand(other, atoms=state.atoms))
        if rnd.side == SIDE_A:
            side_a, side_b = new_moving, new_other
        else:
            side_a, side_b = new_other, new_moving
    return side_a, side_b
