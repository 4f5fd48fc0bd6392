"""Finite relational structures, labeled game boards, and canonical forms.

Elements are 0-indexed internally; user-facing I/O (CLI, traces, the web
service) is 1-indexed.  A Board is a structure plus the sequence of
selections made on it so far, one per elapsed round; selections are either
structure elements or atoms (extra pairwise-unrelated labeled elements used
by the atoms game variant).
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Optional, Sequence


class DomainError(ValueError):
    """A constructor argument is outside the permitted domain."""


class UsageError(ValueError):
    """An operation was invoked on incompatible or malformed arguments."""


# A selection is ('e', element_index) or ('a', atom_id).
Sel = tuple

ELEM = "e"
ATOM = "a"


def elem(i: int) -> Sel:
    return (ELEM, i)


def atom(j: int) -> Sel:
    return (ATOM, j)


def is_atom(sel: Sel) -> bool:
    return sel[0] == ATOM


class Vocabulary:
    """Relation names with arities, constant names, and an atom-predicate flag."""

    def __init__(
        self,
        relations: Iterable[tuple[str, int]] = (),
        constants: Iterable[str] = (),
        has_atom_pred: bool = False,
    ):
        self.relations = tuple(sorted(relations))
        self.constants = tuple(sorted(constants))
        self.has_atom_pred = bool(has_atom_pred)
        names = [n for n, _ in self.relations] + list(self.constants)
        if len(set(names)) != len(names):
            raise DomainError("vocabulary names must be unique")
        for name, arity in self.relations:
            if arity < 1:
                raise DomainError(f"relation {name!r} must have arity >= 1")

    def __eq__(self, other):
        return (
            isinstance(other, Vocabulary)
            and self.relations == other.relations
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash((self.relations, self.constants))

    def __repr__(self):
        return f"Vocabulary({self.relations!r}, {self.constants!r})"


LINEAR_ORDER_VOCAB = Vocabulary(relations=[("<", 2)])


class Structure:
    """A finite relational structure: universe {0..n-1}, relations, constants."""

    def __init__(
        self,
        n: int,
        relations: Mapping[str, Iterable[tuple[int, ...]]],
        constants: Optional[Mapping[str, int]] = None,
    ):
        if n < 1:
            raise DomainError("universe must be non-empty")
        self.n = n
        self.relations = {
            name: frozenset(tuple(t) for t in tuples)
            for name, tuples in relations.items()
        }
        self.constants = dict(constants or {})
        for name, tuples in self.relations.items():
            for t in tuples:
                if any(not (0 <= i < n) for i in t):
                    raise DomainError(f"tuple {t} of {name!r} out of range")
        for name, i in self.constants.items():
            if not (0 <= i < n):
                raise DomainError(f"constant {name!r}={i} out of range")
        arities = {}
        for name, tuples in self.relations.items():
            lens = {len(t) for t in tuples}
            if len(lens) > 1:
                raise DomainError(f"mixed arities in relation {name!r}")
            arities[name] = lens.pop() if lens else 2
        self.vocabulary = Vocabulary(
            relations=[(name, arities[name]) for name in self.relations],
            constants=self.constants.keys(),
        )
        self._rel_items = tuple(
            (name, self.relations[name]) for name in sorted(self.relations)
        )
        self._const_items = tuple(sorted(self.constants.items()))
        self._hash = hash((self.n, tuple((k, frozenset(v)) for k, v in self._rel_items), self._const_items))
        # Fast-path flag: a constant-free linear order under "<".
        self.is_linear_order = (
            not self.constants
            and set(self.relations) == {"<"}
            and self.relations["<"]
            == frozenset((i, j) for i in range(n) for j in range(n) if i < j)
        ) or (not self.constants and set(self.relations) == {"<"} and n == 1 and not self.relations["<"])

    def __eq__(self, other):
        return (
            isinstance(other, Structure)
            and self.n == other.n
            and self.relations == other.relations
            and self.constants == other.constants
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.is_linear_order:
            return f"lo:{self.n}"
        return f"Structure(n={self.n}, relations={dict(self.relations)!r}, constants={self.constants!r})"


def make_linear_order(n: int) -> Structure:
    """The linear order on n elements over {<}."""
    if n < 1:
        raise DomainError("linear order must have at least one element")
    return Structure(n, {"<": [(i, j) for i in range(n) for j in range(n) if i < j]})


class Board:
    """A structure labeled with the selection made in each elapsed round.

    atom_count is the number of distinct atoms introduced on this board so
    far; atom ids are assigned in first-use order with no gaps.
    """

    __slots__ = ("struct", "history", "atom_count", "_sig", "_key")

    def __init__(self, struct: Structure, history: Sequence[Sel] = (), atom_count: int = 0):
        self.struct = struct
        self.history = tuple(history)
        self.atom_count = atom_count
        seen_atoms = 0
        for sel in self.history:
            kind, idx = sel
            if kind == ELEM:
                if not (0 <= idx < struct.n):
                    raise DomainError(f"selection {sel} out of range")
            elif kind == ATOM:
                if idx > seen_atoms:
                    raise DomainError("atom ids must be introduced in order without gaps")
                if idx == seen_atoms:
                    seen_atoms += 1
            else:
                raise DomainError(f"bad selection {sel!r}")
        if seen_atoms != atom_count:
            raise DomainError("atom_count does not match history")
        self._sig = None
        self._key = None

    def __eq__(self, other):
        return (
            isinstance(other, Board)
            and self.struct == other.struct
            and self.history == other.history
        )

    def __hash__(self):
        return hash((self.struct, self.history))

    def __repr__(self):
        return f"Board({self.struct!r}, {list(self.history)!r})"

    @property
    def rounds(self) -> int:
        return len(self.history)

    @property
    def sig(self):
        """Atomic type of the selections plus constants; see signature()."""
        if self._sig is None:
            self._sig = signature(self)
        return self._sig

    @property
    def key(self):
        if self._key is None:
            self._key = canonical_key(self)
        return self._key


def board(struct: Structure, positions: Sequence[int] = ()) -> Board:
    """Convenience constructor: a board whose history is element selections."""
    return Board(struct, [elem(p) for p in positions])


def extend(b: Board, sel: Sel, atoms_allowed: bool = False) -> Board:
    """Lengthen a board's history by one selection."""
    kind, idx = sel
    if kind == ELEM:
        if not (0 <= idx < b.struct.n):
            raise DomainError(f"element {idx} out of range for universe of {b.struct.n}")
        return Board(b.struct, b.history + (sel,), b.atom_count)
    if kind == ATOM:
        if not atoms_allowed:
            raise UsageError("atom selection in a game without atoms")
        if idx > b.atom_count:
            raise DomainError(f"fresh atom id must be {b.atom_count}, got {idx}")
        new_count = b.atom_count + 1 if idx == b.atom_count else b.atom_count
        return Board(b.struct, b.history + (sel,), new_count)
    raise DomainError(f"bad selection {sel!r}")


def signature(b: Board):
    """The atomic type of a board's selections and constants.

    Two boards over the same vocabulary with equal history length are
    partially isomorphic iff their signatures are equal: the signature
    records, per history index, whether an element or which atom was picked;
    the equality pattern among all selections and constants; and exactly
    which relation tuples hold on the selected/constant elements.
    """
    s = b.struct
    terms: list = list(b.history)
    for name, value in s._const_items:
        terms.append((ELEM, value))
    m = len(terms)
    tags = tuple(
        (ATOM, t[1]) if t[0] == ATOM else ELEM for t in terms
    )
    # Equality pattern: index of the first term with the same denotation.
    eq = []
    for i, t in enumerate(terms):
        rep = i
        for j in range(i):
            if terms[j] == t:
                rep = j
                break
        eq.append(rep)
    elem_idx = [i for i, t in enumerate(terms) if t[0] == ELEM]
    rel_part = []
    for name, tuples in s._rel_items:
        arity = len(next(iter(tuples))) if tuples else 2
        holds = []
        for combo in itertools.product(elem_idx, repeat=arity):
            if tuple(terms[i][1] for i in combo) in tuples:
                holds.append(combo)
        rel_part.append((name, tuple(holds)))
    return (tags, tuple(eq), tuple(rel_part))


def partial_iso(a: Board, b: Board) -> bool:
    """Whether the round-indexed correspondence plus constants is a partial isomorphism.

    An Atom(j) selection matches only Atom(j) on the other side, never a
    structure element.
    """
    if a.struct.vocabulary != b.struct.vocabulary:
        raise UsageError("boards must share a vocabulary")
    if len(a.history) != len(b.history):
        raise UsageError("boards must have equal history length")
    return a.sig == b.sig


def _invariant_colors(s: Structure, history: Sequence[Sel]) -> list:
    """Stable vertex coloring refined from degrees, constants and selections."""
    colors = []
    for v in range(s.n):
        consts = tuple(name for name, val in s._const_items if val == v)
        rounds = tuple(i for i, sel in enumerate(history) if sel == (ELEM, v))
        degs = []
        for name, tuples in s._rel_items:
            for pos in range(len(next(iter(tuples))) if tuples else 0):
                degs.append(sum(1 for t in tuples if t[pos] == v))
        colors.append((consts, rounds, tuple(degs)))
    # Refine by neighborhood multisets until stable.
    cur = colors
    for _ in range(s.n):
        nxt = []
        for v in range(s.n):
            nbhd = []
            for name, tuples in s._rel_items:
                mult = sorted(
                    tuple(cur[w] for w in t) for t in tuples if v in t
                )
                nbhd.append(tuple(mult))
            nxt.append((cur[v], tuple(nbhd)))
        # Re-rank to keep color values small and hashable.
        ranking = {c: i for i, c in enumerate(sorted(set(nxt)))}
        nxt = [ranking[c] for c in nxt]
        if len(set(nxt)) == len(set(cur)) and _partition(nxt) == _partition(cur):
            break
        cur = nxt
    return cur


def _partition(colors) -> frozenset:
    cells: dict = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return frozenset(tuple(vs) for vs in cells.values())


def _serialize(s: Structure, history: Sequence[Sel], perm: Sequence[int]):
    """Serialization of the board under a relabeling of structure elements."""
    rels = tuple(
        (name, tuple(sorted(tuple(perm[i] for i in t) for t in tuples)))
        for name, tuples in s._rel_items
    )
    consts = tuple((name, perm[v]) for name, v in s._const_items)
    hist = tuple(
        (ELEM, perm[sel[1]]) if sel[0] == ELEM else sel for sel in history
    )
    return (s.n, rels, consts, hist)


def canonical_key(b: Board):
    """An opaque value equal across boards exactly when they are isomorphic
    as labeled structures (constants preserved, round-i selection to round-i
    selection, atom id j to atom id j)."""
    s = b.struct
    if s.is_linear_order:
        # Linear orders are rigid: the identity is the only automorphism.
        return ("lo", s.n, b.history)
    colors = _invariant_colors(s, b.history)
    cells: dict = {}
    for v in range(s.n):
        cells.setdefault(colors[v], []).append(v)
    ordered_cells = [cells[c] for c in sorted(cells)]
    best = None
    # Permutations must respect the stable coloring; enumerate within cells.
    for perm_parts in itertools.product(
        *(itertools.permutations(cell) for cell in ordered_cells)
    ):
        perm = [0] * s.n
        target = 0
        for part in perm_parts:
            for v in part:
                perm[v] = target
                target += 1
        cand = _serialize(s, b.history, perm)
        if best is None or cand < best:
            best = cand
    return ("gen",) + best
