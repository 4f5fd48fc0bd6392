"""Synthesis of a distinguishing sentence from a Spoiler certificate.

A winning Spoiler certificate for (sideA, sideB, r) converts into a prenex
sentence with exactly r quantifiers: quantifier k is existential when
Spoiler's round-k move was on side A and universal when it was on side B,
and the matrix is a disjunction of the complete atomic types of the leaf
side-A boards.  Every side-A structure satisfies the sentence (its own leaf
provides the witnesses) and every side-B structure refutes it (all of its
extensions appear among the leaf side-B boards, and a Spoiler win means
none of them shares an atomic type with a side-A leaf).

The matrix speaks only about order, equality, and atom-hood, so synthesis
is restricted to structures whose relations are (at most) a linear-order
style `<`; constants are allowed when every structure on both sides
interprets the same constant names.
"""

from __future__ import annotations

from .ms import SIDE_A, GameState, SpoilerCertificate, replay_boards, replay_certificate
from .sentences import (
    And,
    AtomModel,
    AtomPred,
    Eq,
    Exists,
    Forall,
    Less,
    Node,
    Not,
    Or,
    evaluate,
)
from .structures import Board, UsageError, is_atom


class SynthesisError(RuntimeError):
    """The synthesized sentence failed its own verification."""


def _atomic_type(board: Board, rounds: int, atoms: bool) -> Node:
    """Complete atomic diagram of a leaf board over x1..xr plus constants."""
    vals = {f"x{i + 1}": v for i, v in enumerate(board.history)}
    for name in sorted(board.struct.constants):
        vals[name] = ("e", board.struct.constants[name])
    names = sorted(vals)
    less = board.struct.relations.get("<", frozenset())

    def below(u, v):
        return not is_atom(u) and not is_atom(v) and (u[1], v[1]) in less

    literals = []
    for i, s in enumerate(names):
        for t in names[i + 1 :]:
            lit: Node = Eq(s, t)
            literals.append(lit if vals[s] == vals[t] else Not(lit))
    for s in names:
        for t in names:
            if s != t:
                lit = Less(s, t)
                literals.append(lit if below(vals[s], vals[t]) else Not(lit))
    if atoms:
        for s in names:
            lit = AtomPred(s)
            literals.append(lit if is_atom(vals[s]) else Not(lit))
    return And(*literals)


def synthesize(cert: SpoilerCertificate, state: GameState) -> Node:
    """Build and verify a sentence separating state.side_a from state.side_b."""
    if not isinstance(cert, SpoilerCertificate):
        raise UsageError("not a certificate")
    boards = state.side_a + state.side_b
    const_names = None
    for b in boards:
        if b.history or b.atom_count:
            raise UsageError("synthesis requires fresh boards (empty histories)")
        extra = set(b.struct.relations) - {"<"}
        if extra:
            raise UsageError(f"synthesis only speaks order/equality; cannot express {sorted(extra)}")
        names = frozenset(b.struct.constants)
        if const_names is None:
            const_names = names
        elif names != const_names:
            raise UsageError("all structures must interpret the same constant names")
    if not replay_certificate(state, cert):
        raise UsageError("certificate does not witness a Spoiler win")

    leaf_a, _ = replay_boards(state, cert)
    rounds = len(cert.rounds)
    disjuncts = []
    seen = set()
    for b in leaf_a:
        d = _atomic_type(b, rounds, state.atoms)
        if d not in seen:
            seen.add(d)
            disjuncts.append(d)
    body: Node = disjuncts[0] if len(disjuncts) == 1 else Or(*disjuncts)
    for k, rnd in reversed(list(enumerate(cert.rounds))):
        quant = Exists if rnd.side == SIDE_A else Forall
        body = quant(f"x{k + 1}", body)

    for b in state.side_a:
        model = AtomModel(b.struct, rounds) if state.atoms else b.struct
        if not evaluate(body, model):
            raise SynthesisError(f"sentence is false on a side-A structure: {b.struct!r}")
    for b in state.side_b:
        model = AtomModel(b.struct, rounds) if state.atoms else b.struct
        if evaluate(body, model):
            raise SynthesisError(f"sentence is true on a side-B structure: {b.struct!r}")
    return body
