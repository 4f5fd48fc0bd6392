"""Certificate-to-sentence synthesis: examples, property suite, errors."""

import itertools

import pytest

from msgames.ms import (
    SIDE_A,
    GameState,
    RoundMove,
    SpoilerCertificate,
    game_state,
    ms_winner,
)
from msgames.sentences import And, AtomModel, Or, evaluate, quantifier_profile
from msgames.structures import Structure, UsageError, board, make_linear_order
from msgames.synthesis import SynthesisError, synthesize


def lo_state(sizes_a, sizes_b, rounds, **kw):
    a = tuple(board(make_linear_order(n), ()) for n in sizes_a)
    b = tuple(board(make_linear_order(n), ()) for n in sizes_b)
    return game_state(a, b, rounds, **kw)


def cert_prefix(cert):
    return "".join("E" if rm.side == SIDE_A else "A" for rm in cert.rounds)


def check(state, cert):
    """Synthesize and re-verify independently of synthesize's own checks."""
    s = synthesize(cert, state)
    p = quantifier_profile(s)
    rounds = len(cert.rounds)
    assert p.count == rounds
    assert p.prefix == cert_prefix(cert)
    for b in state.side_a:
        model = AtomModel(b.struct, rounds) if state.atoms else b.struct
        assert evaluate(s, model)
    for b in state.side_b:
        model = AtomModel(b.struct, rounds) if state.atoms else b.struct
        assert not evaluate(s, model)
    return s


def test_two_vs_one():
    state = lo_state([2], [1], 2)
    v = ms_winner(state)
    assert v.winner == "Spoiler"
    s = check(state, v.certificate)
    assert quantifier_profile(s).count <= 2


def test_four_vs_three():
    state = lo_state([4], [3], 3)
    v = ms_winner(state)
    assert v.winner == "Spoiler"
    check(state, v.certificate)


def test_zero_rounds_with_constants():
    # Already-distinguished constant-bearing structures: the sentence is a
    # quantifier-free diagram of the constants.
    a = Structure(2, {"<": {(0, 1)}}, constants={"c": 0, "d": 1})
    b = Structure(2, {"<": {(0, 1)}}, constants={"c": 1, "d": 0})
    state = GameState((board(a, ()),), (board(b, ()),), 0)
    v = ms_winner(state)
    assert v.winner == "Spoiler"
    s = check(state, SpoilerCertificate(()))
    assert quantifier_profile(s).count == 0
    assert isinstance(s, (And, Or))


def test_multi_board_sides():
    state = lo_state([4, 5], [2, 3], 3)
    v = ms_winner(state)
    assert v.winner == "Spoiler"
    s = check(state, v.certificate)
    # Matrix disjuncts are deduplicated.
    body = s
    while hasattr(body, "body"):
        body = body.body
    if isinstance(body, Or):
        assert len(set(body.parts)) == len(body.parts)


def test_atoms_game():
    state = lo_state([5], [4], 3, atoms=True)
    v = ms_winner(state)
    assert v.winner == "Spoiler"
    check(state, v.certificate)


def test_property_suite_plain():
    # Every Spoiler win at r <= 3, sizes <= 6 synthesizes soundly.
    wins = 0
    for r in (1, 2, 3):
        for n, m in itertools.product(range(1, 7), repeat=2):
            state = lo_state([n], [m], r)
            v = ms_winner(state)
            if v.winner == "Spoiler" and state.rounds_left > 0:
                check(state, v.certificate)
                wins += 1
    assert wins > 0


def test_property_suite_atoms():
    wins = 0
    for r in (2, 3):
        for n, m in itertools.product(range(1, 6), repeat=2):
            state = lo_state([n], [m], r, atoms=True)
            v = ms_winner(state)
            if v.winner == "Spoiler":
                check(state, v.certificate)
                wins += 1
    assert wins > 0


def test_property_suite_multi_board():
    for r in (2, 3):
        for sizes_a, sizes_b in [([2, 3], [1]), ([3, 4], [2, 3]), ([5], [3, 4])]:
            state = lo_state(sizes_a, sizes_b, r)
            v = ms_winner(state)
            if v.winner == "Spoiler":
                check(state, v.certificate)


def test_rejects_started_boards():
    a = board(make_linear_order(3), (1,))
    b = board(make_linear_order(2), (0,))
    state = GameState((a,), (b,), 1)
    v = ms_winner(state)
    if v.winner == "Spoiler":
        with pytest.raises(UsageError):
            synthesize(v.certificate, state)


def test_rejects_mismatched_constants():
    # Vocabulary agreement is enforced at state construction already.
    a = Structure(2, {"<": {(0, 1)}}, constants={"c": 0})
    b = Structure(2, {"<": {(0, 1)}})
    with pytest.raises(UsageError):
        GameState((board(a, ()),), (board(b, ()),), 0)


def test_rejects_foreign_relations():
    a = Structure(2, {"E": {(0, 0)}})
    b = Structure(2, {"E": set()})
    state = GameState((board(a, ()),), (board(b, ()),), 1)
    v = ms_winner(state)
    assert v.winner == "Spoiler"
    with pytest.raises(UsageError):
        synthesize(v.certificate, state)


def test_rejects_non_winning_certificate():
    state = lo_state([3], [3], 2)
    with pytest.raises(UsageError):
        synthesize(SpoilerCertificate(()), state)


def test_rejects_garbage():
    state = lo_state([2], [1], 2)
    with pytest.raises(UsageError):
        synthesize(("A",), state)
