"""Scripted Spoiler plays, Duplicator certifications, and ladders."""

import pytest

from msgames.ms import game_state, ms_winner
from msgames.strategies import (
    certify_duplicator,
    ladder,
    middle_recursive_spoiler,
    naive_mirror_duplicator,
    plain2_duplicator,
    plain3_duplicator,
    reduction_duplicator,
    run_ef_spoiler,
    run_spoiler,
    split_board_duplicator,
    ten_v_nine_spoiler,
)
from msgames.structures import UsageError, board, make_linear_order


def lo(n, *hist):
    return board(make_linear_order(n), hist)


def plays_on_top(trace):
    seen = {}
    for line in trace.splitlines():
        rnd, side, bid, sel = line.split(",")
        if sel in seen.get(bid, ()):
            return True
        seen.setdefault(bid, []).append(sel)
    return False


# ---------------------------------------------------------------- Spoiler


def test_ten_v_nine_wins():
    st = game_state([lo(10)], [lo(9)], 4)
    res = run_spoiler(ten_v_nine_spoiler(), st, None)
    assert res.spoiler_won


def test_ten_v_nine_trace_shape():
    st = game_state([lo(10)], [lo(9)], 4)
    res = run_spoiler(ten_v_nine_spoiler(), st, None)
    lines = res.trace.splitlines()
    # The opening move is the dead centre of the nine-board.
    assert lines[0] == "1,B,2,5"
    # Traces are deterministic.
    again = run_spoiler(ten_v_nine_spoiler(), game_state([lo(10)], [lo(9)], 4), None)
    assert again.trace == res.trace
    # The plan leans on repeating an already-played point at least once.
    assert plays_on_top(res.trace)


def test_ten_v_nine_fails_on_bigger_small_side():
    # Same script against ten-versus-ten has no winning claim.
    st = game_state([lo(10)], [lo(10)], 4)
    res = run_spoiler(ten_v_nine_spoiler(), st, None)
    assert not res.spoiler_won


def test_middle_recursive_wins_21_v_20():
    st = game_state([lo(21)], [lo(20)], 5)
    res = run_spoiler(middle_recursive_spoiler(), st, None)
    assert res.spoiler_won
    assert res.trace.splitlines()[0] == "1,A,1,11"


def test_scripts_agree_with_solver_verdicts():
    # Certified scripts and scripted wins agree with the solver wherever
    # the solver is desk-scale.
    st = game_state([lo(4)], [lo(3)], 3)
    assert ms_winner(st).winner == "Spoiler"
    st = game_state([lo(5)], [lo(4)], 3)
    assert ms_winner(st).winner == "Duplicator"
    st = game_state([lo(6)], [lo(5)], 3, atoms=True)
    assert ms_winner(st).winner == "Duplicator"
    assert certify_duplicator(split_board_duplicator(), st, None).certified


def test_ef_script_halving():
    res = run_ef_spoiler("ef_appendixA_spoiler", make_linear_order(6), make_linear_order(5), 3)
    assert res.spoiler_won
    res = run_ef_spoiler("ef_appendixA_spoiler", make_linear_order(7), make_linear_order(7), 3)
    assert not res.spoiler_won
    with pytest.raises(UsageError):
        run_ef_spoiler("zzz", make_linear_order(6), make_linear_order(5), 3)


# ------------------------------------------------------------- Duplicator


def test_reduction_script_certifies_matched_first_moves():
    a = board(make_linear_order(6), (2,))
    b = board(make_linear_order(5), (2,))
    st = game_state([a], [b], 2, atoms=True)
    cert = certify_duplicator(reduction_duplicator(), st, None)
    assert cert.certified
    assert cert.refutation is None


def test_plain2_certifies_3_v_2():
    st = game_state([lo(3)], [lo(2)], 2)
    cert = certify_duplicator(plain2_duplicator(), st, None)
    assert cert.certified


def test_plain3_certifies_5_v_4():
    st = game_state([lo(5)], [lo(4)], 3)
    cert = certify_duplicator(plain3_duplicator(), st, None)
    assert cert.certified


def test_split_board_certifies_6_v_5_atoms():
    st = game_state([lo(6)], [lo(5)], 3, atoms=True)
    cert = certify_duplicator(split_board_duplicator(), st, None)
    assert cert.certified


def test_certification_refutes_overreaching_script():
    # The pact script cannot survive five-versus-four without atoms margin.
    st = game_state([lo(4)], [lo(3)], 3)
    cert = certify_duplicator(split_board_duplicator(), st, None)
    assert not cert.certified
    assert cert.refutation


def test_naive_mirror_refuted_with_play_on_top():
    st = game_state([lo(10)], [lo(9)], 4)
    cert = certify_duplicator(naive_mirror_duplicator(), st, None)
    assert not cert.certified
    assert cert.refutation
    assert plays_on_top(cert.refutation)


def test_refutation_lines_well_formed():
    st = game_state([lo(4)], [lo(3)], 3)
    cert = certify_duplicator(split_board_duplicator(), st, None)
    for line in cert.refutation.splitlines():
        rnd, side, bid, sel = line.split(",")
        assert side in ("A", "B")
        assert int(rnd) >= 1
        assert int(bid) >= 1
        assert sel.startswith("a") or int(sel) >= 1


# ----------------------------------------------------------------- Ladder


def test_ladder_plain_two_rounds():
    rep = ladder(plain2_duplicator, [2, 3, 4, 5, 6], 2)
    assert rep.all_duplicator
    assert rep.adjacent == ((3, 2, True), (4, 3, True), (5, 4, True), (6, 5, True))


def test_ladder_plain_three_rounds():
    rep = ladder(plain3_duplicator, [4, 5, 6, 7], 3)
    assert rep.all_duplicator


def test_ladder_atoms_three_rounds():
    rep = ladder(split_board_duplicator, [5, 6, 7, 8], 3, atoms=True)
    assert rep.all_duplicator


def test_ladder_reports_gaps():
    with pytest.raises(UsageError):
        ladder(split_board_duplicator, [3, 4, 5], 3)
