"""HTTP session service: flows, error codes, persistence."""

import pytest
from fastapi.testclient import TestClient

from msgames.ms import game_state, ms_winner
from msgames.service import UI_BOARD_CAP, create_app
from msgames.structures import board, make_linear_order


@pytest.fixture()
def client():
    return TestClient(create_app())


def new_session(client, **kw):
    body = {"a": ["lo:3"], "b": ["lo:2"], "rounds": 2, "humanRole": "Spoiler"}
    body.update(kw)
    r = client.post("/sessions", json=body)
    assert r.status_code == 201, r.text
    return r.json()


def test_create_and_get(client):
    s = new_session(client)
    assert s["roundsLeft"] == 2
    assert s["turn"] == {"role": "Spoiler", "player": "human"}
    g = client.get(f"/sessions/{s['id']}")
    assert g.status_code == 200
    assert g.json()["sideA"] == s["sideA"]


def test_intro_reply_two_copies(client):
    # Opening the three-element side at its middle draws the classic
    # two-copy reply on the two-element side.
    s = new_session(client)
    aid = s["sideA"][0]["id"]
    r = client.post(
        f"/sessions/{s['id']}/move", json={"side": "A", "selections": {str(aid): 2}}
    )
    assert r.status_code == 200
    side_b = r.json()["sideB"]
    assert [b["history"] for b in side_b] == [[1], [2]]


def test_full_game_duplicator_survives(client):
    s = new_session(client)
    sid = s["id"]
    bid = s["sideB"][0]["id"]
    s = client.post(f"/sessions/{sid}/move", json={"side": "B", "selections": {str(bid): 2}}).json()
    assert s["roundsLeft"] == 1
    bid = s["sideB"][0]["id"]
    s = client.post(f"/sessions/{sid}/move", json={"side": "B", "selections": {str(bid): 1}}).json()
    assert s["finished"] and s["winner"] == "Duplicator"
    assert s["alivePairs"]


def test_errors(client):
    s = new_session(client)
    sid = s["id"]
    aid = s["sideA"][0]["id"]
    # 400 illegal move: position out of range
    r = client.post(f"/sessions/{sid}/move", json={"side": "A", "selections": {str(aid): 9}})
    assert r.status_code == 400
    # 400 bad side
    r = client.post(f"/sessions/{sid}/move", json={"side": "C", "selections": {str(aid): 1}})
    assert r.status_code == 400
    # 404 unknown session
    assert client.get("/sessions/zzz").status_code == 404
    # 409 out of turn: a Duplicator payload while it is Spoiler's turn
    r = client.post(f"/sessions/{sid}/move", json={"replacements": {str(aid): [1]}})
    assert r.status_code == 400  # wrong payload for the human's role
    # 422 malformed body
    r = client.post(f"/sessions/{sid}/move", json={"side": 3})
    assert r.status_code == 422
    # finish the game, then move again -> 409
    for _ in range(2):
        st = client.get(f"/sessions/{sid}").json()
        moves = {str(b["id"]): 1 for b in st["sideA"]}
        client.post(f"/sessions/{sid}/move", json={"side": "A", "selections": moves})
    r = client.post(f"/sessions/{sid}/move", json={"side": "A", "selections": {"1": 1}})
    assert r.status_code == 409


def test_undo(client):
    s = new_session(client)
    sid = s["id"]
    assert client.post(f"/sessions/{sid}/undo").status_code == 409
    bid = s["sideB"][0]["id"]
    client.post(f"/sessions/{sid}/move", json={"side": "B", "selections": {str(bid): 2}})
    u = client.post(f"/sessions/{sid}/undo")
    assert u.status_code == 200
    assert u.json()["roundsLeft"] == 2
    assert u.json()["sideA"] == s["sideA"]


def test_hint_spoiler_winning(client):
    # Four-versus-three at three rounds is a Spoiler win; the hint must be
    # a winning move.
    s = new_session(client, a=["lo:4"], b=["lo:3"], rounds=3)
    h = client.post(f"/sessions/{s['id']}/hint")
    assert h.status_code == 200
    hint = h.json()
    assert hint["losing"] is False
    assert hint["side"] in ("A", "B")


def test_hint_preserves_verdict_small():
    # Applying the hinted move never flips the solver verdict.
    for n, m, rounds in [(3, 2, 2), (4, 3, 2), (2, 2, 1), (4, 4, 2)]:
        client = TestClient(create_app())
        s = new_session(client, a=[f"lo:{n}"], b=[f"lo:{m}"], rounds=rounds)
        before = ms_winner(
            game_state([board(make_linear_order(n))], [board(make_linear_order(m))], rounds)
        ).winner
        hint = client.post(f"/sessions/{s['id']}/hint").json()
        assert hint["losing"] == (before != "Spoiler")
        r = client.post(
            f"/sessions/{s['id']}/move",
            json={"side": hint["side"], "selections": hint["selections"]},
        )
        assert r.status_code == 200
        state = r.json()
        if before == "Spoiler" and not state["finished"]:
            # Rebuild the state and re-solve: still a Spoiler win.
            a = [board(make_linear_order(b["n"]), [p - 1 for p in b["history"]]) for b in state["sideA"]]
            b_ = [board(make_linear_order(b["n"]), [p - 1 for p in b["history"]]) for b in state["sideB"]]
            after = ms_winner(game_state(a, b_, state["roundsLeft"])).winner
            assert after == "Spoiler"
        if state["finished"]:
            assert state["winner"] == before


def test_human_duplicator_flow(client):
    s = new_session(client, humanRole="Duplicator")
    sid = s["id"]
    assert s["turn"] == {"role": "Duplicator", "player": "human"}
    # The engine Spoiler has already opened.
    assert sum(len(b["history"]) for b in s["sideA"] + s["sideB"]) == 1
    hint = client.post(f"/sessions/{sid}/hint").json()
    assert hint["losing"] is False
    r = client.post(f"/sessions/{sid}/move", json={"replacements": hint["replacements"]})
    assert r.status_code == 200
    s = r.json()
    assert s["roundsLeft"] == 1
    # Play the oblivious reply again; Duplicator must survive 3 vs 2.
    if not s["finished"]:
        hint = client.post(f"/sessions/{sid}/hint").json()
        s = client.post(f"/sessions/{sid}/move", json={"replacements": hint["replacements"]}).json()
    assert s["finished"] and s["winner"] == "Duplicator"


def test_duplicator_board_cap(client):
    s = new_session(client, a=["lo:3"], b=["lo:3"], rounds=2, humanRole="Duplicator")
    too_many = {str(s["sideB"][0]["id"]): list(range(1, 4)) * 3}
    r = client.post(f"/sessions/{s['id']}/move", json={"replacements": too_many})
    assert r.status_code == 400


def test_engine_reply_respects_cap(client):
    # A twelve-element side would obliviously expand to twelve boards; the
    # engine's reply stays within the UI cap.
    s = new_session(client, a=["lo:12"], b=["lo:12"], rounds=2)
    aid = s["sideA"][0]["id"]
    r = client.post(f"/sessions/{s['id']}/move", json={"side": "A", "selections": {str(aid): 6}})
    assert len(r.json()["sideB"]) <= UI_BOARD_CAP


def test_atoms_variant(client):
    s = new_session(client, a=["lo:2"], b=["lo:2"], rounds=1, variant="atoms")
    aid = s["sideA"][0]["id"]
    r = client.post(f"/sessions/{s['id']}/move", json={"side": "A", "selections": {str(aid): "a1"}})
    assert r.status_code == 200
    state = r.json()
    assert state["sideA"][0]["history"] == ["a1"]
    assert state["winner"] == "Duplicator"


def test_create_validation(client):
    r = client.post("/sessions", json={"a": [], "b": ["lo:2"], "rounds": 2})
    assert r.status_code == 400
    r = client.post("/sessions", json={"a": ["lo:2"], "b": ["lo:2"], "rounds": 0})
    assert r.status_code == 400
    r = client.post("/sessions", json={"a": ["lo:2"], "b": ["lo:2"], "rounds": 1, "variant": "x"})
    assert r.status_code == 400


def test_persistence_restores_sessions(tmp_path):
    d = str(tmp_path / "sessions")
    client = TestClient(create_app(persist_dir=d))
    s = new_session(client)
    sid = s["id"]
    bid = s["sideB"][0]["id"]
    before = client.post(
        f"/sessions/{sid}/move", json={"side": "B", "selections": {str(bid): 2}}
    ).json()
    # Fresh app instance, same directory: the session comes back.
    revived = TestClient(create_app(persist_dir=d))
    g = revived.get(f"/sessions/{sid}")
    assert g.status_code == 200
    after = g.json()
    assert after["roundsLeft"] == before["roundsLeft"]
    assert after["sideA"] == before["sideA"]
    assert after["sideB"] == before["sideB"]
    assert sorted(map(tuple, after["alivePairs"])) == sorted(map(tuple, before["alivePairs"]))
