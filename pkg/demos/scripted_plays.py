"""Named strategies, replayed move by move.

The solver proves winners by search; these scripts prove them by
*telling you the moves*.  A Spoiler script is run against the oblivious
Duplicator (who tries everything); a Duplicator script is certified
against every Spoiler line.  Traces land in demos/traces/ for the web
replayer.
"""

import os

from msgames.ms import game_state
from msgames.strategies import (
    certify_duplicator,
    ladder,
    naive_mirror_duplicator,
    plain3_duplicator,
    run_spoiler,
    split_board_duplicator,
    ten_v_nine_spoiler,
)
from msgames.structures import board, make_linear_order

HERE = os.path.dirname(__file__)


def lo(n):
    return board(make_linear_order(n))


print("Ten versus nine, four rounds (a Spoiler win)")
print("--------------------------------------------")
res = run_spoiler(ten_v_nine_spoiler(), game_state([lo(10)], [lo(9)], 4), None)
print(f"spoiler_won = {res.spoiler_won}")
lines = res.trace.splitlines()
print(f"trace: {len(lines)} moves; the opening and the finish:")
for line in lines[:3] + ["..."] + lines[-3:]:
    print("  " + line)
os.makedirs(os.path.join(HERE, "traces"), exist_ok=True)
path = os.path.join(HERE, "traces", "ten_v_nine.trace")
with open(path, "w") as fh:
    fh.write(res.trace + "\n")
print(f"full trace written to {path}")
print()

print("Note the play on top: Spoiler repeats an already-played point.")
print("Useless in the classic game, decisive here — and exactly the move")
print("that refutes the tempting mirror strategy:")
print()

print("Naive mirror, refuted")
print("---------------------")
cert = certify_duplicator(naive_mirror_duplicator(), game_state([lo(10)], [lo(9)], 4), None)
print(f"certified = {cert.certified}; refuting line:")
for line in cert.refutation.splitlines():
    print("  " + line)
print()

print("Pact play, certified")
print("--------------------")
st = game_state([lo(6)], [lo(5)], 3, atoms=True)
cert = certify_duplicator(split_board_duplicator(), st, None)
print(f"6 vs 5 with atoms, 3 rounds: certified = {cert.certified}"
      f" ({cert.nodes} nodes)")
print()

print("Laddering: adjacent certifications chain through transitivity,")
print("so one row of wins covers every pair at or above the threshold:")
rep = ladder(plain3_duplicator, [4, 5, 6, 7], 3)
for big, small, ok in rep.adjacent:
    print(f"  {big} vs {small}: {'certified' if ok else 'GAP'}")
