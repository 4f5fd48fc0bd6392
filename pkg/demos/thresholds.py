"""A walking tour of the game thresholds on linear orders.

Two linear orders of different sizes can be told apart by a first-order
sentence; the question is how cheap a sentence suffices.  The classic
game prices sentences by quantifier *rank*, the multi-structural (MS)
game by quantifier *count*.  This script reproduces the landmark values
with the exact solvers.
"""

from msgames.bounds import bounds_table
from msgames.ef import ef_winner
from msgames.ms import game_state, ms_winner
from msgames.structures import board, make_linear_order


def lo(n):
    return board(make_linear_order(n))


print("The 3-vs-2 opener")
print("-----------------")
print("Rank and count disagree already on the smallest interesting pair:")
v = ef_winner(lo(3), lo(2), 2)
print(f"  classic game, 2 rounds, lo:3 vs lo:2 -> {v.winner}")
v = ms_winner(game_state([lo(3)], [lo(2)], 2))
print(f"  MS game,      2 rounds, lo:3 vs lo:2 -> {v.winner}")
print("Two quantifiers of rank 2 separate them, two quantifiers do not.")
print()

print("Classic thresholds: f(r) = 2^r - 1")
print("----------------------------------")
for r in (1, 2, 3):
    boundary = 2**r - 1
    below = ef_winner(lo(boundary), lo(boundary - 1), r).winner if boundary > 1 else "-"
    above = ef_winner(lo(boundary + 1), lo(boundary), r).winner
    print(f"  r={r}: Spoiler wins {boundary} vs {boundary - 1} ({below}),"
          f" loses {boundary + 1} vs {boundary} ({above})")
print()

print("MS thresholds: g = 1, 2, 4, 10, 21, ...")
print("---------------------------------------")
for r, boundary in ((2, 2), (3, 4)):
    v1 = ms_winner(game_state([lo(boundary)], [lo(boundary - 1)], r)).winner
    v2 = ms_winner(game_state([lo(boundary + 1)], [lo(boundary)], r)).winner
    print(f"  r={r}: {boundary} vs {boundary - 1} -> {v1};"
          f" {boundary + 1} vs {boundary} -> {v2}")
print()

print("Atoms raise the stakes: g'(3) = 5")
print("---------------------------------")
v1 = ms_winner(game_state([lo(5)], [lo(4)], 3, atoms=True)).winner
v2 = ms_winner(game_state([lo(6)], [lo(5)], 3, atoms=True)).winner
print(f"  with atoms, r=3: 5 vs 4 -> {v1}; 6 vs 5 -> {v2}")
v3 = ms_winner(game_state([lo(5)], [lo(4)], 3, atoms=True, constraints="B")).winner
print(f"  same pair, first move forced onto the small side -> {v3}")
print()

print("The closed-form table (g <= g' <= f everywhere):")
print(bounds_table(10).render())
