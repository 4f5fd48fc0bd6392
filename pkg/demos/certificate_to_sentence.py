"""From a Spoiler win to a separating sentence.

A Spoiler certificate is a move list; synthesis replays it, collects the
complete atomic diagram of each surviving side-A leaf, and wraps the
disjunction in the certificate's quantifier prefix.  The result is a
sentence true on every side-A structure and false on every side-B
structure — checked by the evaluator, not assumed.
"""

from msgames.ms import game_state, ms_winner, replay_certificate
from msgames.sentences import evaluate, quantifier_profile, render
from msgames.structures import board, make_linear_order
from msgames.synthesis import synthesize


def lo(n):
    return board(make_linear_order(n))


st = game_state([lo(4)], [lo(3)], 3)
verdict = ms_winner(st)
print(f"lo:4 vs lo:3, three rounds -> {verdict.winner}")
cert = verdict.certificate
print("certificate sides:", "".join(mv.side for mv in cert.rounds))
print("replays to a Spoiler win:", replay_certificate(st, cert))
print()

sentence = synthesize(cert, st)
prof = quantifier_profile(sentence)
print(f"synthesized sentence ({prof.count} quantifiers, prefix {prof.prefix}):")
print(" ", render(sentence))
print()
print("checked against both sides:")
print("  lo:4 ->", evaluate(sentence, make_linear_order(4)))
print("  lo:3 ->", evaluate(sentence, make_linear_order(3)))
print()

print("The same works across a whole grid; every Spoiler win below the")
print("threshold g(3)=4 produces its own separating sentence:")
for n in range(2, 6):
    for m in range(1, min(n, 4)):
        st = game_state([lo(n)], [lo(m)], 3)
        v = ms_winner(st)
        if v.winner != "Spoiler":
            continue
        s = synthesize(v.certificate, st)
        assert evaluate(s, make_linear_order(n)) and not evaluate(s, make_linear_order(m))
        print(f"  {n} vs {m}: prefix {quantifier_profile(s).prefix}, verified")
