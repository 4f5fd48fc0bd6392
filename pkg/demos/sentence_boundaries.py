"""The threshold sentences, evaluated along the size axis.

phi_r says "this linear order has at least g(r) elements" using only r
quantifiers — far fewer than the naive chain of g(r) existentials.  The
trick is reuse: a universally quantified variable splits the order into
halves and the same suffix certifies whichever half is long.  Watch each
sentence flip from false to true exactly at its threshold.
"""

from msgames.library import library, library_names
from msgames.sentences import evaluate, quantifier_profile, render
from msgames.structures import make_linear_order

print("Library:", ", ".join(library_names()))
print()

for name, boundary in (("phi2", 2), ("phi3", 4), ("phi4", 10), ("phi5", 21)):
    s = library(name)
    prof = quantifier_profile(s)
    sweep = "".join(
        "T" if evaluate(s, make_linear_order(n)) else "." for n in range(1, boundary + 3)
    )
    print(f"{name}  ({prof.count} quantifiers, prefix {prof.prefix})")
    print(f"  sizes 1..{boundary + 2}: {sweep}   (flips at {boundary})")
print()

print("phi6 needs the capped evaluator — size 42 has 42^6 ~ 5.4e9 naive")
print("assignments, but only gaps up to 63 matter at rank 6:")
s = library("phi6")
for n in (41, 42):
    print(f"  lo:{n} -> {evaluate(s, make_linear_order(n))}")
print()

print("Between g(4)=10 and the next threshold the gap closes in unit steps;")
print("phi4_k separates k from k-1 with four quantifiers for k = 5..9:")
for k in range(5, 10):
    s = library(f"phi4_{k}")
    print(f"  phi4_{k}: lo:{k - 1} -> {evaluate(s, make_linear_order(k - 1))},"
          f" lo:{k} -> {evaluate(s, make_linear_order(k))}")
print()

print("The two-quantifier opener, in concrete syntax:")
print(" ", render(library("phi2")))
