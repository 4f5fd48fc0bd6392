"""Named threshold sentences for linear orders.

phi2..phi6 distinguish linear orders of size >= 1, 2, 4, 10, 21, 42 from
smaller ones with 2..6 quantifiers; phi4_5..phi4_9 fill the gaps between
the four-quantifier thresholds; chain(r) is the naive r-quantifier
ascending chain.

phi5 and phi6 relativize phi4: "there is a point with the phi4
configuration on both sides" (phi5), "every point has the phi5
configuration on one side" (phi6).  The core block is written once
(`_phi4_block`) with an optional lower/upper bounding context, and the
top-level sentences assemble the blocks exactly as the bounded
constructions require.
"""

from __future__ import annotations

from .sentences import (
    And,
    Eq,
    Exists,
    Forall,
    Implies,
    Less,
    Node,
    Not,
    Or,
    UsageError,
    chain,
    neq,
)


def _phi4_block(x2, x3, x4, x5, lo=(), hi=()):
    """The six-condition core of phi4 over variables (x2, x3, x4, x5),
    relativized to the open interval between the `lo` and `hi` contexts:
    every chain is extended below by `lo` and above by `hi`."""
    lo, hi = tuple(lo), tuple(hi)

    def ch(*mid):
        return chain(*(lo + mid + hi))

    return (
        Implies(ch(x2, x4, x3), And(neq(x5, x4), ch(x2, x5, x3))),
        Implies(ch(x2, x3, x4), And(neq(x5, x4), ch(x2, x3, x5))),
        Implies(ch(x3, x4, x2), And(neq(x5, x4), ch(x3, x5, x2))),
        Implies(ch(x4, x3, x2), And(neq(x5, x4), ch(x5, x3, x2))),
        Implies(Eq(x4, x2), Or(ch(x2, x5, x3), ch(x3, x5, x2))),
        Implies(Eq(x4, x3), Or(ch(x2, x3, x5), ch(x5, x3, x2))),
    )


def phi2() -> Node:
    return Exists("x", Exists("y", Less("x", "y")))


def phi3() -> Node:
    return Forall(
        "x",
        Exists(
            "y",
            Exists("z", Or(chain("x", "y", "z"), chain("y", "z", "x"))),
        ),
    )


def phi4() -> Node:
    return Forall(
        "x",
        Exists(
            "y",
            Forall(
                "z",
                Exists("w", And(*_phi4_block("x", "y", "z", "w"))),
            ),
        ),
    )


def _phi5_matrix() -> Node:
    right = Implies(
        Less("x1", "x2"),
        And(*_phi4_block("x2", "x3", "x4", "x5", lo=("x1",))),
    )
    left = Implies(
        Less("x2", "x1"),
        And(*_phi4_block("x2", "x3", "x4", "x5", hi=("x1",))),
    )
    tie = Implies(Eq("x1", "x2"), And(Less("x3", "x1"), Less("x1", "x5")))
    return And(right, left, tie)


def phi5() -> Node:
    body = _phi5_matrix()
    for var, quant in (("x5", Exists), ("x4", Forall), ("x3", Exists), ("x2", Forall)):
        body = quant(var, body)
    return Exists("x1", body)


def phi6() -> Node:
    # "for every x0 there is a size-21 configuration to its right or left".
    # The displayed form of the right/left blocks nests the x1-vs-x2 case
    # split inside each half; ties are handled by the two small cases and
    # the final x0 = x1 clause.
    right = Implies(
        Less("x0", "x1"),
        And(
            Implies(
                chain("x0", "x1", "x2"),
                And(*_phi4_block("x2", "x3", "x4", "x5", lo=("x0", "x1"))),
            ),
            Implies(
                chain("x0", "x2", "x1"),
                And(*_phi4_block("x2", "x3", "x4", "x5", lo=("x0",), hi=("x1",))),
            ),
            Implies(
                And(Less("x0", "x1"), Eq("x1", "x2")),
                And(chain("x0", "x3", "x1"), chain("x0", "x1", "x5")),
            ),
        ),
    )
    left = Implies(
        Less("x1", "x0"),
        And(
            Implies(
                chain("x1", "x2", "x0"),
                And(*_phi4_block("x2", "x3", "x4", "x5", lo=("x1",), hi=("x0",))),
            ),
            Implies(
                chain("x2", "x1", "x0"),
                And(*_phi4_block("x2", "x3", "x4", "x5", hi=("x1", "x0"))),
            ),
            Implies(
                And(Eq("x1", "x2"), Less("x1", "x0")),
                And(chain("x3", "x1", "x0"), chain("x1", "x5", "x0")),
            ),
        ),
    )
    # The witness x1 must lie strictly inside the half it certifies; if
    # x1 = x0 were permitted, both halves' implications would be vacuous.
    tie = neq("x0", "x1")
    body = And(right, left, tie)
    for var, quant in (("x5", Exists), ("x4", Forall), ("x3", Exists), ("x2", Forall)):
        body = quant(var, body)
    return Forall("x0", Exists("x1", body))


def _phi4_gap(conditions) -> Node:
    return Forall(
        "x",
        Exists(
            "y",
            Forall("z", Exists("w", And(*conditions))),
        ),
    )


def phi4_9() -> Node:
    c = _phi4_block("x", "y", "z", "w")
    return _phi4_gap((c[0], c[1], c[2], c[4], c[5]))


def phi4_8() -> Node:
    c = _phi4_block("x", "y", "z", "w")
    return _phi4_gap((c[1], c[2], c[4], c[5]))


def phi4_7() -> Node:
    c = _phi4_block("x", "y", "z", "w")
    return _phi4_gap((c[1], c[4], c[5]))


def phi4_6() -> Node:
    c = _phi4_block("x", "y", "z", "w")
    return _phi4_gap((c[4], c[5]))


def phi4_5() -> Node:
    c = _phi4_block("x", "y", "z", "w")
    weakened = Implies(Eq("z", "y"), Or(chain("x", "y", "w"), Less("y", "x")))
    return _phi4_gap((c[4], weakened))


def chain_sentence(r: int) -> Node:
    """E x1 ... E xr with x1 < x2 < ... < xr: true iff size >= r."""
    if r < 1:
        raise UsageError("chain length must be >= 1")
    if r == 1:
        body: Node = Eq("x1", "x1")
    else:
        body = chain(*(f"x{i}" for i in range(1, r + 1)))
    for i in range(r, 0, -1):
        body = Exists(f"x{i}", body)
    return body


_LIBRARY = {
    "phi2": phi2,
    "phi3": phi3,
    "phi4": phi4,
    "phi5": phi5,
    "phi6": phi6,
    "phi4_5": phi4_5,
    "phi4_6": phi4_6,
    "phi4_7": phi4_7,
    "phi4_8": phi4_8,
    "phi4_9": phi4_9,
}


def library(name: str, r: int = None) -> Node:
    if name == "chain":
        if r is None:
            raise UsageError("chain requires a length")
        return chain_sentence(r)
    maker = _LIBRARY.get(name)
    if maker is None:
        raise UsageError(f"unknown sentence {name!r}")
    return maker()


def library_names():
    return tuple(sorted(_LIBRARY)) + ("chain",)
