"""Closed-form threshold tables and desk-scale verification campaigns.

The closed forms tabulate, per round count r, the largest linear-order
size that the r-round game still distinguishes from its neighbour:
``f`` for the classic game, ``g`` for the multi-structural game, ``gPrime``
for the variant with atoms, and ``gForall`` for the atoms variant whose
first move is forced onto the smaller side.  Campaigns re-derive slices of
those tables from the solvers and report one tab-separated line per
instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .budget import Budget, BudgetExceeded
from .ef import ef_prefix_winner, ef_winner
from .library import library
from .ms import game_state, ms_winner, prefix_constraints
from .sentences import evaluate
from .structures import UsageError, board, make_linear_order

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"

CAMPAIGNS = (
    "f-table",
    "g-small",
    "g-gap",
    "atoms-table",
    "sentence-boundaries",
    "prefix-discrepancy",
)


def f_closed(r: int) -> int:
    if r < 1:
        raise UsageError("r must be >= 1")
    return 2**r - 1


@lru_cache(maxsize=None)
def g_closed(r: int) -> int:
    if r < 1:
        raise UsageError("r must be >= 1")
    base = {1: 1, 2: 2, 3: 4, 4: 10}
    if r in base:
        return base[r]
    return 2 * g_closed(r - 1) + (1 if r % 2 else 0)


@lru_cache(maxsize=None)
def g_prime_closed(r: int) -> int:
    if r < 1:
        raise UsageError("r must be >= 1")
    base = {1: 1, 2: 2, 3: 5}
    if r in base:
        return base[r]
    return 2 * g_prime_closed(r - 1) + (1 if r % 2 else 0)


def g_forall(r: int) -> int:
    """Upper bound 2 g'(r-1) on the forced-first-move threshold."""
    if r < 2:
        raise UsageError("r must be >= 2")
    return 2 * g_prime_closed(r - 1)


@dataclass(frozen=True)
class BoundsRow:
    r: int
    f: int
    g: int
    gPrime: int
    gForall: int | None


@dataclass(frozen=True)
class BoundsTable:
    rows: tuple

    def __post_init__(self):
        for row in self.rows:
            if not row.g <= row.gPrime <= row.f:
                raise UsageError(f"table violates g <= g' <= f at r={row.r}")

    def row(self, r: int) -> BoundsRow:
        for row in self.rows:
            if row.r == r:
                return row
        raise UsageError(f"r={r} not tabulated")

    def render(self) -> str:
        lines = ["r\tf\tg\tgPrime\tgForall"]
        for row in self.rows:
            gf = "-" if row.gForall is None else str(row.gForall)
            lines.append(f"{row.r}\t{row.f}\t{row.g}\t{row.gPrime}\t{gf}")
        return "\n".join(lines)


def bounds_table(max_r: int = 30) -> BoundsTable:
    if max_r < 1:
        raise UsageError("max_r must be >= 1")
    rows = tuple(
        BoundsRow(
            r,
            f_closed(r),
            g_closed(r),
            g_prime_closed(r),
            g_forall(r) if r >= 2 else None,
        )
        for r in range(1, max_r + 1)
    )
    return BoundsTable(rows)


@dataclass(frozen=True)
class ReportLine:
    campaign: str
    key: str
    expected: str
    observed: str
    status: str
    nodes: int
    millis: float

    def tsv(self) -> str:
        return "\t".join(
            (
                self.campaign,
                self.key,
                self.expected,
                self.observed,
                self.status,
                str(self.nodes),
                f"{self.millis:.1f}",
            )
        )


@dataclass(frozen=True)
class CampaignReport:
    campaign: str
    lines: tuple

    @property
    def all_pass(self) -> bool:
        return all(ln.status == PASS for ln in self.lines)

    @property
    def passed(self) -> int:
        return sum(1 for ln in self.lines if ln.status == PASS)

    def to_tsv(self) -> str:
        return "\n".join(ln.tsv() for ln in self.lines)


def _lo(n: int):
    return board(make_linear_order(n))


def _run(campaign, key, expected, caps, run):
    budget = Budget(max_nodes=caps.get("max_nodes"), max_ms=caps.get("max_ms"))
    try:
        observed = run(budget)
        status = PASS if observed == expected else FAIL
    except BudgetExceeded:
        observed = ""
        status = SKIPPED
    return ReportLine(
        campaign, key, expected, observed, status, budget.nodes, budget.elapsed_ms
    )


def _f_table(caps):
    max_r = caps.get("max_r", 4)
    max_n = caps.get("max_n", 20)
    out = []
    for r in range(1, max_r + 1):
        for n in range(2, max_n + 1):
            for m in range(1, n):
                expected = "Duplicator" if m >= f_closed(r) else "Spoiler"
                out.append(
                    _run(
                        "f-table",
                        f"ef:lo:{n}v{m}:r{r}",
                        expected,
                        caps,
                        lambda b, n=n, m=m, r=r: ef_winner(_lo(n), _lo(m), r, budget=b).winner,
                    )
                )
    return out


def _g_small(caps):
    max_r = caps.get("max_r", 3)
    max_n = caps.get("max_n", 7)
    out = []
    for r in range(1, max_r + 1):
        for n in range(2, max_n + 1):
            for m in range(1, n):
                expected = "Duplicator" if m >= g_closed(r) else "Spoiler"
                out.append(
                    _run(
                        "g-small",
                        f"ms:lo:{n}v{m}:r{r}",
                        expected,
                        caps,
                        lambda b, n=n, m=m, r=r: ms_winner(
                            game_state([_lo(n)], [_lo(m)], r), b
                        ).winner,
                    )
                )
    return out


def _g_gap(caps):
    max_r = caps.get("max_r", 3)
    max_n = caps.get("max_n", 7)
    out = []
    for r in range(1, max_r + 1):
        for n in range(2, max_n + 1):
            for m in range(1, n):
                expected = "distinguishable" if m < g_closed(r) else "equivalent"

                def run(b, n=n, m=m, r=r):
                    v = ms_winner(game_state([_lo(n)], [_lo(m)], r), b)
                    return "distinguishable" if v.winner == "Spoiler" else "equivalent"

                out.append(
                    _run("g-gap", f"gap:lo:{n}v{m}:r{r}", expected, caps, run)
                )
    return out


def _atoms_table(caps):
    max_r = caps.get("max_r", 3)
    max_n = caps.get("max_n", 6)
    out = []
    for r in range(1, max_r + 1):
        for n in range(2, max_n + 1):
            for m in range(1, n):
                expected = "Duplicator" if m >= g_prime_closed(r) else "Spoiler"
                out.append(
                    _run(
                        "atoms-table",
                        f"atoms:lo:{n}v{m}:r{r}",
                        expected,
                        caps,
                        lambda b, n=n, m=m, r=r: ms_winner(
                            game_state([_lo(n)], [_lo(m)], r, atoms=True), b
                        ).winner,
                    )
                )
    # Forced-first-move contrast: with the opening move constrained to the
    # smaller side, sizes at or above 2 g'(r-1) are safe for Duplicator.
    for r in range(2, max_r + 1):
        for n in range(2, max_n + 1):
            for m in range(max(1, g_forall(r)), n):
                out.append(
                    _run(
                        "atoms-table",
                        f"gforall:lo:{n}v{m}:r{r}",
                        "Duplicator",
                        caps,
                        lambda b, n=n, m=m, r=r: ms_winner(
                            game_state([_lo(n)], [_lo(m)], r, atoms=True, constraints="B"),
                            b,
                        ).winner,
                    )
                )
    return out


def _sentence_boundaries(caps):
    cases = [("phi2", 2), ("phi3", 4), ("phi4", 10), ("phi5", 21), ("phi6", 42)]
    cases += [(f"phi4_{k}", k) for k in range(5, 10)]
    out = []
    for name, boundary in cases:
        for n, expected in ((boundary - 1, "false"), (boundary, "true")):
            out.append(
                _run(
                    "sentence-boundaries",
                    f"eval:{name}:lo:{n}",
                    expected,
                    caps,
                    lambda b, name=name, n=n: str(
                        evaluate(library(name), make_linear_order(n))
                    ).lower(),
                )
            )
    return out


def _prefix_discrepancy(caps):
    out = [
        _run(
            "prefix-discrepancy",
            "ef-prefix:lo:5v4:EAE",
            "Spoiler",
            caps,
            lambda b: ef_prefix_winner(_lo(5), _lo(4), "EAE", budget=b).winner,
        ),
        _run(
            "prefix-discrepancy",
            "ms-prefix:lo:5v4:EAE",
            "Duplicator",
            caps,
            lambda b: ms_winner(
                game_state([_lo(5)], [_lo(4)], 3, constraints=prefix_constraints("EAE")),
                b,
            ).winner,
        ),
    ]
    return out


_RUNNERS = {
    "f-table": _f_table,
    "g-small": _g_small,
    "g-gap": _g_gap,
    "atoms-table": _atoms_table,
    "sentence-boundaries": _sentence_boundaries,
    "prefix-discrepancy": _prefix_discrepancy,
}


def verify_campaign(name: str, caps: dict | None = None) -> CampaignReport:
    if name not in _RUNNERS:
        raise UsageError(f"unknown campaign {name!r}; choose from {', '.join(CAMPAIGNS)}")
    caps = dict(caps or {})
    lines = sorted(_RUNNERS[name](caps), key=lambda ln: ln.key)
    return CampaignReport(name, tuple(lines))
