"""Closed forms, the bounds table, and the verification campaigns."""

import pytest

from msgames.bounds import (
    CAMPAIGNS,
    BoundsRow,
    BoundsTable,
    CampaignReport,
    ReportLine,
    bounds_table,
    f_closed,
    g_closed,
    g_forall,
    g_prime_closed,
    verify_campaign,
)
from msgames.structures import UsageError


def brute_g(r):
    # Independent iteration of the published recurrence, for cross-checking
    # the memoised closed form.
    vals = {1: 1, 2: 2, 3: 4, 4: 10}
    for k in range(5, r + 1):
        vals[k] = 2 * vals[k - 1] + (1 if k % 2 else 0)
    return vals[r]


def test_closed_form_values():
    assert [f_closed(r) for r in (1, 2, 3, 4)] == [1, 3, 7, 15]
    assert [g_closed(r) for r in (1, 2, 3, 4, 5, 6)] == [1, 2, 4, 10, 21, 42]
    assert g_closed(10) == 682
    assert [g_prime_closed(r) for r in (1, 2, 3, 4, 5)] == [1, 2, 5, 10, 21]
    assert g_forall(3) == 4


def test_closed_forms_match_recurrence():
    for r in range(4, 31):
        assert g_closed(r) == brute_g(r)


def test_closed_form_errors():
    for fn in (f_closed, g_closed, g_prime_closed):
        with pytest.raises(UsageError):
            fn(0)
    with pytest.raises(UsageError):
        g_forall(1)


def test_table_orderings_and_identities():
    t = bounds_table(30)
    assert len(t.rows) == 30
    for row in t.rows:
        assert row.g <= row.gPrime <= row.f
        if row.r >= 4:
            # Both recurrences run from the common value 10.
            assert row.g == row.gPrime
            assert row.g % 2 == (row.r % 2)
    assert t.row(2).gForall == 2 * g_prime_closed(1)
    assert t.row(1).gForall is None


def test_table_rejects_violations():
    bad = (BoundsRow(1, f=1, g=2, gPrime=1, gForall=None),)
    with pytest.raises(UsageError):
        BoundsTable(bad)
    with pytest.raises(UsageError):
        bounds_table(0)


def test_render_is_tabular():
    text = bounds_table(3).render()
    lines = text.splitlines()
    assert lines[0].split("\t") == ["r", "f", "g", "gPrime", "gForall"]
    assert lines[1].split("\t") == ["1", "1", "1", "1", "-"]
    assert len(lines) == 4


def test_unknown_campaign():
    with pytest.raises(UsageError):
        verify_campaign("nope")


@pytest.mark.parametrize("name", ["g-small", "g-gap", "prefix-discrepancy"])
def test_small_campaigns_pass(name):
    rep = verify_campaign(name)
    assert isinstance(rep, CampaignReport)
    assert rep.lines, "campaign produced no instances"
    assert rep.all_pass
    assert rep.passed == len(rep.lines)


def test_campaign_report_format():
    rep = verify_campaign("prefix-discrepancy")
    for line in rep.lines:
        cols = line.tsv().split("\t")
        assert len(cols) == 7
        assert cols[0] == "prefix-discrepancy"
        assert cols[4] in ("PASS", "FAIL", "SKIPPED")
        int(cols[5])
        float(cols[6])
    keys = [line.key for line in rep.lines]
    assert keys == sorted(keys)


def test_budget_exhaustion_marks_skipped_not_pass():
    rep = verify_campaign("g-small", {"max_r": 3, "max_n": 7, "max_nodes": 1})
    assert not rep.all_pass
    assert any(l.status == "SKIPPED" for l in rep.lines)
    assert all(l.status != "PASS" or l.observed for l in rep.lines)
    # A skipped instance never counts as a pass.
    assert rep.passed < len(rep.lines)


def test_sentence_boundaries_campaign():
    rep = verify_campaign("sentence-boundaries")
    assert rep.all_pass
    by_key = {l.key: l for l in rep.lines}
    assert by_key["eval:phi6:lo:41"].expected == "false"
    assert by_key["eval:phi6:lo:42"].expected == "true"
    assert by_key["eval:phi4_7:lo:7"].expected == "true"


def test_campaign_names_catalogued():
    assert set(CAMPAIGNS) == {
        "f-table",
        "g-small",
        "g-gap",
        "atoms-table",
        "sentence-boundaries",
        "prefix-discrepancy",
    }


def test_atoms_campaign_contains_contrast_instances():
    rep = verify_campaign("atoms-table", {"max_r": 2, "max_n": 3})
    assert any(l.key.startswith("gforall:") for l in rep.lines)
    assert rep.all_pass
