from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from cohsys import decision
from cohsys.decision import (
    RULES,
    ConsistencyError,
    Rule,
    RuleSet,
    Status,
    Target,
    bn_report,
    butler_status,
    decide,
    side_fact,
    sweep,
)
from cohsys.exact_arith import DomainError
from cohsys.invariants import CSType, CurveContext

import oracles

NONEMPTY, EMPTY, OPEN = Status.NONEMPTY, Status.EMPTY, Status.OPEN
FULL, NOB = RuleSet.full(), RuleSet.no_blanket()


def C(g, petri=True):
    return CurveContext(g, petri)


# --- documented examples ------------------------------------------------------


def test_genus1_example():
    v = decide(C(1), 2, 3, Target.U)
    assert v.status is NONEMPTY and "R-G1" in v.rule_ids


def test_genus2_examples():
    v = decide(C(2), 2, 4, Target.U)
    assert v.status is EMPTY
    assert v.summary() == "EMPTY (Thm. 8.2: d ≠ 2n)"
    assert decide(C(2), 2, 4, Target.US).status is NONEMPTY


def test_genus3_exception_is_open_with_note():
    v = decide(C(3), 5, 12, Target.U)
    assert v.status is OPEN
    assert "Thm. 8.3" in v.note
    assert v.rule_ids == ("R-G3HI",)


def test_negative_beta_all_targets_empty():
    for t in Target:
        v = decide(C(3), 3, 5, t)
        assert v.status is EMPTY
        assert "R-EMPTY-β" in v.rule_ids


def test_rank3_blanket():
    v = decide(C(3), 3, 7, Target.U)
    assert v.status is NONEMPTY and v.rule_ids == ("R-N234",)


def test_mode_difference():
    assert decide(C(5), 3, 9, Target.U, NOB).status is OPEN
    assert decide(C(5), 3, 9, Target.U, FULL).status is NONEMPTY


def test_sweep_rank3_no_blanket():
    rows = sweep(range(3, 8), [3], range(0, 40), Target.U, NOB)
    opens = {(r.genus, r.degree) for r in rows if r.beta >= 0 and r.verdict.status is not NONEMPTY}
    assert opens == {(5, 9), (5, 12)}


def test_sweep_rank4_full():
    rows = sweep(range(3, 15), [4], range(0, 60), Target.U, FULL)
    assert all(r.verdict.status is NONEMPTY for r in rows if r.beta >= 0)


def test_sweep_genus0_us():
    rows = sweep([0], [3], range(1, 10), Target.US, FULL)
    assert [r.degree for r in rows if r.verdict.status is NONEMPTY] == [3, 6, 9]


def test_sweep_order_and_empty_range():
    rows = sweep(range(4, 1, -1), [3, 2], range(9, 6, -1), Target.U, FULL, max_workers=4)
    keys = [(r.genus, r.rank, r.degree) for r in rows]
    assert keys == sorted(keys)
    assert sweep([], [2], range(3), Target.U, FULL) == []


def test_rank_must_be_positive():
    with pytest.raises(DomainError):
        decide(C(3), 0, 4)


def test_side_fact():
    assert side_fact(C(3), CSType(3, 7, 5)).status is EMPTY
    assert side_fact(C(2), CSType(3, 7, 5)).status is OPEN


@pytest.mark.parametrize("g,n,d,status", [(2, 3, 6, "fails"), (3, 4, 10, "holds"), (5, 3, 9, "holds")])
def test_butler(g, n, d, status):
    s = butler_status(C(g), n, d)
    assert s.status == status
    if g == 2 and d == 2 * n:
        assert "Remark 9.6" in s.note


def test_butler_needs_positive_degree():
    with pytest.raises(DomainError):
        butler_status(C(3), 2, 0)


def test_bn_report_window():
    r = bn_report(C(6), 2, 6)
    assert r.facts["irreducible"] is True
    assert r.facts["dim"] == 0
    assert r.facts["projective"] is True
    assert r.facts["singular_locus"] == "B(2,6,4)"


def test_bn_report_genus2_exception():
    r = bn_report(C(2), 2, 4)
    assert r.facts["B"] == "EMPTY"
    assert any("Remark 9.3" in note for note in r.notes)


def test_bn_report_birational_note():
    r = bn_report(C(6), 4, 12)
    assert r.alpha_l == 4
    assert any("birational" in note for note in r.notes)


# --- rule base ----------------------------------------------------------------


def test_full_contains_no_blanket():
    assert NOB.enabled <= FULL.enabled
    assert {"R-N234", "R-EXT", "R-P73", "R-P74", "R-P75"}.isdisjoint(NOB.enabled)


def test_rule_gating():
    assert not RULES["R-EMPTY-β"].applies(C(3, petri=False))
    assert RULES["R-G2"].applies(C(2, petri=False))
    assert not RULES["R-N234"].applies(C(2))


def test_consistency_error_names_both_chains(monkeypatch):
    bogus = Rule("R-BOGUS", "nowhere", "nowhere, deliberately wrong")
    monkeypatch.setitem(RULES, "R-BOGUS", bogus)
    monkeypatch.setattr(
        decision, "DIRECT_RULES",
        decision.DIRECT_RULES + (("R-BOGUS", lambda ctx, n, d: [(Target.U, EMPTY, "bogus")]),),
    )
    rules = RuleSet(FULL.enabled | {"R-BOGUS"}, "full")
    with pytest.raises(ConsistencyError) as exc:
        decide(C(3), 3, 7, Target.U, rules)
    ids = {s.rule_id for s in exc.value.first} | {s.rule_id for s in exc.value.second}
    assert "R-BOGUS" in ids and "R-N234" in ids


# --- properties over the test box --------------------------------------------

box = st.tuples(st.integers(0, 20), st.integers(1, 8), st.integers(-3, 80))
targets = st.sampled_from(list(Target))


@settings(max_examples=300, deadline=None)
@given(box)
def test_soundness_guard(q):
    g, n, d = q
    b = oracles.beta_np1(g, n, d)
    if g < 2:
        return
    for t in Target:
        v = decide(C(g), n, d, t)
        if b < 0:
            assert v.status is not NONEMPTY
    if b >= 0:
        assert decide(C(g), n, d, Target.GL).status is not EMPTY


@settings(max_examples=300, deadline=None)
@given(box, st.sampled_from([FULL, NOB]))
def test_promotion(q, rules):
    g, n, d = q
    if decide(C(g), n, d, Target.U, rules).status is NONEMPTY:
        assert decide(C(g), n, d, Target.US, rules).status is NONEMPTY
        assert decide(C(g), n, d, Target.B, rules).status is NONEMPTY


@settings(max_examples=300, deadline=None)
@given(box, targets, st.sampled_from([FULL, NOB]))
def test_shift(q, t, rules):
    g, n, d = q
    if decide(C(g), n, d, t, rules).status is NONEMPTY:
        assert decide(C(g), n, d + n, t, rules).status is NONEMPTY


@settings(max_examples=300, deadline=None)
@given(box, targets)
def test_mode_monotone(q, t):
    g, n, d = q
    if decide(C(g), n, d, t, NOB).status is NONEMPTY:
        assert decide(C(g), n, d, t, FULL).status is NONEMPTY


@settings(max_examples=300, deadline=None)
@given(box, targets, st.booleans())
def test_provenance_complete(q, t, petri):
    g, n, d = q
    v = decide(C(g, petri), n, d, t)
    if v.status is not OPEN:
        assert v.provenance
    for step in v.provenance:
        assert RULES[step.rule_id].anchor in step.citation


def test_determinism_under_concurrency():
    queries = [(g, n, d, t) for g in range(2, 7) for n in (3, 5) for d in range(5, 25) for t in Target]

    def run(q):
        g, n, d, t = q
        return decide(C(g), n, d, t, NOB)

    decision._grid.cache_clear()
    with ThreadPoolExecutor(8) as pool:
        a = list(pool.map(run, queries))
    decision._grid.cache_clear()
    b = [run(q) for q in queries]
    assert a == b
