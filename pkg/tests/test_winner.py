import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamvote.election import Committee, Election, RuleSpec, Vote, loads
from streamvote.errors import ParameterError, ScaleError
from streamvote.generators import GadgetSpec, gen_disjointness_approval
from streamvote.winner import (
    committee_score,
    epsilon_gap_check,
    exact_epsilon_winning_oracle,
    exact_winner,
)

ACC = RuleSpec.approval_cc()
ALL_RULES = [RuleSpec.approval_cc(), RuleSpec.approval_monroe(), RuleSpec.borda_cc(), RuleSpec.borda_monroe()]


def approval(m, *ballots):
    return Election(m, tuple(Vote.approval(b) for b in ballots))


def coverage(election, members):
    """Max-Cover view of Approval-CC: voters whose ballot meets the committee."""
    return sum(1 for v in election.votes if v.approved & set(members))


def test_committee_score_examples():
    e = approval(3, [0], [0, 1], [2])
    assert committee_score(e, ACC, Committee((0, 2))) == 3
    assert coverage(e, (0, 2)) == 3
    assert committee_score(loads("borda 2\n0 1\n"), RuleSpec.borda_cc(), Committee((1,))) == 0


def test_exact_winner_plurality_like():
    result = exact_winner(approval(2, [0], [0], [1]), ACC, 1)
    assert result.winners == (Committee((0,)),)
    assert result.opt_score == 2


def test_exact_winner_full_committee_covers_every_approver():
    e = approval(3, [0], [], [1, 2], [], [2])
    result = exact_winner(e, ACC, 3)
    assert result.winners == (Committee((0, 1, 2)),)
    assert result.opt_score == 3


def test_exact_winner_on_disjoint_gadget():
    inst = gen_disjointness_approval(GadgetSpec(3, {0}, {2}))
    result = exact_winner(inst.election, ACC, 1)
    assert result.winners == (Committee((3,)),)
    assert result.opt_score == 3


def test_exact_winner_lists_ties_in_canonical_order():
    result = exact_winner(approval(3, [2], [0], [1]), ACC, 2, keep_scores=True)
    assert result.winners == (Committee((0, 1)), Committee((0, 2)), Committee((1, 2)))
    assert result.winner == Committee((0, 1))
    assert set(result.scores.values()) == {2}


def test_exact_winner_guards():
    with pytest.raises(ParameterError):
        exact_winner(approval(2, [0]), ACC, 3)
    with pytest.raises(ScaleError):
        exact_winner(approval(30, [0]), ACC, 15)
    with pytest.raises(ScaleError):
        exact_winner(approval(6, [0]), ACC, 3, cap=10)


def test_gap_check_arithmetic():
    # ten voters; optimum covers 10, committee {1} covers 9 then 8
    base = [[0, 1]] * 8 + [[0]] * 2
    one_short = approval(2, *base[:9], [0])
    report = epsilon_gap_check(one_short, ACC, 1, Committee((1,)), 0.1)
    assert (report.gap, report.tolerance, report.passed) == (2, 1.0, False)
    e = approval(2, *([[0, 1]] * 9), [0])
    report = epsilon_gap_check(e, ACC, 1, Committee((1,)), 0.1)
    assert (report.gap, bool(report)) == (1, True)
    winner = epsilon_gap_check(e, ACC, 1, Committee((0,)), 0.1)
    assert winner.gap == 0 and winner.passed


def test_gap_check_scales_tolerance_by_top_score_for_borda():
    e = loads("borda 4\n0 1 2 3\n3 2 1 0\n")
    report = epsilon_gap_check(e, RuleSpec.borda_cc(), 1, Committee((1,)), 0.5)
    assert report.tolerance == 0.5 * 2 * 3


def test_epsilon_oracle_examples():
    e = approval(2, [0], [0], [1])
    assert exact_epsilon_winning_oracle(e, ACC, 1, Committee((0,)), Fraction(1, 3))
    # one change turns a {0}-voter into a {1}-voter, tying {1} at 2
    assert exact_epsilon_winning_oracle(e, ACC, 1, Committee((1,)), Fraction(1, 3))
    assert not exact_epsilon_winning_oracle(e, ACC, 1, Committee((1,)), Fraction(1, 4))


def test_epsilon_oracle_monroe_and_scale_guard():
    e = approval(3, [0], [0], [0], [1])
    assert exact_epsilon_winning_oracle(e, RuleSpec.approval_monroe(), 2, Committee((0, 1)), 0.25)
    with pytest.raises(ScaleError):
        exact_epsilon_winning_oracle(approval(2, *[[0]] * 7), ACC, 1, Committee((0,)), 0.1)
    with pytest.raises(ScaleError):
        exact_epsilon_winning_oracle(approval(2, *[[0]] * 6), ACC, 1, Committee((0,)), 0.5)


@st.composite
def elections(draw, ballot="approval", max_n=8, max_m=5):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(0, max_n))
    if ballot == "approval":
        votes = [Vote.approval(draw(st.sets(st.integers(0, m - 1)))) for _ in range(n)]
    else:
        votes = [Vote.ranked(draw(st.permutations(list(range(m))))) for _ in range(n)]
    k = draw(st.integers(1, min(3, m)))
    return Election(m, tuple(votes)), k


@settings(max_examples=100, deadline=None)
@given(elections())
def test_approval_cc_equals_max_cover(data):
    e, k = data
    best = max(coverage(e, c) for c in itertools.combinations(range(e.m), k))
    assert exact_winner(e, ACC, k).opt_score == best


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ALL_RULES), st.data())
def test_anonymity_and_homogeneity(rule, data):
    e, k = data.draw(elections("approval" if rule.ballot.value == "approval" else "borda", max_n=6))
    result = exact_winner(e, rule, k)
    perm = data.draw(st.permutations(list(range(e.n))))
    assert exact_winner(Election(e.m, tuple(e.votes[i] for i in perm)), rule, k) == result
    if rule.family.value == "cc":
        doubled = exact_winner(Election(e.m, e.votes + e.votes), rule, k)
        assert doubled.opt_score == 2 * result.opt_score
        assert doubled.winners == result.winners


def test_exact_winner_agrees_with_per_committee_scores():
    e = loads("borda 4\n0 1 2 3\n3 2 1 0\n1 3 0 2\n2 0 3 1\n1 0 2 3\n")
    for rule in (RuleSpec.borda_cc(), RuleSpec.borda_monroe()):
        result = exact_winner(e, rule, 2, keep_scores=True)
        for c, s in result.scores.items():
            assert s == committee_score(e, rule, c)
        assert result.opt_score == max(result.scores.values())


def test_zero_gap_passes_both_checks():
    e = approval(3, [0], [1, 2], [2], [0, 1])
    for c in exact_winner(e, ACC, 2).winners:
        assert epsilon_gap_check(e, ACC, 2, c, 0.25)
        assert exact_epsilon_winning_oracle(e, ACC, 2, c, 0.25)
