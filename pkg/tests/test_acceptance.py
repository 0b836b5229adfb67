"""Acceptance suite: nine numbered criteria, each reported as PASS/FAIL at the end of the run."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from streamvote.assignment import brute_force_monroe_oracle, monroe_assign
from streamvote.election import Committee, Election, RuleSpec, Vote
from streamvote.experiment import ExperimentConfig, csv_text, run_experiment
from streamvote.generators import (
    GadgetSpec,
    GadgetVariant,
    gen_disjointness_approval,
    gen_disjointness_borda,
    gen_impartial_approval,
)
from streamvote.streaming import sample_size, streaming_winner
from streamvote.winner import (
    committee_score,
    epsilon_gap_check,
    exact_epsilon_winning_oracle,
    exact_winner,
)

ACC = RuleSpec.approval_cc()
RULES = [ACC, RuleSpec.approval_monroe(), RuleSpec.borda_cc(), RuleSpec.borda_monroe()]


def random_election(rng, rule, n, m):
    if rule.ballot.value == "approval":
        return Election(m, tuple(Vote.approval(np.flatnonzero(rng.random(m) < 0.4).tolist()) for _ in range(n)))
    return Election(m, tuple(Vote.ranked(rng.permutation(m).tolist()) for _ in range(n)))


def subsets(u):
    return [frozenset(s) for r in range(u + 1) for s in itertools.combinations(range(u), r)]


@pytest.mark.acceptance(1, "oracle equivalence at retention 1")
def test_oracle_equivalence(record_property):
    rng = np.random.default_rng(20240601)
    checked = 0
    for i in range(200):
        rule = RULES[i % 4]
        m = int(rng.integers(2, 7))
        n = int(rng.integers(0, 13))
        k = int(rng.integers(1, min(3, m) + 1))
        e = random_election(rng, rule, n, m)
        winners = exact_winner(e, rule, k).winners
        for sampler in ("reservoir", "bernoulli"):
            result = streaming_winner(iter(e.votes), rule, k, 0.25, m=m, sampler=sampler, seed=i, n=n, retain_all=True)
            assert result.stats.votes_stored == n
            assert result.committee in winners, (i, rule.name, sampler)
        checked += 1
    record_property("detail", f"{checked} instances x 2 samplers")
    assert checked == 200


@pytest.mark.acceptance(2, "Monroe assignment optimality")
def test_monroe_optimality(record_property):
    rng = np.random.default_rng(77)
    for i in range(200):
        rule = RULES[1] if i % 2 == 0 else RULES[3]
        m = int(rng.integers(2, 6))
        n = int(rng.integers(0, 9))
        k = int(rng.integers(1, min(3, m) + 1))
        e = random_election(rng, rule, n, m)
        committee = Committee(tuple(rng.choice(m, k, replace=False).tolist()))
        fast = monroe_assign(e, rule, committee)
        assert fast.total_satisfaction == brute_force_monroe_oracle(e, rule, committee).total_satisfaction
        loads = fast.load(committee)
        assert all(n // k <= x <= -(-n // k) for x in loads.values())
        assert sum(x == -(-n // k) for x in loads.values()) == (n % k if n % k else k)
        assert sum(loads.values()) == n
    record_property("detail", "200 instances")


@pytest.mark.acceptance(3, "Approval-CC equals Max-Cover")
def test_max_cover(record_property):
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = int(rng.integers(2, 7))
        n = int(rng.integers(0, 13))
        k = int(rng.integers(1, min(3, m) + 1))
        sets = [frozenset(np.flatnonzero(rng.random(m) < 0.35).tolist()) for _ in range(n)]
        e = Election(m, tuple(Vote.approval(s) for s in sets))
        best = 0
        for members in itertools.combinations(range(m), k):
            covered = sum(1 for s in sets if not s.isdisjoint(members))
            assert committee_score(e, ACC, Committee(members)) == covered
            best = max(best, covered)
        assert exact_winner(e, ACC, k).opt_score == best
    record_property("detail", "100 instances, every committee")


def run_batch(config):
    summary = run_experiment(config)
    assert summary.errors == 0, [r.error for r in summary.records if r.error]
    return summary


@pytest.mark.acceptance(4, "Approval-CC streaming approximation")
def test_approval_cc_experiment(record_property):
    config = ExperimentConfig(rule="approval-cc", k=2, eps=0.2, trials=50, n=10_000, m=6, p=0.3,
                              generator="impartial-approval")
    summary = run_batch(config)
    assert all(r.peak_stored_votes == r.draw_size == 538 for r in summary.records)
    record_property("detail", f"success rate {summary.success_rate:.2f} over 50 trials, threshold 0.9")
    assert summary.success_rate >= 0.9


@pytest.mark.acceptance(5, "Borda-CC streaming approximation")
def test_borda_cc_experiment(record_property):
    config = ExperimentConfig(rule="borda-cc", k=2, eps=0.3, trials=30, n=10_000, m=5,
                              generator="impartial-borda")
    summary = run_batch(config)
    # draw size 4 * ceil(10 * 0.3^-2 * 2 * 25) = 22224 exceeds n, so every trial is clamped
    assert all(r.draw_size == 22224 and r.clamped for r in summary.records)
    assert all(r.tolerance == pytest.approx(0.3 * 10_000 * 4) for r in summary.records)
    text = csv_text(summary)
    clamped_col = text.splitlines()[0].split(",").index("clamped")
    assert all(row.split(",")[clamped_col] == "1" for row in text.splitlines()[1:-1])
    record_property("detail", f"success rate {summary.success_rate:.2f} over 30 trials, all clamped")
    assert summary.success_rate >= 0.9


@pytest.mark.acceptance(6, "space independent of n")
def test_space_independence(record_property):
    params = sample_size(ACC, 0.2, 2, 6)
    bound = params.draw_size / params.delta
    reservoir, bernoulli = {}, {}
    for n in (10**3, 10**4, 10**5):
        e = gen_impartial_approval(n, 6, 0.3, seed=n)
        r = streaming_winner(iter(e.votes), ACC, 2, 0.2, m=6, seed=1)
        b = streaming_winner(iter(e.votes), ACC, 2, 0.2, m=6, sampler="bernoulli", seed=1, n=n)
        assert r.stats.votes_seen == b.stats.votes_seen == n
        reservoir[n] = r.stats.peak_stored_votes
        bernoulli[n] = b.stats.peak_stored_votes
    assert len(set(reservoir.values())) == 1
    assert all(bound / 4 <= peak <= 4 * bound for peak in bernoulli.values())
    record_property("detail", f"reservoir peaks {sorted(reservoir.values())}, bernoulli peaks {list(bernoulli.values())}, draw/delta {bound:.0f}")


@pytest.mark.acceptance(7, "disjointness gadget constants")
def test_gadget_constants(record_property):
    u = 3
    pairs = 0
    for a, b in itertools.product(subsets(u), repeat=2):
        inst = gen_disjointness_approval(GadgetSpec(u, a, b))
        e, d = inst.election, inst.d
        cover = [sum(1 for v in e.votes if c in v.approved) for c in range(e.m)]
        assert cover[d] == 3
        for i in range(u):
            assert (cover[i] == 4) if i in a & b else (cover[i] <= 2)
        unique_d = exact_winner(e, ACC, 1).winners == (Committee((d,)),)
        assert unique_d == (not a & b)

        inst = gen_disjointness_borda(GadgetSpec(u, a, b, GadgetVariant.BORDA_DISJOINTNESS))
        e = inst.election
        s = [committee_score(e, RuleSpec.borda_cc(), Committee((c,))) for c in range(e.m)]
        assert s[d] == 18
        assert all(s[i] >= 20 for i in a & b)
        assert max(s[u + 1 :]) <= 15
        unique_d = exact_winner(e, RuleSpec.borda_cc(), 1).winners == (Committee((d,)),)
        assert unique_d == (not a & b)
        pairs += 1
    assert pairs == 64
    # the approval gadget is cheap enough to sweep the 64 x 64 pairs of u = 6 as well
    wide = 0
    for a, b in itertools.product(subsets(6), repeat=2):
        e = gen_disjointness_approval(GadgetSpec(6, a, b)).election
        cover = [sum(1 for v in e.votes if c in v.approved) for c in range(7)]
        assert cover[6] == 3 and all(cover[i] == (4 if i in a & b else 2 * (i in a) + 2 * (i in b)) for i in range(6))
        assert (exact_winner(e, ACC, 1).winners == (Committee((6,)),)) == (not a & b)
        wide += 1
    assert wide == 4096
    record_property("detail", f"u=3: {pairs} pairs, both gadgets; u=6: {wide} pairs, approval gadget")


@pytest.mark.acceptance(8, "golden sample sizes")
def test_golden_sample_sizes(record_property):
    # Approval-CC: ceil(6 * 0.5^-2 * 1 * ln 2) = ceil(16.636) = 17
    assert sample_size(ACC, 0.5, 1, 2).draw_size == 17
    # Borda-CC: 1^2 * ceil(10 * 1^-2 * 1 * 2^2) = 40
    assert sample_size(RuleSpec.borda_cc(), 1.0, 1, 2).draw_size == 40
    record_property("detail", "17 and 40")


def approval_multisets(n, m):
    ballots = [frozenset(s) for r in range(m + 1) for s in itertools.combinations(range(m), r)]
    for combo in itertools.combinations_with_replacement(ballots, n):
        yield Election(m, tuple(Vote.approval(s) for s in combo))


@pytest.mark.acceptance(9, "epsilon-winning oracle consistency")
def test_epsilon_oracle_consistency(record_property):
    checked = 0
    for m in (2, 3):
        for n in range(1, 6):
            for e in approval_multisets(n, m):
                opt = exact_winner(e, ACC, 1).opt_score
                for j in (1, 2):
                    eps = Fraction(j, n)
                    if eps > 1:
                        continue
                    for c in range(m):
                        committee = Committee((c,))
                        if epsilon_gap_check(e, ACC, 1, committee, eps, opt_score=opt).passed:
                            assert exact_epsilon_winning_oracle(e, ACC, 1, committee, eps), (e, c, eps)
                            checked += 1
    record_property("detail", f"{checked} passing (election, committee, epsilon) triples confirmed")
    assert checked > 0
