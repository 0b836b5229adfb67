"""Sample-then-solve streaming algorithms for CC and Monroe elections.

Every algorithm here keeps a random subset of the arriving votes whose size
depends only on (epsilon, k, m), solves the sampled election exactly, and
reports that committee for the whole stream.  Memory use is tracked in
:class:`StreamStats`.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import islice
from typing import Iterable

from streamvote.election import Ballot, Committee, Election, Family, RuleSpec, Vote, ballot_cells, satisfaction_matrix
from streamvote.errors import ParameterError
from streamvote.winner import DEFAULT_ENUMERATION_CAP, exact_winner

DEFAULT_DELTA = 0.5
SAMPLERS = ("reservoir", "bernoulli")


@dataclass(frozen=True)
class SampleParams:
    """Sample sizes for one rule.

    ``t`` is the per-estimate sample size from the rule's concentration
    argument; ``draw_size`` is the number of voters the algorithm keeps
    (``k^2 t`` for positional CC, ``m^2 t`` for Borda Monroe, ``t`` otherwise).
    """

    rule: RuleSpec
    epsilon: float
    k: int
    m: int
    delta: float
    t: int
    draw_size: int

    def retention_probability(self, n: int) -> float:
        """Per-vote keep probability ``min(1, z / (n delta))`` for a stream of ``n`` votes."""
        return 1.0 if n == 0 else min(1.0, self.draw_size / (n * self.delta))


def _exact(epsilon) -> Fraction:
    # str() round-trips the decimal the caller wrote, so 0.1 becomes exactly 1/10
    return Fraction(str(epsilon)) if not isinstance(epsilon, Fraction) else epsilon


def _approval_monroe_size(eps: Fraction, k: int, m: int) -> int:
    # Per member and per satisfied/unsatisfied block, a two-sided Hoeffding
    # bound with deviation eps*t/(2k) fails w.p. 2 exp(-2 t eps^2 / (4 k^2)).
    # Requiring that to be <= m^(-2k) gives t >= 2 k^2 eps^-2 (2k ln m + ln 2);
    # ln 4 instead of ln 2 leaves slack.
    return math.ceil(2 * k * k / eps**2 * (2 * k * math.log(m) + math.log(4)))


def sample_size(rule: RuleSpec, epsilon, k: int, m: int, delta: float = DEFAULT_DELTA) -> SampleParams:
    """Number of voters to keep for an epsilon-approximate answer.

    Logarithms are natural.  Approval-CC keeps ceil(6 eps^-2 k ln m) voters,
    enough for each committee's sampled score to stay within eps*n/2 of its
    true (rescaled) score with probability 1 - m^-k.
    """
    if not 0 < epsilon <= 1:
        raise ParameterError(f"epsilon must lie in (0, 1], got {epsilon}")
    if m < 2:
        raise ParameterError(f"need m >= 2 candidates, got {m}")
    if not 1 <= k <= m:
        raise ParameterError(f"need 1 <= k <= m, got k={k}, m={m}")
    if not 0 < delta <= 1:
        raise ParameterError(f"delta must lie in (0, 1], got {delta}")
    eps = _exact(epsilon)

    if rule.ballot is Ballot.APPROVAL:
        if rule.family is Family.CC:
            t = math.ceil(6 / eps**2 * k * math.log(m))
        else:
            t = _approval_monroe_size(eps, k, m)
        draw = t
    elif rule.family is Family.CC:
        # the per-member estimate is bounded by the top score: m for Borda
        # (the original bound), alpha_1 for any other normalized vector
        top = m if rule.is_borda(m) else rule.max_satisfaction(m)
        t = math.ceil(10 / eps**2 * k * max(top, 1) ** 2)
        draw = k * k * t
    else:
        # m blocks per member and an error of up to `scale` per changed vote
        scale = m if rule.is_borda(m) else max(m, rule.max_satisfaction(m))
        t = _approval_monroe_size(eps / scale, k, m)
        draw = m * m * t
    return SampleParams(rule, float(epsilon), k, m, float(delta), t, draw)


@dataclass
class StreamStats:
    """Space accounting for one sampler run.

    ``stored_ballot_cells`` prices each stored vote at :func:`ballot_cells`.
    """

    votes_seen: int = 0
    votes_stored: int = 0
    peak_stored_votes: int = 0
    stored_ballot_cells: int = 0
    cells_per_vote: int = field(default=0, repr=False)

    def _store(self, delta: int) -> None:
        self.votes_stored += delta
        self.peak_stored_votes = max(self.peak_stored_votes, self.votes_stored)
        self.stored_ballot_cells = self.votes_stored * self.cells_per_vote


def bernoulli_sample(
    votes: Iterable[Vote], n: int, params: SampleParams, seed=None
) -> tuple[Election, StreamStats]:
    """Keep each vote independently with probability ``min(1, z / (n delta))``.

    ``n`` must be the true stream length; ``z`` is ``params.draw_size``.
    """
    m = params.m
    ballot = params.rule.ballot
    stats = StreamStats(cells_per_vote=ballot_cells(m, ballot))
    kept: list[Vote] = []
    if n == 0:
        return Election(m, (), ballot=ballot), stats
    p = params.retention_probability(n)
    rng = random.Random(seed)
    for vote in votes:
        stats.votes_seen += 1
        if p >= 1.0 or rng.random() < p:
            kept.append(vote)
            stats._store(1)
    return Election(m, tuple(kept), ballot=ballot), stats


def _uniform(rng: random.Random) -> float:
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def reservoir_sample(
    votes: Iterable[Vote], t: int | None, seed=None, *, m: int, ballot: Ballot | None = None
) -> tuple[Election, StreamStats]:
    """Uniform sample of ``min(t, n)`` votes in one pass, without knowing ``n``.

    Uses the skip-ahead variant (Li's Algorithm L): after the reservoir fills,
    the gap to the next replacement is drawn geometrically, so the RNG is
    consulted O(t log(n/t)) times.  ``t=None`` keeps every vote.  The
    returned sample lists the reservoir slots in order.
    """
    if t is not None and t < 1:
        raise ParameterError(f"reservoir size must be >= 1, got {t}")
    # zip stops before advancing the counter, so it ends up counting votes read
    counter = itertools.count()
    it = zip(votes, counter)
    rng = random.Random(seed)
    reservoir: list[Vote] = []
    stats = StreamStats(cells_per_vote=ballot_cells(m, ballot or Ballot.APPROVAL))
    for vote, _ in it if t is None else islice(it, t):
        reservoir.append(vote)
        stats._store(1)

    if t is not None and len(reservoir) == t:
        w = math.exp(math.log(_uniform(rng)) / t)
        while True:
            skip = math.floor(math.log(_uniform(rng)) / math.log1p(-w)) if w < 1.0 else 0
            item = next(islice(it, skip, None), None)
            if item is None:
                break
            reservoir[rng.randrange(t)] = item[0]
            w *= math.exp(math.log(_uniform(rng)) / t)
    stats.votes_seen = next(counter)
    return Election(m, tuple(reservoir), ballot=ballot), stats


@dataclass(frozen=True)
class StreamingResult:
    committee: Committee
    stats: StreamStats
    params: SampleParams
    sample: Election
    sample_score: int
    clamped: bool
    wall_time_ms: float


def streaming_winner(
    votes: Iterable[Vote],
    rule: RuleSpec,
    k: int,
    epsilon,
    m: int,
    sampler: str = "reservoir",
    seed=None,
    n: int | None = None,
    delta: float = DEFAULT_DELTA,
    retain_all: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> StreamingResult:
    """Sample the stream, solve the sample exactly, return its smallest winner.

    ``retain_all`` forces retention probability 1 (the sample is the whole
    stream), which makes the answer an exact winner.  ``clamped`` in the
    result is set when the formula asked for at least as many voters as the
    stream holds (only decidable when ``n`` is known or the reservoir never
    filled).  An empty stream yields the lexicographically smallest
    committee, since every committee scores 0.
    """
    if sampler not in SAMPLERS:
        raise ParameterError(f"unknown sampler {sampler!r}; choose from {SAMPLERS}")
    if not 1 <= k <= m:
        raise ParameterError(f"need 1 <= k <= m, got k={k}, m={m}")
    params = sample_size(rule, epsilon, k, m, delta)
    start = time.perf_counter()
    if sampler == "reservoir":
        sample, stats = reservoir_sample(votes, None if retain_all else params.draw_size, seed, m=m, ballot=rule.ballot)
        clamped = retain_all or stats.votes_seen <= params.draw_size
    else:
        if n is None:
            raise ParameterError("the Bernoulli sampler needs the stream length n")
        run_params = replace(params, draw_size=max(params.draw_size, math.ceil(n * delta))) if retain_all else params
        sample, stats = bernoulli_sample(votes, n, run_params, seed)
        clamped = run_params.retention_probability(n) >= 1.0
    sat = satisfaction_matrix(sample, rule)
    result = exact_winner(sample, rule, k, cap=cap, sat=sat)
    elapsed = (time.perf_counter() - start) * 1000.0
    return StreamingResult(result.winner, stats, params, sample, result.opt_score, clamped, elapsed)
