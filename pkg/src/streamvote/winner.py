"""Exact winner determination by committee enumeration, plus epsilon-quality checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from streamvote.assignment import cc_score_from_matrix, monroe_score_from_matrix
from streamvote.election import Ballot, Committee, Election, Family, RuleSpec, Vote, satisfaction_matrix
from streamvote.errors import BallotTypeError, ParameterError, ScaleError

DEFAULT_ENUMERATION_CAP = 10**6

# CC scoring is vectorised over blocks of committees; keep each block's
# (n, block, k) gather under this many cells.
_CC_BLOCK_CELLS = 1 << 22


@dataclass(frozen=True)
class WinnerResult:
    winners: tuple[Committee, ...]
    opt_score: int
    scores: dict[Committee, int] | None = None

    @property
    def winner(self) -> Committee:
        """Lexicographically smallest winning committee."""
        return self.winners[0]


def _score_fn(rule: RuleSpec):
    return monroe_score_from_matrix if rule.family is Family.MONROE else cc_score_from_matrix


def _check_rule(election: Election, rule: RuleSpec) -> None:
    if election.n and election.ballot is not rule.ballot:
        raise BallotTypeError(f"{rule.name} cannot score a {election.ballot.value} election")


def committee_score(election: Election, rule: RuleSpec, committee: Committee, sat: np.ndarray | None = None) -> int:
    """Total satisfaction of ``committee`` under the rule's optimal assignment."""
    _check_rule(election, rule)
    committee.validate(election.m)
    if sat is None:
        sat = satisfaction_matrix(election, rule)
    return int(_score_fn(rule)(sat, committee.members))


def _cc_scores(sat: np.ndarray, combos: np.ndarray) -> np.ndarray:
    n = sat.shape[0]
    if n == 0:
        return np.zeros(len(combos), dtype=np.int64)
    k = combos.shape[1]
    block = max(1, _CC_BLOCK_CELLS // max(1, n * k))
    out = np.empty(len(combos), dtype=np.int64)
    for start in range(0, len(combos), block):
        chunk = combos[start : start + block]
        out[start : start + len(chunk)] = sat[:, chunk].max(axis=2).sum(axis=0)
    return out


def exact_winner(
    election: Election,
    rule: RuleSpec,
    k: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    keep_scores: bool = False,
    sat: np.ndarray | None = None,
) -> WinnerResult:
    """Enumerate all size-``k`` committees and return every optimum.

    Winners are listed in canonical (lexicographic) order.
    """
    m = election.m
    if not 1 <= k <= m:
        raise ParameterError(f"need 1 <= k <= m, got k={k}, m={m}")
    total = math.comb(m, k)
    if total > cap:
        raise ScaleError(f"C({m},{k}) = {total} committees exceeds the enumeration cap {cap}")
    _check_rule(election, rule)
    if sat is None:
        sat = satisfaction_matrix(election, rule)
    combos = np.array(list(itertools.combinations(range(m), k)), dtype=np.int64)
    if rule.family is Family.CC:
        scores = _cc_scores(sat, combos)
    else:
        scores = np.array([monroe_score_from_matrix(sat, row) for row in combos], dtype=np.int64)
    best = int(scores.max())
    winners = tuple(Committee(tuple(int(c) for c in combos[i])) for i in np.flatnonzero(scores == best))
    table = None
    if keep_scores:
        table = {Committee(tuple(int(c) for c in row)): int(s) for row, s in zip(combos, scores)}
    return WinnerResult(winners, best, table)


@dataclass(frozen=True)
class GapReport:
    passed: bool
    opt_score: int
    returned_score: int
    gap: int
    tolerance: float

    def __bool__(self):
        return self.passed


def score_unit(rule: RuleSpec, m: int) -> int:
    """Largest change one vote can make to a committee score (1 for approval, alpha_1 otherwise)."""
    return rule.max_satisfaction(m)


def epsilon_gap_check(
    election: Election,
    rule: RuleSpec,
    k: int,
    returned: Committee,
    epsilon: float,
    opt_score: int | None = None,
    sat: np.ndarray | None = None,
) -> GapReport:
    """Additive surrogate for epsilon-winning: ``opt - score(returned) <= eps * n * unit``.

    ``opt_score`` may be supplied when the optimum is already known.
    """
    if not 0 < epsilon <= 1:
        raise ParameterError(f"epsilon must lie in (0, 1], got {epsilon}")
    if returned.k != k:
        raise ParameterError(f"returned committee has {returned.k} members, expected {k}")
    if sat is None:
        sat = satisfaction_matrix(election, rule)
    if opt_score is None:
        opt_score = exact_winner(election, rule, k, sat=sat).opt_score
    got = committee_score(election, rule, returned, sat=sat)
    gap = opt_score - got
    tolerance = epsilon * election.n * score_unit(rule, election.m)
    return GapReport(gap <= tolerance, int(opt_score), got, int(gap), tolerance)


ORACLE_MAX_VOTERS = 6
ORACLE_MAX_CANDIDATES = 4
ORACLE_MAX_CHANGES = 2


def exact_epsilon_winning_oracle(election: Election, rule: RuleSpec, k: int, returned: Committee, epsilon: float) -> bool:
    """Can ``returned`` become a winner by replacing at most floor(eps*n) ballots?

    Exhaustive over every choice of changed voters and every replacement
    approval ballot.  Approval ballots only, n <= 6, m <= 4, floor(eps*n) <= 2.
    """
    n, m = election.n, election.m
    if rule.ballot is not Ballot.APPROVAL:
        raise ScaleError("exact epsilon-winning oracle supports approval ballots only")
    changes = math.floor(epsilon * n + 1e-12)
    if n > ORACLE_MAX_VOTERS or m > ORACLE_MAX_CANDIDATES or changes > ORACLE_MAX_CHANGES:
        raise ScaleError(f"oracle scale exceeded: n={n}, m={m}, floor(eps*n)={changes}")
    if not 1 <= k <= m:
        raise ParameterError(f"need 1 <= k <= m, got k={k}, m={m}")
    returned.validate(m)
    _check_rule(election, rule)

    committees = [Committee(c) for c in itertools.combinations(range(m), k)]
    target = committees.index(returned)
    ballots = [frozenset(s) for r in range(m + 1) for s in itertools.combinations(range(m), r)]
    ballot_id = {b: i for i, b in enumerate(ballots)}
    voters = [ballot_id[v.approved] for v in election.votes]

    # score of every committee for every multiset of ballots is needed; for CC
    # it is additive over voters, for Monroe it is recomputed per election
    if rule.family is Family.CC:
        cover = np.array([[int(bool(b & set(c.members))) for c in committees] for b in ballots], dtype=np.int64)
        base = cover[voters].sum(axis=0) if n else np.zeros(len(committees), dtype=np.int64)

        def is_winner(removed, added):
            scores = base.copy()
            for b in removed:
                scores -= cover[b]
            for b in added:
                scores += cover[b]
            return scores[target] >= scores.max()

    else:

        def is_winner(removed, added):
            votes = list(voters)
            for b in removed:
                votes.remove(b)
            votes += added
            modified = Election(m, tuple(Vote(approved=ballots[b]) for b in votes), ballot=Ballot.APPROVAL)
            return returned in exact_winner(modified, rule, k).winners

    if is_winner((), ()):
        return True
    for r in range(1, changes + 1):
        for chosen in itertools.combinations(range(n), r):
            removed = [voters[i] for i in chosen]
            for added in itertools.product(range(len(ballots)), repeat=r):
                if is_winner(removed, added):
                    return True
    return False
