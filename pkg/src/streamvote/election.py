"""Votes, elections, committees and satisfaction functions.

Candidates are dense 0-based indices.  A vote is either an approval set or a
full ranking (position 0 is the most preferred candidate).  The text stream
format understood by :func:`read_stream` / :func:`write_stream` is::

    approval 5          <- header: ballot type and candidate count
    0 2                 <- one vote per line
                        <- an empty approval line is a voter approving nobody
    # comment lines are skipped

Rankings are written most-preferred first, e.g. ``2 0 1`` for c2 > c0 > c1.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from streamvote.errors import BallotTypeError, InvalidCommitteeError, ParameterError, ParseError


class Ballot(enum.Enum):
    APPROVAL = "approval"
    POSITIONAL = "positional"


class Family(enum.Enum):
    CC = "cc"
    MONROE = "monroe"


@dataclass(frozen=True, slots=True)
class Vote:
    """A single ballot; exactly one of ``approved`` / ``ranking`` is set.

    Use :meth:`approval` and :meth:`ranked` rather than the raw constructor.
    """

    approved: frozenset[int] | None = None
    ranking: tuple[int, ...] | None = None

    def __post_init__(self):
        if (self.approved is None) == (self.ranking is None):
            raise ValueError("a vote is either an approval set or a ranking")
        if self.ranking is not None and sorted(self.ranking) != list(range(len(self.ranking))):
            raise ValueError(f"ranking {self.ranking} is not a permutation")
        if self.approved is not None and any(c < 0 for c in self.approved):
            raise ValueError("candidate indices are non-negative")

    @classmethod
    def approval(cls, candidates: Iterable[int]) -> Vote:
        cands = list(candidates)
        approved = frozenset(cands)
        if len(approved) != len(cands):
            raise ValueError(f"duplicate candidate in approval ballot {cands}")
        return cls(approved=approved)

    @classmethod
    def ranked(cls, order: Sequence[int]) -> Vote:
        return cls(ranking=tuple(order))

    @property
    def ballot(self) -> Ballot:
        return Ballot.APPROVAL if self.approved is not None else Ballot.POSITIONAL

    def position(self, candidate: int) -> int:
        """1-based rank of ``candidate`` in a ranking vote."""
        if self.ranking is None:
            raise BallotTypeError("approval ballots carry no positions")
        return self.ranking.index(candidate) + 1

    def __repr__(self):
        if self.approved is not None:
            return f"Vote.approval({sorted(self.approved)})"
        return f"Vote.ranked({list(self.ranking)})"


@dataclass(frozen=True)
class Election:
    """``m`` candidates and an ordered tuple of same-variant votes."""

    m: int
    votes: tuple[Vote, ...] = ()
    ballot: Ballot | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError(f"an election needs at least one candidate, got m={self.m}")
        object.__setattr__(self, "votes", tuple(self.votes))
        ballot = self.ballot
        for vote in self.votes:
            if ballot is None:
                ballot = vote.ballot
            elif vote.ballot is not ballot:
                raise BallotTypeError("all votes of an election share one ballot type")
            if vote.approved is not None:
                if vote.approved and max(vote.approved) >= self.m:
                    raise ParameterError(f"{vote!r} names a candidate >= m={self.m}")
            elif len(vote.ranking) != self.m:
                raise ParameterError(f"{vote!r} does not rank all m={self.m} candidates")
        object.__setattr__(self, "ballot", ballot)

    @property
    def n(self) -> int:
        return len(self.votes)

    def __len__(self):
        return len(self.votes)

    def __iter__(self) -> Iterator[Vote]:
        return iter(self.votes)


@dataclass(frozen=True, order=True)
class Committee:
    """Sorted tuple of distinct candidate indices.

    Ordering is lexicographic on the sorted members, which is the canonical
    order used for tie-breaking.
    """

    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(int(c) for c in self.members))
        if len(set(members)) != len(members):
            raise InvalidCommitteeError(f"duplicate members in {members}")
        if members and members[0] < 0:
            raise InvalidCommitteeError(f"negative candidate index in {members}")
        object.__setattr__(self, "members", members)

    @property
    def k(self) -> int:
        return len(self.members)

    def validate(self, m: int) -> None:
        if not self.members:
            raise InvalidCommitteeError("committee is empty")
        if self.members[-1] >= m:
            raise InvalidCommitteeError(f"committee {self.members} names a candidate >= m={m}")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, candidate):
        return candidate in self.members

    def __str__(self):
        return "{" + ", ".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class RuleSpec:
    """Which rule is in force.

    For positional ballots ``score_vector=None`` means Borda for whatever
    ``m`` the election has.  An explicit vector must be normalized: integer,
    non-increasing, ending in 0, with its smallest non-zero entry equal to 1
    (the all-zero vector is tolerated; every committee then ties).
    """

    family: Family
    ballot: Ballot
    score_vector: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        vec = self.score_vector
        if vec is None:
            return
        if self.ballot is not Ballot.POSITIONAL:
            raise ParameterError("score vectors only apply to positional rules")
        vec = tuple(int(a) for a in vec)
        if len(vec) < 1:
            raise ParameterError("empty score vector")
        if any(a < b for a, b in zip(vec, vec[1:])):
            raise ParameterError(f"score vector {vec} is not non-increasing")
        if vec[-1] != 0:
            raise ParameterError(f"score vector {vec} must end with 0")
        nonzero = [a for a in vec if a]
        if nonzero and nonzero[-1] != 1:
            raise ParameterError(f"score vector {vec} is not normalized (smallest non-zero entry must be 1)")
        object.__setattr__(self, "score_vector", vec)

    @classmethod
    def approval_cc(cls):
        return cls(Family.CC, Ballot.APPROVAL)

    @classmethod
    def approval_monroe(cls):
        return cls(Family.MONROE, Ballot.APPROVAL)

    @classmethod
    def borda_cc(cls):
        return cls(Family.CC, Ballot.POSITIONAL)

    @classmethod
    def borda_monroe(cls):
        return cls(Family.MONROE, Ballot.POSITIONAL)

    @classmethod
    def positional(cls, vector, family=Family.CC):
        return cls(family, Ballot.POSITIONAL, tuple(vector))

    @classmethod
    def from_name(cls, name: str, score_vector=None) -> RuleSpec:
        """Parse names like ``approval-cc``, ``borda-m`` or ``positional-monroe``."""
        try:
            ballot_name, family_name = name.lower().rsplit("-", 1)
        except ValueError:
            raise ParameterError(f"unknown rule {name!r}") from None
        families = {"cc": Family.CC, "m": Family.MONROE, "monroe": Family.MONROE}
        if family_name not in families:
            raise ParameterError(f"unknown rule {name!r}")
        family = families[family_name]
        if ballot_name == "approval" and score_vector is None:
            return cls(family, Ballot.APPROVAL)
        if ballot_name == "borda" and score_vector is None:
            return cls(family, Ballot.POSITIONAL)
        if ballot_name == "positional" and score_vector is not None:
            return cls(family, Ballot.POSITIONAL, tuple(score_vector))
        raise ParameterError(f"unknown rule {name!r} (positional rules need a score vector)")

    @property
    def name(self) -> str:
        family = "cc" if self.family is Family.CC else "m"
        if self.ballot is Ballot.APPROVAL:
            return f"approval-{family}"
        if self.score_vector is None:
            return f"borda-{family}"
        return f"positional-{family}"

    def vector(self, m: int) -> np.ndarray:
        """Score awarded per 0-based position for an ``m``-candidate election."""
        if self.ballot is not Ballot.POSITIONAL:
            raise BallotTypeError(f"{self.name} has no score vector")
        if self.score_vector is None:
            return np.arange(m - 1, -1, -1, dtype=np.int64)
        if len(self.score_vector) != m:
            raise ParameterError(f"score vector has {len(self.score_vector)} entries but m={m}")
        return np.asarray(self.score_vector, dtype=np.int64)

    def is_borda(self, m: int) -> bool:
        return self.ballot is Ballot.POSITIONAL and (
            self.score_vector is None or self.score_vector == tuple(range(m - 1, -1, -1))
        )

    def max_satisfaction(self, m: int) -> int:
        """Largest satisfaction a single voter can get (1 for approval)."""
        if self.ballot is Ballot.APPROVAL:
            return 1
        return int(self.vector(m)[0])


def satisfaction(rule: RuleSpec, vote: Vote, candidate: int, m: int | None = None) -> int:
    """Satisfaction of ``vote`` when represented by ``candidate``.

    ``m`` is only needed for approval votes, to range-check the candidate.
    """
    if vote.ballot is not rule.ballot:
        raise BallotTypeError(f"{rule.name} cannot score a {vote.ballot.value} ballot")
    if vote.approved is not None:
        if candidate < 0 or (m is not None and candidate >= m):
            raise ParameterError(f"candidate {candidate} out of range")
        return int(candidate in vote.approved)
    size = len(vote.ranking)
    if not 0 <= candidate < size:
        raise ParameterError(f"candidate {candidate} out of range")
    return int(rule.vector(size)[vote.position(candidate) - 1])


def satisfaction_matrix(election: Election, rule: RuleSpec) -> np.ndarray:
    """``(n, m)`` integer matrix of per-voter, per-candidate satisfaction."""
    n, m = election.n, election.m
    if n and election.ballot is not rule.ballot:
        raise BallotTypeError(f"{rule.name} cannot score a {election.ballot.value} election")
    if rule.ballot is Ballot.APPROVAL:
        sat = np.zeros((n, m), dtype=np.int64)
        for i, vote in enumerate(election.votes):
            if vote.approved:
                sat[i, list(vote.approved)] = 1
        return sat
    vec = rule.vector(m)
    if n == 0:
        return np.zeros((0, m), dtype=np.int64)
    order = np.array([vote.ranking for vote in election.votes], dtype=np.int64)
    sat = np.empty((n, m), dtype=np.int64)
    np.put_along_axis(sat, order, np.broadcast_to(vec, (n, m)), axis=1)
    return sat


# -- text stream format -------------------------------------------------------

_HEADER_BALLOTS = {"approval": Ballot.APPROVAL, "borda": Ballot.POSITIONAL}


def parse_stream_header(line: str, lineno: int = 1) -> tuple[int, Ballot]:
    parts = line.split()
    if len(parts) != 2 or parts[0].lower() not in _HEADER_BALLOTS:
        raise ParseError(f"expected '<approval|borda> <m>', got {line.strip()!r}", lineno)
    try:
        m = int(parts[1])
    except ValueError:
        raise ParseError(f"candidate count {parts[1]!r} is not an integer", lineno) from None
    if m < 1:
        raise ParseError(f"candidate count must be >= 1, got {m}", lineno)
    return m, _HEADER_BALLOTS[parts[0].lower()]


def parse_vote(line: str, m: int, ballot: Ballot, lineno: int | None = None) -> Vote:
    try:
        indices = [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"non-integer token in {line.strip()!r}", lineno) from None
    bad = [c for c in indices if not 0 <= c < m]
    if bad:
        raise ParseError(f"candidate index {bad[0]} out of range [0, {m})", lineno)
    if len(set(indices)) != len(indices):
        raise ParseError(f"duplicate candidate index in {line.strip()!r}", lineno)
    if ballot is Ballot.APPROVAL:
        return Vote(approved=frozenset(indices))
    if len(indices) != m:
        raise ParseError(f"ranking lists {len(indices)} of {m} candidates", lineno)
    return Vote(ranking=tuple(indices))


def serialize_vote(vote: Vote) -> str:
    if vote.approved is not None:
        return " ".join(map(str, sorted(vote.approved)))
    return " ".join(map(str, vote.ranking))


def format_header(m: int, ballot: Ballot) -> str:
    return f"{'approval' if ballot is Ballot.APPROVAL else 'borda'} {m}"


class VoteStream:
    """Lazy reader over a vote-stream file; yields :class:`Vote` objects.

    The header is parsed eagerly so ``m`` and ``ballot`` are available before
    iteration.  Iterating consumes the underlying file once.
    """

    def __init__(self, fh: TextIO, close: bool = False):
        self._fh = fh
        self._close = close
        self._lineno = 0
        for line in fh:
            self._lineno += 1
            if line.lstrip().startswith("#"):
                continue
            self.m, self.ballot = parse_stream_header(line, self._lineno)
            break
        else:
            raise ParseError("empty stream: missing header", self._lineno or 1)

    def __iter__(self) -> Iterator[Vote]:
        try:
            for raw in self._fh:
                self._lineno += 1
                line = raw.rstrip("\r\n")
                if line.lstrip().startswith("#"):
                    continue
                yield parse_vote(line, self.m, self.ballot, self._lineno)
        finally:
            if self._close:
                self._fh.close()


def read_stream(source: str | TextIO) -> VoteStream:
    """Open ``source`` (a path, or an open text file) as a :class:`VoteStream`."""
    if isinstance(source, str):
        fh = open(source, encoding="utf-8")
        try:
            return VoteStream(fh, close=True)
        except Exception:
            fh.close()
            raise
    return VoteStream(source)


def read_election(source: str | TextIO) -> Election:
    stream = read_stream(source)
    return Election(stream.m, tuple(stream), ballot=stream.ballot)


def loads(text: str) -> Election:
    return read_election(io.StringIO(text))


def write_stream(out: TextIO, m: int, ballot: Ballot, votes: Iterable[Vote]) -> int:
    """Write header and votes; returns the number of votes written."""
    out.write(format_header(m, ballot) + "\n")
    count = 0
    for vote in votes:
        out.write(serialize_vote(vote) + "\n")
        count += 1
    return count


def dumps(election: Election) -> str:
    buf = io.StringIO()
    write_stream(buf, election.m, election.ballot or Ballot.APPROVAL, election.votes)
    return buf.getvalue()


def ballot_cells(m: int, ballot: Ballot) -> int:
    """Storage proxy for one stored vote: m bits (approval) or m*ceil(log2 m) bits (ranking)."""
    if ballot is Ballot.APPROVAL:
        return m
    return m * max(1, math.ceil(math.log2(m))) if m > 1 else 1
