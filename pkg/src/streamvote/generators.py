"""Synthetic vote streams and adversarial gadget elections.

Random workloads (impartial culture, polarized blocks) drive experiments.
The gadgets turn a Set Disjointness or l1-heavy-hitters instance into an
election whose k=1 winner answers the underlying question; their scores are
exact and testable.

Gadget indexing: element x_i (0-based ``i``) becomes candidate ``i``, the
distinguished candidate d is ``u``, and Borda dummy d_j (j = 1..3u) is
``u + j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from streamvote.election import Ballot, Election, Vote
from streamvote.errors import ParameterError


def gen_impartial_approval(n: int, m: int, p: float, seed=None) -> Election:
    """``n`` ballots approving each candidate independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"approval probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    approvals = rng.random((n, m)) < p
    votes = tuple(Vote(approved=frozenset(np.flatnonzero(row).tolist())) for row in approvals)
    return Election(m, votes, ballot=Ballot.APPROVAL)


def gen_impartial_borda(n: int, m: int, seed=None) -> Election:
    """``n`` independent uniformly random rankings."""
    if m < 1:
        raise ParameterError(f"need m >= 1, got {m}")
    rng = np.random.default_rng(seed)
    rankings = rng.permuted(np.tile(np.arange(m), (n, 1)), axis=1)
    votes = tuple(Vote(ranking=tuple(row.tolist())) for row in rankings)
    return Election(m, votes, ballot=Ballot.POSITIONAL)


def polarized_blocks(m: int, blocks: int) -> list[frozenset[int]]:
    """Split the candidates into ``blocks`` contiguous, disjoint, non-empty groups."""
    return [frozenset(part.tolist()) for part in np.array_split(np.arange(m), blocks)]


def gen_polarized_approval(n: int, m: int, blocks: int, seed=None) -> Election:
    """Voters split evenly into ``blocks`` groups; group g approves exactly its candidate group.

    Group sizes differ by at most one.  The arrival order is shuffled with ``seed``.
    """
    if not 1 <= blocks <= m:
        raise ParameterError(f"need 1 <= blocks <= m, got blocks={blocks}, m={m}")
    groups = polarized_blocks(m, blocks)
    sizes = [len(part) for part in np.array_split(np.arange(n), blocks)]
    labels = np.repeat(np.arange(blocks), sizes)
    np.random.default_rng(seed).shuffle(labels)
    votes = tuple(Vote(approved=groups[g]) for g in labels)
    return Election(m, votes, ballot=Ballot.APPROVAL)


class GadgetVariant(enum.Enum):
    APPROVAL_DISJOINTNESS = "approval-disjointness"
    BORDA_DISJOINTNESS = "borda-disjointness"
    HEAVY_HITTERS = "heavy-hitters"


@dataclass(frozen=True)
class GadgetSpec:
    """A Set Disjointness instance (universe size ``u``, Alice's ``a``, Bob's ``b``)
    or, for heavy hitters, per-type item ``counts``."""

    u: int = 0
    a: frozenset[int] = frozenset()
    b: frozenset[int] = frozenset()
    variant: GadgetVariant = GadgetVariant.APPROVAL_DISJOINTNESS
    counts: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))
        object.__setattr__(self, "counts", tuple(self.counts))
        if self.variant is GadgetVariant.HEAVY_HITTERS:
            if any(c < 0 for c in self.counts):
                raise ParameterError("item counts must be non-negative")
            return
        if self.u < 1:
            raise ParameterError(f"universe size must be >= 1, got {self.u}")
        for name, s in (("A", self.a), ("B", self.b)):
            bad = [x for x in s if not 0 <= x < self.u]
            if bad:
                raise ParameterError(f"{name} contains element {bad[0]} outside [0, {self.u})")

    @property
    def disjoint(self) -> bool:
        return not (self.a & self.b)


@dataclass(frozen=True)
class GadgetInstance:
    """Election built from a gadget plus the committee size / tolerances it is meant for."""

    election: Election
    k: int
    epsilon: Fraction
    phi: Fraction | None = None
    spec: GadgetSpec | None = field(default=None, compare=False)

    @property
    def d(self) -> int | None:
        """Index of the distinguished candidate for disjointness gadgets."""
        if self.spec is None or self.spec.variant is GadgetVariant.HEAVY_HITTERS:
            return None
        return self.spec.u


def gen_disjointness_approval(spec: GadgetSpec) -> GadgetInstance:
    """Seven voters over u+1 candidates: A twice, B twice, then {d} three times.

    Every c_i covers at most two voters unless x_i is in both sets (then
    four); d always covers three.  Intended for k=1, epsilon=1/7.
    """
    if spec.variant is not GadgetVariant.APPROVAL_DISJOINTNESS:
        raise ParameterError(f"expected an approval-disjointness spec, got {spec.variant.value}")
    u = spec.u
    alice = Vote(approved=spec.a)
    bob = Vote(approved=spec.b)
    only_d = Vote(approved=frozenset({u}))
    votes = (alice, alice, bob, bob, only_d, only_d, only_d)
    return GadgetInstance(Election(u + 1, votes, ballot=Ballot.APPROVAL), 1, Fraction(1, 7), spec=spec)


def _borda_disjointness_votes(u: int, a: frozenset[int], b: frozenset[int]) -> tuple[list[int], list[int]]:
    d = u

    def dummy(j):
        return u + j

    v1 = sorted(a)
    v1 += [dummy(j) for j in range(1, u - len(a) + 1)]
    v1.append(d)
    v1 += [dummy(j) for j in range(u - len(a) + 1, 3 * u + 1)]
    v1 += [c for c in range(u) if c not in a]

    # Bob walks the dummies from the other end
    v2 = sorted(b)
    v2 += [dummy(j) for j in range(3 * u, 2 * u + len(b), -1)]
    v2.append(d)
    v2 += [dummy(j) for j in range(2 * u + len(b), 0, -1)]
    v2 += [c for c in range(u) if c not in b]
    return v1, v2


def gen_disjointness_borda(spec: GadgetSpec) -> GadgetInstance:
    """Two rankings over 4u+1 candidates (u elements, d, 3u dummies).

    d always scores 6u; a shared element scores at least 6u+2; dummies score
    at most 5u.  Intended for k=1, epsilon=1/3.
    """
    if spec.variant is not GadgetVariant.BORDA_DISJOINTNESS:
        raise ParameterError(f"expected a borda-disjointness spec, got {spec.variant.value}")
    v1, v2 = _borda_disjointness_votes(spec.u, spec.a, spec.b)
    votes = (Vote(ranking=tuple(v1)), Vote(ranking=tuple(v2)))
    return GadgetInstance(Election(4 * spec.u + 1, votes, ballot=Ballot.POSITIONAL), 1, Fraction(1, 3), spec=spec)


def gen_heavy_hitters(item_counts: Mapping[int, int] | tuple[int, ...] | list[int], epsilon=Fraction(1, 10)) -> GadgetInstance:
    """One single-approval voter per item occurrence; k=1 and phi=1/2.

    ``item_counts`` maps item type (candidate index) to multiplicity, or is a
    sequence indexed by type.  Voters are emitted type by type.
    """
    if isinstance(item_counts, Mapping):
        if not item_counts:
            raise ParameterError("need at least one item type")
        m = max(item_counts) + 1
        counts = tuple(int(item_counts.get(i, 0)) for i in range(m))
    else:
        counts = tuple(int(c) for c in item_counts)
        m = len(counts)
        if m == 0:
            raise ParameterError("need at least one item type")
    spec = GadgetSpec(variant=GadgetVariant.HEAVY_HITTERS, counts=counts)
    votes = tuple(Vote(approved=frozenset({t})) for t, c in enumerate(counts) for _ in range(c))
    return GadgetInstance(Election(m, votes, ballot=Ballot.APPROVAL), 1, Fraction(epsilon), Fraction(1, 2), spec=spec)
