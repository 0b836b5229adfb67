"""Optimal voter-to-representative assignments.

Chamberlin-Courant lets every voter pick her favourite committee member.
Monroe additionally requires each member to represent between floor(n/k) and
ceil(n/k) voters; the optimum is found with a min-cost flow:

    source -> voter profile -> member -> sink        (capacity floor(n/k))
                                      \\-> slack -> sink (member->slack cap 1,
                                                        slack->sink cap n mod k)

A flow of value n saturates every sink edge, so every member ends up with
floor(n/k) voters plus at most one of the n mod k extra seats, and the solver
is free to choose which members take the extra seats.  Voters with the same
satisfaction profile over the committee are interchangeable, so they are
merged into one supply node; this keeps the network tiny even for samples of
thousands of voters.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from streamvote.election import Committee, Election, Family, RuleSpec, satisfaction_matrix
from streamvote.errors import BallotTypeError, InvalidCommitteeError, ScaleError

ORACLE_MAX_VOTERS = 10
ORACLE_MAX_K = 3


@dataclass(frozen=True)
class Assignment:
    """``rep[v]`` is the committee member representing voter ``v``."""

    rep: tuple[int, ...]
    total_satisfaction: int

    def load(self, committee: Committee) -> dict[int, int]:
        """Number of voters assigned to each member."""
        counts = dict.fromkeys(committee.members, 0)
        for c in self.rep:
            counts[c] += 1
        return counts


def _check(election: Election, rule: RuleSpec, committee: Committee) -> None:
    committee.validate(election.m)
    if election.n and election.ballot is not rule.ballot:
        raise BallotTypeError(f"{rule.name} cannot score a {election.ballot.value} election")


def monroe_capacities(n: int, k: int) -> tuple[int, int]:
    """``(floor(n/k), n mod k)``: base load and number of members taking one extra voter."""
    return divmod(n, k)


def cc_assign(election: Election, rule: RuleSpec, committee: Committee, sat: np.ndarray | None = None) -> Assignment:
    """Each voter goes to her most satisfying member; ties go to the lowest index.

    ``sat`` may carry a precomputed :func:`satisfaction_matrix`.
    """
    _check(election, rule, committee)
    if sat is None:
        sat = satisfaction_matrix(election, rule)
    members = np.asarray(committee.members)
    sub = sat[:, members]
    # argmax returns the first maximum; members are sorted ascending
    best = sub.argmax(axis=1) if election.n else np.zeros(0, dtype=np.int64)
    rep = members[best]
    total = int(sub[np.arange(election.n), best].sum())
    return Assignment(tuple(int(c) for c in rep), total)


def cc_score_from_matrix(sat: np.ndarray, members) -> int:
    if sat.shape[0] == 0:
        return 0
    return int(sat[:, list(members)].max(axis=1).sum())


class _FlowNetwork:
    """Residual graph for successive-shortest-path min-cost flow."""

    def __init__(self, size: int):
        self.adj: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []

    def add_edge(self, u: int, v: int, cap: int, cost: int) -> int:
        eid = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.adj[u].append(eid)
        self.adj[v].append(eid + 1)
        return eid

    def min_cost_flow(self, source: int, sink: int, demand: int) -> tuple[int, int]:
        """Push up to ``demand`` units; returns ``(flow, cost)``.

        Shortest paths use SPFA, which tolerates the negative residual costs
        that appear after augmentation (no negative cycles arise under SSP).
        """
        flow = cost = 0
        size = len(self.adj)
        while flow < demand:
            dist = [None] * size
            prev_edge = [-1] * size
            in_queue = [False] * size
            dist[source] = 0
            queue = deque([source])
            while queue:
                u = queue.popleft()
                in_queue[u] = False
                du = dist[u]
                for eid in self.adj[u]:
                    if self.cap[eid] <= 0:
                        continue
                    v = self.to[eid]
                    nd = du + self.cost[eid]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        prev_edge[v] = eid
                        if not in_queue[v]:
                            in_queue[v] = True
                            queue.append(v)
            if dist[sink] is None:
                break
            push = demand - flow
            v = sink
            while v != source:
                eid = prev_edge[v]
                push = min(push, self.cap[eid])
                v = self.to[eid ^ 1]
            v = sink
            while v != source:
                eid = prev_edge[v]
                self.cap[eid] -= push
                self.cap[eid ^ 1] += push
                v = self.to[eid ^ 1]
            flow += push
            cost += push * dist[sink]
        return flow, cost


def _monroe_solve(sub: np.ndarray) -> tuple[np.ndarray, int]:
    """Optimal balanced assignment for an ``(n, k)`` satisfaction block.

    Returns the member column chosen for each voter and the total satisfaction.
    """
    n, k = sub.shape
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0
    base, extra = monroe_capacities(n, k)
    profiles, inverse, counts = np.unique(sub, axis=0, return_inverse=True, return_counts=True)
    inverse = np.asarray(inverse).reshape(-1)
    top = int(sub.max())
    p = len(profiles)
    source, first_member = 0, 1 + p
    slack, sink = first_member + k, first_member + k + 1
    net = _FlowNetwork(sink + 1)
    edges = {}
    for i in range(p):
        net.add_edge(source, 1 + i, int(counts[i]), 0)
        for j in range(k):
            edges[i, j] = net.add_edge(1 + i, first_member + j, int(counts[i]), top - int(profiles[i, j]))
    for j in range(k):
        if base:
            net.add_edge(first_member + j, sink, base, 0)
        if extra:
            net.add_edge(first_member + j, slack, 1, 0)
    if extra:
        net.add_edge(slack, sink, extra, 0)
    flow, cost = net.min_cost_flow(source, sink, n)
    if flow != n:
        raise RuntimeError(f"balanced assignment infeasible: routed {flow} of {n} voters")

    # hand out each profile's flow to its voters in voter order, lowest member first
    quota = {(i, j): net.cap[eid ^ 1] for (i, j), eid in edges.items()}
    choice = np.empty(n, dtype=np.int64)
    for v in range(n):
        i = int(inverse[v])
        for j in range(k):
            if quota[i, j]:
                quota[i, j] -= 1
                choice[v] = j
                break
    return choice, n * top - cost


def monroe_assign(election: Election, rule: RuleSpec, committee: Committee, sat: np.ndarray | None = None) -> Assignment:
    """Maximum-satisfaction assignment subject to the Monroe balance constraint.

    ``rule.family`` is not enforced so the same routine can score Monroe
    committees for any ballot type; k > n is allowed (some members then
    represent nobody).
    """
    _check(election, rule, committee)
    if sat is None:
        sat = satisfaction_matrix(election, rule)
    members = np.asarray(committee.members)
    choice, total = _monroe_solve(sat[:, members])
    return Assignment(tuple(int(c) for c in members[choice]), int(total))


def monroe_score_from_matrix(sat: np.ndarray, members) -> int:
    return _monroe_solve(sat[:, list(members)])[1]


def assign(election: Election, rule: RuleSpec, committee: Committee, sat: np.ndarray | None = None) -> Assignment:
    """Dispatch on ``rule.family``."""
    if rule.family is Family.MONROE:
        return monroe_assign(election, rule, committee, sat)
    return cc_assign(election, rule, committee, sat)


def brute_force_monroe_oracle(election: Election, rule: RuleSpec, committee: Committee) -> Assignment:
    """Exhaustive search over all balanced assignments (test oracle).

    Limited to ``n <= 10`` voters and ``k <= 3`` members.
    """
    _check(election, rule, committee)
    n, k = election.n, committee.k
    if n > ORACLE_MAX_VOTERS or k > ORACLE_MAX_K:
        raise ScaleError(f"oracle limited to n <= {ORACLE_MAX_VOTERS}, k <= {ORACLE_MAX_K}; got n={n}, k={k}")
    if n == 0:
        return Assignment((), 0)
    sat = satisfaction_matrix(election, rule)
    members = committee.members
    lo, hi = n // k, -(-n // k)
    best_rep, best_total = None, -1
    for rep in itertools.product(members, repeat=n):
        loads = [rep.count(c) for c in members]
        if min(loads) < lo or max(loads) > hi:
            continue
        total = sum(int(sat[v, c]) for v, c in enumerate(rep))
        if total > best_total:
            best_rep, best_total = rep, total
    if best_rep is None:
        raise InvalidCommitteeError("no balanced assignment exists")
    return Assignment(tuple(best_rep), best_total)
