"""Find an approximate Approval-CC committee while reading a stream once.

The sampler keeps a fixed number of votes no matter how long the stream is,
solves the election on that sample, and the result is then checked against
the exact optimum of the full election.
"""

import argparse

from streamvote import RuleSpec, exact_winner, gen_impartial_approval, streaming_winner
from streamvote.winner import epsilon_gap_check

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--n", type=int, default=20_000)
parser.add_argument("--m", type=int, default=6)
parser.add_argument("--k", type=int, default=2)
parser.add_argument("--eps", type=float, default=0.2)
parser.add_argument("--seed", type=int, default=1)
args = parser.parse_args()

rule = RuleSpec.approval_cc()
election = gen_impartial_approval(args.n, args.m, 0.3, seed=args.seed)
result = streaming_winner(iter(election.votes), rule, args.k, args.eps, m=args.m, seed=args.seed)
exact = exact_winner(election, rule, args.k)
report = epsilon_gap_check(election, rule, args.k, result.committee, args.eps, opt_score=exact.opt_score)

print(f"stream of {result.stats.votes_seen} votes, kept {result.stats.peak_stored_votes} (draw size {result.params.draw_size})")
print(f"streaming committee {result.committee} scores {report.returned_score} on the full election")
print(f"exact optimum {exact.winner} scores {exact.opt_score}")
print(f"gap {report.gap} <= tolerance {report.tolerance:.0f}: {report.passed}")
