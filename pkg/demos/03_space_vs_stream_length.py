"""Storage stays flat as the stream grows.

The reservoir holds exactly the draw size; the Bernoulli sampler keeps each
vote with probability draw/(n * delta), so its expected load is draw/delta.
"""

import itertools

from streamvote import RuleSpec, Vote, sample_size, streaming_winner

rule, k, m, eps = RuleSpec.approval_cc(), 2, 6, 0.2
params = sample_size(rule, eps, k, m)
print(f"draw size {params.draw_size}, Bernoulli target draw/delta = {params.draw_size / params.delta:.0f}")
print(f"{'n':>9s} {'reservoir':>10s} {'bernoulli':>10s}")
for n in (10**3, 10**4, 10**5, 10**6):
    vote = Vote.approval([0, 3])
    res = streaming_winner(itertools.repeat(vote, n), rule, k, eps, m=m, seed=0)
    ber = streaming_winner(itertools.repeat(vote, n), rule, k, eps, m=m, seed=0, sampler="bernoulli", n=n)
    print(f"{n:9d} {res.stats.peak_stored_votes:10d} {ber.stats.peak_stored_votes:10d}")
