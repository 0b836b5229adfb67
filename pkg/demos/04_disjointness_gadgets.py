"""Elections whose winner answers a Set Disjointness question.

Alice holds A and Bob holds B, both subsets of {0, ..., u-1}.  Each writes a
few votes; the distinguished candidate d wins alone exactly when A and B do
not intersect.  This is why any streaming algorithm needs space growing
with the number of candidates.
"""

from streamvote import (
    Committee,
    GadgetSpec,
    GadgetVariant,
    RuleSpec,
    exact_winner,
    gen_disjointness_approval,
    gen_disjointness_borda,
)

cases = [({1}, {0, 1}), ({0}, {2}), (set(), {0, 1, 2})]
for a, b in cases:
    spec = GadgetSpec(3, a, b)
    approval = gen_disjointness_approval(spec)
    borda = gen_disjointness_borda(GadgetSpec(3, a, b, GadgetVariant.BORDA_DISJOINTNESS))
    d = Committee((approval.d,))
    aw = exact_winner(approval.election, RuleSpec.approval_cc(), 1).winners
    bw = exact_winner(borda.election, RuleSpec.borda_cc(), 1)
    print(f"A={sorted(a)} B={sorted(b)} disjoint={spec.disjoint}")
    print(f"  approval gadget winners {[str(c) for c in aw]}  (d alone: {aw == (d,)})")
    print(f"  Borda gadget winners {[str(c) for c in bw.winners]} score {bw.opt_score}  (d scores 18)")
