"""Chamberlin-Courant versus Monroe on a lopsided electorate.

Seventy voters like candidate 0 only, thirty like candidate 1 only and five
like candidate 2 only.  Under CC the committee {0, 1} satisfies all hundred
fans of 0 and 1.  Monroe makes each member represent about half of the 105
voters, so candidate 0 can serve only 53 of its 70 fans.
"""

from streamvote import Committee, Election, RuleSpec, Vote, cc_assign, exact_winner, monroe_assign

votes = [Vote.approval([0])] * 70 + [Vote.approval([1])] * 30 + [Vote.approval([2])] * 5
election = Election(3, tuple(votes))
committee = Committee((0, 1))

cc = cc_assign(election, RuleSpec.approval_cc(), committee)
monroe = monroe_assign(election, RuleSpec.approval_monroe(), committee)
print(f"committee {committee}")
print(f"  CC     satisfaction {cc.total_satisfaction:3d}  loads {cc.load(committee)}")
print(f"  Monroe satisfaction {monroe.total_satisfaction:3d}  loads {monroe.load(committee)}")

for rule in (RuleSpec.approval_cc(), RuleSpec.approval_monroe()):
    result = exact_winner(election, rule, 2)
    print(f"{rule.name:12s} best score {result.opt_score}, winners {[str(c) for c in result.winners]}")
