"""Memory-bounded streaming winner determination for Chamberlin-Courant and Monroe elections."""

from streamvote.assignment import Assignment, brute_force_monroe_oracle, cc_assign, monroe_assign
from streamvote.election import (
    Ballot,
    Committee,
    Election,
    Family,
    RuleSpec,
    Vote,
    parse_stream_header,
    parse_vote,
    read_election,
    read_stream,
    satisfaction,
    satisfaction_matrix,
    serialize_vote,
    write_stream,
)
from streamvote.errors import (
    BallotTypeError,
    InvalidCommitteeError,
    ParameterError,
    ParseError,
    ScaleError,
    StreamVoteError,
)
from streamvote.generators import (
    GadgetSpec,
    GadgetVariant,
    gen_disjointness_approval,
    gen_disjointness_borda,
    gen_heavy_hitters,
    gen_impartial_approval,
    gen_impartial_borda,
    gen_polarized_approval,
)
from streamvote.streaming import (
    SampleParams,
    StreamStats,
    bernoulli_sample,
    reservoir_sample,
    sample_size,
    streaming_winner,
)
from streamvote.winner import (
    WinnerResult,
    committee_score,
    epsilon_gap_check,
    exact_epsilon_winning_oracle,
    exact_winner,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "brute_force_monroe_oracle",
    "cc_assign",
    "monroe_assign",
    "Ballot",
    "Committee",
    "Election",
    "Family",
    "RuleSpec",
    "Vote",
    "parse_stream_header",
    "parse_vote",
    "read_election",
    "read_stream",
    "satisfaction",
    "satisfaction_matrix",
    "serialize_vote",
    "write_stream",
    "BallotTypeError",
    "InvalidCommitteeError",
    "ParameterError",
    "ParseError",
    "ScaleError",
    "StreamVoteError",
    "GadgetSpec",
    "GadgetVariant",
    "gen_disjointness_approval",
    "gen_disjointness_borda",
    "gen_heavy_hitters",
    "gen_impartial_approval",
    "gen_impartial_borda",
    "gen_polarized_approval",
    "SampleParams",
    "StreamStats",
    "bernoulli_sample",
    "reservoir_sample",
    "sample_size",
    "streaming_winner",
    "WinnerResult",
    "committee_score",
    "epsilon_gap_check",
    "exact_epsilon_winning_oracle",
    "exact_winner",
]
