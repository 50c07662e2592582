"""Ranked-ballot election engine: plurality, instant runoff and Condorcet
tabulation, with core-support and broad-support criterion checks."""

from .ballots import (
    BallotFormatError,
    BallotGroup,
    BallotProfile,
    Candidate,
    UnknownCandidateError,
    alaska_2022,
    continuation_rate,
    format_percent,
    format_profile,
    parse_profile,
    read_profile,
    restrict_profile,
    total_ballots,
)
from .criteria import (
    CriterionReport,
    IIAReport,
    MonotonicityWitness,
    Move,
    PairFlip,
    PairTally,
    Verdict,
    apply_moves,
    check_broad_support,
    check_core_support,
    core_support_tally,
    find_monotonicity_violation,
    iia_flip_report,
    major_set,
    minor_set,
    replay_witness,
)
from .tabulation import (
    CondorcetOutcome,
    PairwiseMatrix,
    RoundLog,
    TieError,
    TiebreakPolicy,
    condorcet_outcome,
    first_preferences,
    irv_ranking,
    pairwise_matrix,
    plurality_ranking,
    smith_set,
)

__version__ = "0.1.0"
