"""Dodgson scores and their polynomial-time relatives on ranked ballots.

The package computes the exact Dodgson score next to six cheaper scores
(Simpson, Tideman, Dodgson Quick, Dodgson Clone, Dodgson Relaxed and its
rounded form) on anonymous ranked-ballot elections, all in exact rational
arithmetic, plus seeded election generators and an experiment harness for
winner-agreement studies.
"""

__version__ = "0.1.0"

from .elections import (
    Alternative,
    AdvantageMatrix,
    CapExceededError,
    DEquivClassTable,
    LinearOrder,
    ParseError,
    Profile,
    VotingRatio,
    VotingSituation,
    advantage_matrix,
    clone_electorate,
    condorcet_tie_winners,
    d_equiv_reduce,
    parse_election,
    profile_to_situation,
    serialize_election,
    situation_to_profile,
)
from .engine import (
    DodgsonProgram,
    ProgramMode,
    SwapVector,
    build_program,
    damp_score,
    dc_score,
    deficit,
    dodgson_score,
    dodgson_score_bruteforce,
    dodgson_score_ilp,
    dodgson_score_search,
    dr_score,
    k_dodgson_score,
)
from .lp import LpModel, LpSolution, solve_ilp, solve_lp
from .rules import (
    ALL_RULES,
    Certificate,
    ScoreReport,
    certificate,
    certificate_threshold,
    compute_score_report,
    dq_score,
    simpson_score,
    tideman_score,
    winners,
)

__all__ = [
    "__version__",
    "Alternative",
    "AdvantageMatrix",
    "CapExceededError",
    "DEquivClassTable",
    "LinearOrder",
    "ParseError",
    "Profile",
    "VotingRatio",
    "VotingSituation",
    "advantage_matrix",
    "clone_electorate",
    "condorcet_tie_winners",
    "d_equiv_reduce",
    "parse_election",
    "profile_to_situation",
    "serialize_election",
    "situation_to_profile",
    "DodgsonProgram",
    "ProgramMode",
    "SwapVector",
    "build_program",
    "damp_score",
    "dc_score",
    "deficit",
    "dodgson_score",
    "dodgson_score_bruteforce",
    "dodgson_score_ilp",
    "dodgson_score_search",
    "dr_score",
    "k_dodgson_score",
    "LpModel",
    "LpSolution",
    "solve_ilp",
    "solve_lp",
    "ALL_RULES",
    "Certificate",
    "ScoreReport",
    "certificate",
    "certificate_threshold",
    "compute_score_report",
    "dq_score",
    "simpson_score",
    "tideman_score",
    "winners",
]
