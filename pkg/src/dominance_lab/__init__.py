"""Exact-arithmetic iterated dominance elimination on finite strategic games.

Eight elimination operators (strict/weak dominance, pure/mixed dominators,
local/global candidate pools) as restriction-to-restriction maps, their
fixpoint iteration with replayable elimination certificates, and empirical
checks of the inclusion, equality and (non)monotonicity relations between
them.
"""

from .analysis import (
    BudgetExceededError,
    Exhaustive,
    FixpointRelationReport,
    GlobalLocalEqualityReport,
    LemmaIncReport,
    MonotonicityWitness,
    PointwiseInclusionReport,
    Sampled,
    check_monotonic,
    compare_fixpoints,
    lattice_size,
    pointwise_inclusion,
    verify_global_local_equalities,
    verify_lemma_inc,
)
from .dominance import (
    EliminationCertificate,
    Mode,
    NoCandidatesError,
    Pool,
    dominates,
    enumerate_mixtures,
    find_mixed_dominator,
    find_pure_dominator,
    replay_certificate,
    solve_lp,
)
from .game_model import (
    Fraction,
    Game,
    GameFormatError,
    InvalidDistributionError,
    InvalidProfileError,
    MixedStrategy,
    Restriction,
    builtin_game,
    expected_payoff,
    game_from_json_dict,
    game_to_json_dict,
    opponent_profiles,
    payoff,
    restriction_of,
)
from .operators import (
    ALL_OPERATORS,
    GS,
    GW,
    LS,
    LW,
    MGS,
    MGW,
    MLS,
    MLW,
    Deterministic,
    EliminationEngine,
    EliminationStep,
    IterationTrace,
    Mixing,
    OperatorKind,
    Seeded,
    apply_operator,
    fixpoint,
    iterate,
    iterate_one_at_a_time,
    operator_from_name,
)
from .random_games import GeneratorConfig, generate

__version__ = "0.1.0"
