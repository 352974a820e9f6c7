"""Exact analysis of finite sender-receiver communication games.

Computes receiver-optimal weak perfect Bayesian equilibria by support
enumeration, the receiver's value as a function of the prior along
belief slices, ex-ante evaluations of initial experiments, and
Blackwell comparisons - all in rational arithmetic, so every reported
number is exact.  Intended for desk-scale instances: up to four states
and three messages and actions by default.
"""

from .catalog import builtin_game, builtin_names, builtin_slice
from .equilibrium import (
    Assessment,
    Caps,
    CapsExceeded,
    DEFAULT_CAPS,
    ReceiverStrategy,
    SenderStrategy,
    SupportPattern,
    ValueRecord,
    enumerate_patterns,
    optimal_assessments,
    receiver_optimal,
    solve_pattern,
    verify_pbe,
)
from .experiments import (
    Experiment,
    PosteriorDistribution,
    blackwell_compare,
    compose,
    decision_value,
    experiment_of_strategy,
    load_experiment,
    posteriors_of,
    uninformative,
)
from .games import (
    Belief,
    BeliefSlice,
    Game,
    SchemaError,
    best_response,
    full_binary_slice,
    load_game,
    parse_game,
    pooling_value,
)
from .valuefn import (
    ExperimentEvaluation,
    SecantViolation,
    ValueCurve,
    composed_experiment,
    convexity_report,
    evaluate_initial_experiment,
    find_harmful_split,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "Belief",
    "BeliefSlice",
    "Caps",
    "CapsExceeded",
    "DEFAULT_CAPS",
    "Experiment",
    "ExperimentEvaluation",
    "Game",
    "PosteriorDistribution",
    "ReceiverStrategy",
    "SchemaError",
    "SecantViolation",
    "SenderStrategy",
    "SupportPattern",
    "ValueCurve",
    "ValueRecord",
    "best_response",
    "blackwell_compare",
    "builtin_game",
    "builtin_names",
    "builtin_slice",
    "compose",
    "composed_experiment",
    "convexity_report",
    "decision_value",
    "enumerate_patterns",
    "evaluate_initial_experiment",
    "experiment_of_strategy",
    "find_harmful_split",
    "full_binary_slice",
    "load_experiment",
    "load_game",
    "optimal_assessments",
    "parse_game",
    "pooling_value",
    "posteriors_of",
    "receiver_optimal",
    "solve_pattern",
    "sweep",
    "uninformative",
    "verify_pbe",
]
