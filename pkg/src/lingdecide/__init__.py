"""Double-hierarchy linguistic decision engine.

Interval-valued linguistic assessments with certainty degrees, consensus
expert weighting, simplex-constrained priority fitting, Markov-driven
period weights, and a scenario-file pipeline with a CLI front end.
"""

from .diagnostics import Diagnostics, Event
from .errors import (
    ConfigError,
    DegenerateFusionError,
    EmptyEvidenceError,
    EmptyTrustError,
    EngineError,
    EvaluationError,
    NumericalError,
    OracleScopeError,
    RangeError,
    ScenarioParseError,
    ScenarioValidationError,
    ShapeError,
    TermOverflowError,
)
from .markov import (
    LinguisticMarkovAssessment,
    check_transition_matrix,
    estimate_transition,
    export_dot,
    period_weights,
    period_weights_reshaped,
)
from .pipeline import (
    DecisionReport,
    PltsComparison,
    aggregate,
    compare_with_plts,
    rank,
    run_pipeline,
)
from .prefs import (
    ExpertWeightReport,
    PreferenceRelation,
    Violation,
    blend_weights,
    collective_priorities,
    compute_expert_weights,
    consistent_relation,
    distance,
    inner_deviation,
    inner_weights,
    outer_weights,
    trust_weights,
    validate_relation,
)
from .scale import (
    LinguisticScale,
    TermCoord,
    format_term,
    from_unit,
    parse_term,
    term_add,
    term_scale,
    to_unit,
)
from .scenario import (
    Scenario,
    bundled_scenario_text,
    load_bundled_scenario,
    load_scenario,
    scenario_from_dict,
)
from .solver import SimplexWLSProblem, SimplexSolution, brute_force_oracle, solve
from .terms import (
    FuzzyIntervalSet,
    FuzzyIntervalTerm,
    NormalPeakModel,
    Ordering,
    PeakIntervalTerm,
    ProbabilisticTermSet,
    compare,
    interval_add,
    interval_fuse,
    interval_scale,
    linguistic_integral,
    peak,
    peak_model,
    plts_deviation,
    plts_score,
    score,
    sigma,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
