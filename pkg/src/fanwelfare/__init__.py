"""Self-referential (fan) social welfare functions.

A fan maps each welfare level to a convex set of welfare weights; the
welfare of a utility profile is the smallest level at which the worst-case
weighted welfare equals the level itself. This package computes those
values, checks the ordering axioms they satisfy, and works out the two-type
triage application in closed form.
"""

from .core import (
    DEFAULT_TOLERANCES,
    DimensionMismatchError,
    DomainError,
    EmptyVectorError,
    InfeasiblePolicyError,
    InvalidFanError,
    InvalidLevelError,
    MaxIterExceededError,
    MonotoneFunction,
    NegativeEntryError,
    NonFiniteEntryError,
    NotApplicableError,
    Tolerances,
    UtilityVector,
    WeightVector,
    WelfareError,
    WelfareResult,
    mean_and_min,
    validate_utility,
)
from .fans import (
    ContaminationFan,
    Fan,
    MonotoneCheckResult,
    Rawlsian,
    StepFan,
    Utilitarian,
    VertexTableFan,
    check_fan_monotone,
    fan_from_dict,
    fan_from_json,
    fan_to_dict,
    fan_to_json,
    sample_directions,
    support_min,
)
from .solver import (
    DEFAULT_CONFIG,
    SolverConfig,
    rank,
    welfare,
    welfare_closed_form_identity,
)
from .oracle import SimplexGrid, brute_support_min, brute_welfare
from .axioms import (
    AxiomReport,
    box_sampler,
    check_convexity,
    check_homotheticity,
    check_inada,
    check_mixing_invariance,
    check_monotonicity,
    run_axiom_battery,
)
from .triage import (
    GridCell,
    ScenarioParams,
    TriageParams,
    TwoTypePolicy,
    check_policy_dominated,
    classify_scenario,
    consistent_welfare,
    discretize_policy,
    efficient_mean,
    efficient_policy,
    efficient_welfare,
    fair_mean,
    fair_policy,
    fair_welfare,
    load_triage_params,
    optimal_policy_threshold,
    policy_outcomes,
    policy_region_grid,
    worst_case_welfare,
    write_region_csv,
)
from .ineq import AtkinsonParams, atkinson_ede, scaling_contrast_report

__version__ = "0.1.0"
