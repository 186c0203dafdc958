"""Roaming-monitor defense simulator: Python face of the C++ core."""

from ._core import (  # noqa: F401
    AttackGraph,
    ChiSquaredResult,
    DefenseConfig,
    EpisodeResult,
    Exploit,
    GraphParseError,
    GraphValidationError,
    IdsSchedule,
    MonteCarloParams,
    MonteCarloStats,
    Outcome,
    PlanBackend,
    PlanningStep,
    RegretReport,
    RegretStudyRow,
    SimParams,
    SweepResult,
    SweepRow,
    __version__,
    build_schedule,
    chi_squared_independence,
    derive_seed,
    distance_regret_study,
    dynamic_regret,
    generate_synthetic,
    hop_distance,
    load_graph_file,
    parse_graph,
    plan_step,
    run_episode,
    run_monte_carlo,
    save_graph_file,
    serialize_graph,
    sweep_frequency,
    sweep_ids_count,
    wilson_interval,
)
