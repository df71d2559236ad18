"""Bayesian measurement-schedule design for single-qubit frequency estimation."""

from ._validation import EnumerationCapError
from .estimator import FrequencyEstimator
from .fourier import FourierPosterior
from .grid import GridPosterior
from .lona import LonaScheduler, LonaTrace, best_next_time, lona_extend_mc, lona_schedule
from .model import Outcome, dt_to_times, is_feasible, outcome_probability, times_to_dt
from .objective import (
    BranchTable,
    ObjectiveReport,
    expected_variance,
    expected_variance_exact,
    expected_variance_mc,
    make_objective,
    outcome_tree,
)
from .pso import (
    PsoConfig,
    PsoScheduler,
    Swarm,
    SwarmTrace,
    constriction_factor,
    init_swarm,
    optimize,
    penalized_objective,
    step_swarm,
)
from .simulator import (
    BenchmarkResult,
    TrajectoryRecord,
    benchmark_schedule,
    run_trajectory,
    sample_outcome,
)

__version__ = "0.1.0"
