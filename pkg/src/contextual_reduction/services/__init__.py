"""Services: nets, designs, oracles, solvers, reductions and the run harness."""

from .config_loader import load_run_config
from .design import (
    allocate,
    allocate_to_length,
    fit_least_squares,
    g_optimal_design,
    least_squares,
    leverage,
    support_cap,
)
from .diagnostics import martingale_diagnostics
from .emitter import EmitFormat, emit, load_traces
from .nets import (
    build_dense_net,
    build_sparse_net,
    build_structured_net,
    covering_radius_estimate,
    load_net,
    save_net,
)
from .oracles import (
    empirical_g_update,
    exact_g,
    exact_g_product,
    exact_g_table,
    new_empirical_table,
    product_reduction,
)
from .reductions import reduce_known_dist, run_batched, run_epoch_reduction, run_product_reduction
from .runner import resolve_instance, run, run_outcomes
from .scaling import scaling_fit
from .schedules import batched_schedule, confidence_gamma, doubling_schedule, epoch_epsilon
from .simulator import CorruptionAdversary, RunStreams, play
from .solvers import PhasedElimination, RandomSolver
from .suite_store import SuiteStore, get_suite_store
from .suites import SuiteSpec, make_standard_suite
from .verification import run_verification

__all__ = [
    "CorruptionAdversary",
    "EmitFormat",
    "PhasedElimination",
    "RandomSolver",
    "RunStreams",
    "SuiteSpec",
    "SuiteStore",
    "allocate",
    "allocate_to_length",
    "batched_schedule",
    "build_dense_net",
    "build_sparse_net",
    "build_structured_net",
    "confidence_gamma",
    "covering_radius_estimate",
    "doubling_schedule",
    "emit",
    "empirical_g_update",
    "epoch_epsilon",
    "exact_g",
    "exact_g_product",
    "exact_g_table",
    "fit_least_squares",
    "g_optimal_design",
    "get_suite_store",
    "least_squares",
    "leverage",
    "load_net",
    "load_run_config",
    "load_traces",
    "make_standard_suite",
    "martingale_diagnostics",
    "new_empirical_table",
    "play",
    "product_reduction",
    "reduce_known_dist",
    "resolve_instance",
    "run",
    "run_batched",
    "run_epoch_reduction",
    "run_outcomes",
    "run_product_reduction",
    "run_verification",
    "save_net",
    "scaling_fit",
    "support_cap",
]
