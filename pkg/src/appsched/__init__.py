"""Discrete-time simulator and schedulers for resilience-aware radio
resource allocation."""

from .channel import (
    draw_realization,
    linear_means,
    log_means,
    snr_from_error_prob,
    transmission_outcome,
)
from .engine import IterationConfig, IterationTrace, derive_streams, run_iteration
from .metrics import RunSummary, aggregate, f_of_t, steady_slope
from .schedulers import (
    SCHEDULER_IDS,
    CandidateView,
    UtilityParams,
    f_hat,
    heuristic_f,
    ols_decide,
    olt_decide,
    pf_like_decide,
    pf_update,
    round_robin_decide,
    utility,
    v_hat,
)
from .timeline import AgentProfile, count_opportunities, is_alive

__all__ = [
    "AgentProfile",
    "CandidateView",
    "IterationConfig",
    "IterationTrace",
    "RunSummary",
    "SCHEDULER_IDS",
    "UtilityParams",
    "aggregate",
    "count_opportunities",
    "derive_streams",
    "draw_realization",
    "f_hat",
    "f_of_t",
    "heuristic_f",
    "is_alive",
    "linear_means",
    "log_means",
    "ols_decide",
    "olt_decide",
    "pf_like_decide",
    "pf_update",
    "round_robin_decide",
    "run_iteration",
    "snr_from_error_prob",
    "steady_slope",
    "transmission_outcome",
    "utility",
    "v_hat",
]

__version__ = "0.1.0"
