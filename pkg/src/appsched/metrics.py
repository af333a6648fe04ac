"""Observation metrics: violation rate over time and its steady-state value.

S(t) is the system-wide accumulated violation count, F(t) = S(t)/t its
time-normalized rate. After a transient, S(t) grows linearly, so the
steady-state rate is estimated as the least-squares slope of S(t) over the
tail of the run, then averaged across Monte-Carlo iterations.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

_NEG_SLOPE_TOL = 1e-12


@dataclass(frozen=True)
class RunSummary:
    """Per-iteration result for one sweep cell."""

    scheduler_id: str
    alpha: Optional[float]
    heuristic_kind: Optional[str]
    resilience_R: int
    f_cst: float
    final_S: int
    n_slots: int


def f_of_t(s_value: int, t: int) -> float:
    """Violation rate at slot t: accumulated violations divided by t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return s_value / t


def steady_slope(s_series, window: int) -> float:
    """OLS slope of (t, S(t)) over the last ``window`` slots.

    Tiny negative slopes (numerical noise on a non-decreasing series) are
    clamped to zero.
    """
    s_series = np.asarray(s_series, dtype=float)
    if window < 2:
        raise ValueError("window must be >= 2")
    if window > len(s_series):
        raise ValueError("window exceeds series length")
    tail = s_series[-window:]
    t = np.arange(window, dtype=float)
    slope = np.polyfit(t, tail, 1)[0]
    if -_NEG_SLOPE_TOL < slope < 0.0:
        slope = 0.0
    return float(slope)


def aggregate(f_cst_values) -> tuple[float, float, int]:
    """Sample mean, standard error and count of per-iteration estimates."""
    values = list(f_cst_values)
    if not values:
        raise ValueError("no summaries to aggregate")
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0, 1
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, (var / n) ** 0.5, n


def aggregate_summaries(summaries: list[RunSummary]) -> tuple[float, float, int]:
    """aggregate() over RunSummary records, enforcing a homogeneous cell."""
    if not summaries:
        raise ValueError("no summaries to aggregate")
    key = (
        summaries[0].scheduler_id,
        summaries[0].alpha,
        summaries[0].heuristic_kind,
        summaries[0].resilience_R,
    )
    for s in summaries[1:]:
        if (s.scheduler_id, s.alpha, s.heuristic_kind, s.resilience_R) != key:
            raise ValueError("summaries mix different sweep cells")
    return aggregate(s.f_cst for s in summaries)
