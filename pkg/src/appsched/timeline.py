"""Periodic traffic time-lines.

Each agent produces one packet every ``period_T`` slots; the packet stays
alive for ``lifetime_D`` consecutive slots (a half-open window), leaving a
hole of ``period_T - lifetime_D`` slots at the end of each period. Slots in
which a packet is alive are the agent's transmission opportunities.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AgentProfile:
    """Static per-agent parameters."""

    agent_id: int
    period_T: int
    lifetime_D: int
    resilience_R: int
    start_offset: int
    mean_error_prob: float

    def __post_init__(self):
        if self.period_T < 1:
            raise ValueError("period_T must be positive")
        if not 1 <= self.lifetime_D <= self.period_T:
            raise ValueError("lifetime_D must be in [1, period_T]")
        if self.resilience_R < 1:
            raise ValueError("resilience_R must be positive")
        if not 0 <= self.start_offset < self.period_T:
            raise ValueError("start_offset must be in [0, period_T)")
        if not 0.0 < self.mean_error_prob < 1.0:
            raise ValueError("mean_error_prob must be in (0, 1)")


def is_alive(profile: AgentProfile, t: int) -> bool:
    """True iff the agent has an alive packet at slot ``t``.

    A packet arriving at slot ``a`` is alive during ``[a, a + lifetime_D)``.
    Before the first arrival (t < start_offset) there is no packet.
    """
    if t < profile.start_offset:
        return False
    return (t - profile.start_offset) % profile.period_T < profile.lifetime_D


def _alive_count_before(profile: AgentProfile, x: int) -> int:
    # number of alive slots in [start_offset, x), closed form
    span = x - profile.start_offset
    if span <= 0:
        return 0
    full, rem = divmod(span, profile.period_T)
    return full * profile.lifetime_D + min(rem, profile.lifetime_D)


def count_opportunities(profile: AgentProfile, t: int, horizon: int) -> int:
    """Number of alive slots in the window ``[t, t + horizon)``.

    With ``horizon`` set to the agent's remaining resilience this is the
    number of transmission opportunities left before a violation.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    return _alive_count_before(profile, t + horizon) - _alive_count_before(profile, t)


def alive_mask(t: int, offsets: np.ndarray, period_T: int, lifetime_D: int) -> np.ndarray:
    """Vectorized is_alive over all agents at slot ``t``."""
    ph = t - offsets
    return (ph >= 0) & (ph % period_T < lifetime_D)


def opportunities_window(
    t: int,
    offsets: np.ndarray,
    period_T: int,
    lifetime_D: int,
    horizons: np.ndarray,
) -> np.ndarray:
    """Vectorized count_opportunities for per-agent horizons at slot ``t``."""

    def before(x):
        span = np.maximum(x - offsets, 0)
        full, rem = np.divmod(span, period_T)
        return full * lifetime_D + np.minimum(rem, lifetime_D)

    return before(t + horizons) - before(t)
