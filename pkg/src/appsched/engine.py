"""Per-iteration discrete-time simulation loop.

One iteration simulates ``n_slots`` slots of ``n_agents`` competing for the
single per-slot radio resource under one scheduling policy. Randomness is
split into three independent streams derived from (master_seed,
iteration_index): the environment stream (start offsets, channel error
probabilities), the channel stream (per-slot transmission outcomes) and the
decision stream (tie-breaks, round-robin permutations). Two runs with the
same config are bit-identical; two schedulers with the same seed see the
same environment and channel draws, enabling paired comparisons.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import draw_realization, linear_means, log_means, snr_from_error_prob
from .schedulers import make_policy
from .timeline import opportunities_window


@dataclass(frozen=True)
class IterationConfig:
    n_agents: int = 100
    n_slots: int = 10_000
    period_T: int = 100
    lifetime_D: int = 100
    resilience_R: int = 100
    scheduler_id: str = "olt-r"
    alpha: float = 0.0
    master_seed: int = 0
    iteration_index: int = 0
    p_lo: float = 1e-3
    p_hi: float = 1e-1
    jitter_factor: float = 2.0
    mean_spacing: str = "log"  # "log" or "linear" spacing of the p means
    # a delivered packet leaves the buffer until the next arrival; set False
    # to keep it schedulable for its whole lifetime
    consume_on_success: bool = True
    olt_floor_v: bool = True
    # PF denominator: accumulate capacity on allocation (default) or on
    # packet aliveness
    pf_omega_allocated: bool = True
    record_decisions: bool = False
    # test/trace overrides; None means draw from the environment stream
    error_probs: Optional[Sequence[float]] = None
    start_offsets: Optional[Sequence[int]] = None

    def __post_init__(self):
        if not 1 <= self.lifetime_D <= self.period_T:
            raise ValueError("require 1 <= lifetime_D <= period_T")
        if self.n_slots < 1 or self.n_agents < 1 or self.resilience_R < 1:
            raise ValueError("n_slots, n_agents and resilience_R must be positive")
        if self.mean_spacing not in ("log", "linear"):
            raise ValueError("mean_spacing must be 'log' or 'linear'")


@dataclass
class IterationTrace:
    s_series: np.ndarray
    per_agent_V: np.ndarray
    error_probs: np.ndarray
    start_offsets: np.ndarray
    decisions: Optional[np.ndarray] = None  # allocated agent per slot, -1 = none
    successes: Optional[np.ndarray] = None


def derive_streams(master_seed: int, iteration_index: int):
    """Three independent generators for one (seed, iteration) pair."""
    seq = np.random.SeedSequence([master_seed, iteration_index])
    env, chan, dec = (np.random.default_rng(s) for s in seq.spawn(3))
    return env, chan, dec


def run_iteration(config: IterationConfig) -> IterationTrace:
    """Simulate one iteration and return its trace.

    Slot order: arrivals, candidate construction, scheduling decision,
    channel draw for the allocated agent, resilience update for every agent,
    auxiliary scheduler-state update, record S(t).
    """
    n, T, D, R = config.n_agents, config.period_T, config.lifetime_D, config.resilience_R
    env_rng, chan_rng, dec_rng = derive_streams(config.master_seed, config.iteration_index)

    if config.start_offsets is not None:
        offsets = np.asarray(config.start_offsets, dtype=np.int64)
    else:
        offsets = env_rng.integers(0, T, size=n)
    if config.error_probs is not None:
        p = np.asarray(config.error_probs, dtype=float)
    else:
        spacing = log_means if config.mean_spacing == "log" else linear_means
        means = spacing(n, config.p_lo, config.p_hi)
        p = draw_realization(means, config.jitter_factor, env_rng)
    gamma = snr_from_error_prob(p)
    log_cap = np.log2(1.0 + gamma)

    policy = make_policy(
        config.scheduler_id, config.alpha, n, dec_rng,
        floor_v=config.olt_floor_v, pf_omega_allocated=config.pf_omega_allocated,
    )

    r = np.full(n, R, dtype=np.int64)
    V = np.zeros(n, dtype=np.int64)
    consumed = np.zeros(n, dtype=bool)
    s_series = np.empty(config.n_slots, dtype=np.int64)
    s_running = 0
    decisions = successes = None
    if config.record_decisions:
        decisions = np.full(config.n_slots, -1, dtype=np.int64)
        successes = np.zeros(config.n_slots, dtype=bool)

    # one channel draw per slot regardless of the decision, so the channel
    # stream consumption does not depend on the scheduler
    slot_draws = chan_rng.random(config.n_slots)

    needs_q = getattr(policy, "needs_q", False)
    for t in range(config.n_slots):
        ph = t - offsets
        started = ph >= 0
        consumed &= ~(started & (ph % T == 0))  # new arrival replaces the packet
        alive = started & (ph % T < D) & ~consumed
        idx = np.flatnonzero(alive)

        q = opportunities_window(t, offsets, T, D, r) if needs_q else None
        k = policy.decide(alive, idx, p, r, q, V, log_cap, dec_rng)

        success = k is not None and slot_draws[t] >= p[k]
        if config.record_decisions:
            decisions[t] = -1 if k is None else k
            successes[t] = success

        r -= 1
        if success:
            r[k] = R
            if config.consume_on_success:
                consumed[k] = True
        violated = np.flatnonzero(r == 0)
        if violated.size:
            V[violated] += 1
            r[violated] = R
            s_running += violated.size
        s_series[t] = s_running

        policy.post_slot(alive, log_cap, k)

    return IterationTrace(
        s_series=s_series,
        per_agent_V=V,
        error_probs=p,
        start_offsets=offsets,
        decisions=decisions,
        successes=successes,
    )


def write_trace(trace: IterationTrace, path) -> None:
    """Dump a per-slot record: t, allocated agent (-1 = none), success flag,
    e1 count, S(t). Requires a trace recorded with decisions enabled."""
    if trace.decisions is None:
        raise ValueError("trace was recorded without per-slot decisions")
    s = trace.s_series
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,allocated,success,e1_count,S\n")
        prev = 0
        for t in range(len(s)):
            e1 = int(s[t]) - prev
            prev = int(s[t])
            fh.write(
                f"{t},{int(trace.decisions[t])},{int(trace.successes[t])},{e1},{int(s[t])}\n"
            )
