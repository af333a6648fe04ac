"""Scheduling policies for the single shared radio resource.

Four policies behind one decision interface:

* on-line sum ("ols-r" / "ols-q"): exact minimization of the summed
  utility of the predicted per-agent violation counts, one candidate
  column at a time;
* on-line taylor ("olt-r" / "olt-q"): first-order approximation of the
  same objective, reducing to an argmax over per-agent priorities;
* "round-robin": rotating random permutation, skipping dead packets;
* "pf-like": instantaneous over accumulated channel capacity ratio.

The -r / -q suffix selects the short-term violation heuristic: p**r uses
the remaining wall-clock slots before a violation, p**q the remaining
transmission opportunities among them.

All argmax/argmin ties are broken uniformly at random from the caller's
decision stream, so runs are reproducible given a seed.
"""

from dataclasses import dataclass

import numpy as np

SCHEDULER_IDS = ("ols-r", "ols-q", "olt-r", "olt-q", "round-robin", "pf-like")


@dataclass(frozen=True)
class CandidateView:
    """Snapshot of one schedulable agent (alive packet) at the current slot."""

    agent_id: int
    error_prob_p: float
    remaining_r: int
    opportunities_q: int
    violations_V_prev: int
    snr_gamma: float


@dataclass(frozen=True)
class UtilityParams:
    alpha: float = 0.0
    heuristic_kind: str = "R"

    def __post_init__(self):
        if self.heuristic_kind not in ("R", "Q"):
            raise ValueError("heuristic_kind must be 'R' or 'Q'")
        if self.alpha > 0 and self.alpha != 1:
            raise ValueError("supported alpha range is alpha <= 0 (plus alpha = 1)")


def utility(alpha: float, x):
    """Alpha-fair utility: x**(1-alpha)/(1-alpha), or log(x) at alpha=1."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("utility requires x > 0")
    if alpha == 1:
        out = np.log(x)
    else:
        out = x ** (1.0 - alpha) / (1.0 - alpha)
    return out if out.ndim else float(out)


def heuristic_f(kind: str, candidate: CandidateView) -> float:
    """Short-term violation heuristic p**r (kind R) or p**q (kind Q)."""
    if kind == "R":
        return candidate.error_prob_p**candidate.remaining_r
    if kind == "Q":
        return candidate.error_prob_p**candidate.opportunities_q
    raise ValueError(f"unknown heuristic kind: {kind!r}")


def f_hat(candidate: CandidateView, allocated: bool, kind: str) -> float:
    """Predicted within-window violation probability under a decision.

    Granting the resource multiplies the heuristic by the channel error
    probability (the violation then requires the transmission to fail too).
    """
    f = heuristic_f(kind, candidate)
    return candidate.error_prob_p * f if allocated else f


def v_hat(candidate: CandidateView, allocated: bool, kind: str) -> float:
    """Predicted accumulated violation count: observed count plus f_hat."""
    return candidate.violations_V_prev + f_hat(candidate, allocated, kind)


# ---------------------------------------------------------------------------
# array cores (used by the simulation engine on hot paths)


def heuristic_values(kind: str, p: np.ndarray, r: np.ndarray, q: np.ndarray) -> np.ndarray:
    if kind == "R":
        return p**r
    if kind == "Q":
        return p**q
    raise ValueError(f"unknown heuristic kind: {kind!r}")


def ols_gains(p: np.ndarray, f: np.ndarray, v_prev: np.ndarray, alpha: float) -> np.ndarray:
    """Change of the summed utility objective when allocating each candidate.

    Allocating candidate k replaces U(v_prev_k + f_k) by U(v_prev_k + p_k f_k)
    in the column sum, all other terms being shared; the argmin over these
    per-candidate gains equals the argmin over full column sums.
    """
    if alpha == 0:
        # U_0 is the identity; keep the exact same float expression as the
        # taylor scores (negated) so the two solvers tie-break identically
        return -((1.0 - p) * f)
    a = 1.0 - alpha
    v0 = v_prev + f
    d = (p - 1.0) * f
    with np.errstate(divide="ignore", invalid="ignore"):
        # v0**a * ((1 + d/v0)**a - 1), evaluated stably: the direct
        # difference of utilities cancels catastrophically when f << v_prev
        gains = v0**a * np.expm1(a * np.log1p(d / v0)) / a
    return np.where(f == 0.0, 0.0, gains)


def olt_scores(
    p: np.ndarray,
    f: np.ndarray,
    v_prev: np.ndarray,
    alpha: float,
    floor_v: bool = True,
) -> np.ndarray:
    """Per-candidate priorities of the taylor solver: (1-p) f V**(-alpha).

    With ``floor_v`` the violation history enters as max(V, 1), so agents
    with an empty history keep a nonzero priority signal for alpha < 0.
    """
    if alpha == 0:
        return (1.0 - p) * f
    v = np.maximum(v_prev, 1.0) if floor_v else np.asarray(v_prev, dtype=float)
    return (1.0 - p) * f * v ** (-alpha)


def tie_break_max(values: np.ndarray, rng: np.random.Generator) -> int:
    """Index of the maximum; uniform random among exact ties."""
    ties = np.flatnonzero(values == values.max())
    if ties.size == 1:
        return int(ties[0])
    return int(ties[rng.integers(ties.size)])


def tie_break_min(values: np.ndarray, rng: np.random.Generator) -> int:
    ties = np.flatnonzero(values == values.min())
    if ties.size == 1:
        return int(ties[0])
    return int(ties[rng.integers(ties.size)])


def _candidate_arrays(candidates):
    p = np.array([c.error_prob_p for c in candidates])
    r = np.array([c.remaining_r for c in candidates])
    q = np.array([c.opportunities_q for c in candidates])
    v = np.array([c.violations_V_prev for c in candidates], dtype=float)
    return p, r, q, v


def ols_decide(candidates, params: UtilityParams, rng: np.random.Generator):
    """On-line sum decision; returns the allocated agent id, or None."""
    if not candidates:
        return None
    p, r, q, v = _candidate_arrays(candidates)
    f = heuristic_values(params.heuristic_kind, p, r, q)
    k = tie_break_min(ols_gains(p, f, v, params.alpha), rng)
    return candidates[k].agent_id


def olt_decide(candidates, params: UtilityParams, rng: np.random.Generator, floor_v: bool = True):
    """On-line taylor decision; returns the allocated agent id, or None."""
    if not candidates:
        return None
    p, r, q, v = _candidate_arrays(candidates)
    f = heuristic_values(params.heuristic_kind, p, r, q)
    k = tie_break_max(olt_scores(p, f, v, params.alpha, floor_v), rng)
    return candidates[k].agent_id


# ---------------------------------------------------------------------------
# baselines


@dataclass
class RoundRobinState:
    permutation_buffer: np.ndarray
    cursor: int = 0


def init_round_robin(n_agents: int, rng: np.random.Generator) -> RoundRobinState:
    return RoundRobinState(rng.permutation(n_agents))


def round_robin_pick(alive: np.ndarray, state: RoundRobinState, rng: np.random.Generator):
    """Next alive agent in the rotating buffer; refreshes the permutation
    once the buffer is exhausted. All-dead slot: None, state untouched."""
    if not alive.any():
        return None
    buf = state.permutation_buffer
    n = buf.size
    pos = state.cursor
    for _ in range(2):
        while pos < n and not alive[buf[pos]]:
            pos += 1
        if pos < n:
            state.cursor = pos + 1
            return int(buf[pos])
        buf = state.permutation_buffer = rng.permutation(n)
        state.cursor = pos = 0
    raise AssertionError("unreachable: alive candidate must be found")


def round_robin_decide(candidates, state: RoundRobinState, rng: np.random.Generator):
    """CandidateView-based wrapper around round_robin_pick."""
    alive = np.zeros(state.permutation_buffer.size, dtype=bool)
    for c in candidates:
        alive[c.agent_id] = True
    return round_robin_pick(alive, state, rng)


@dataclass
class PFLikeState:
    accumulated_capacity: np.ndarray

    @classmethod
    def fresh(cls, n_agents: int) -> "PFLikeState":
        return cls(np.zeros(n_agents))


def pf_priorities(inst_capacity: np.ndarray, accumulated: np.ndarray) -> np.ndarray:
    # zero accumulated capacity means infinite priority (limit of the ratio)
    with np.errstate(divide="ignore"):
        return np.where(accumulated > 0.0, inst_capacity / accumulated, np.inf)


def pf_like_decide(candidates, state: PFLikeState, rng: np.random.Generator):
    """PF-like decision: argmax of instantaneous / accumulated capacity."""
    if not candidates:
        return None
    inst = np.array([np.log2(1.0 + c.snr_gamma) for c in candidates])
    acc = state.accumulated_capacity[[c.agent_id for c in candidates]]
    k = tie_break_max(pf_priorities(inst, acc), rng)
    return candidates[k].agent_id


def pf_update(state: PFLikeState, alive_flags: np.ndarray, gammas: np.ndarray) -> PFLikeState:
    """Accumulate this slot's instantaneous capacity for alive agents."""
    state.accumulated_capacity[alive_flags] += np.log2(1.0 + gammas[alive_flags])
    return state


# ---------------------------------------------------------------------------
# engine-facing policy objects


class OnlinePolicy:
    """ols/olt policy driving the array cores directly."""

    def __init__(self, solver: str, params: UtilityParams, floor_v: bool = True):
        if solver not in ("sum", "taylor"):
            raise ValueError(f"unknown solver: {solver!r}")
        self.solver = solver
        self.params = params
        self.floor_v = floor_v
        self.needs_q = params.heuristic_kind == "Q"

    def decide(self, alive, idx, p, r, q, v_prev, log_cap, rng):
        if idx.size == 0:
            return None
        f = heuristic_values(self.params.heuristic_kind, p[idx], r[idx], q[idx] if q is not None else None)
        if self.solver == "sum":
            k = tie_break_min(ols_gains(p[idx], f, v_prev[idx], self.params.alpha), rng)
        else:
            k = tie_break_max(olt_scores(p[idx], f, v_prev[idx], self.params.alpha, self.floor_v), rng)
        return int(idx[k])

    def post_slot(self, alive, log_cap, allocated):
        pass


class RoundRobinPolicy:
    needs_q = False

    def __init__(self, n_agents: int, rng: np.random.Generator):
        self.state = init_round_robin(n_agents, rng)

    def decide(self, alive, idx, p, r, q, v_prev, log_cap, rng):
        return round_robin_pick(alive, self.state, rng)

    def post_slot(self, alive, log_cap, allocated):
        pass


class PFLikePolicy:
    needs_q = False

    def __init__(self, n_agents: int, omega_allocated: bool = False):
        self.state = PFLikeState.fresh(n_agents)
        # omega_allocated: accumulate capacity only on allocation instead of
        # on packet aliveness (alternate reading of the denominator weights)
        self.omega_allocated = omega_allocated

    def decide(self, alive, idx, p, r, q, v_prev, log_cap, rng):
        if idx.size == 0:
            return None
        prio = pf_priorities(log_cap[idx], self.state.accumulated_capacity[idx])
        return int(idx[tie_break_max(prio, rng)])

    def post_slot(self, alive, log_cap, allocated):
        acc = self.state.accumulated_capacity
        if self.omega_allocated:
            if allocated is not None:
                acc[allocated] += log_cap[allocated]
        else:
            acc[alive] += log_cap[alive]


def make_policy(
    scheduler_id: str,
    alpha: float,
    n_agents: int,
    rng: np.random.Generator,
    floor_v: bool = True,
    pf_omega_allocated: bool = False,
):
    """Instantiate the policy named by its CLI/config identifier."""
    if scheduler_id == "round-robin":
        return RoundRobinPolicy(n_agents, rng)
    if scheduler_id == "pf-like":
        return PFLikePolicy(n_agents, pf_omega_allocated)
    try:
        solver, kind = scheduler_id.split("-")
    except ValueError:
        solver, kind = "", ""
    if solver in ("ols", "olt") and kind in ("r", "q"):
        params = UtilityParams(alpha=alpha, heuristic_kind=kind.upper())
        return OnlinePolicy("sum" if solver == "ols" else "taylor", params, floor_v)
    raise ValueError(f"unknown scheduler id: {scheduler_id!r} (expected one of {SCHEDULER_IDS})")
