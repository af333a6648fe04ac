"""Channel error-probability model.

Per-agent error probabilities are spread linearly between a low and a high
bound, then jittered multiplicatively once per simulation run to create a
non-static environment. Per-slot transmissions fail independently with the
agent's error probability.
"""

import numpy as np

_CLAMP_EPS = 1e-9


def linear_means(n_agents: int, p_lo: float, p_hi: float) -> np.ndarray:
    """Arithmetically spaced mean error probabilities, one per agent."""
    if not 0.0 < p_lo < p_hi < 1.0:
        raise ValueError("require 0 < p_lo < p_hi < 1")
    if n_agents < 1:
        raise ValueError("n_agents must be >= 1")
    if n_agents == 1:
        return np.array([p_lo])
    return np.linspace(p_lo, p_hi, n_agents)


def log_means(n_agents: int, p_lo: float, p_hi: float) -> np.ndarray:
    """Geometrically spaced mean error probabilities, one per agent.

    Default spacing for experiments: it keeps order-of-magnitude separation
    between agents across the [p_lo, p_hi] range.
    """
    if not 0.0 < p_lo < p_hi < 1.0:
        raise ValueError("require 0 < p_lo < p_hi < 1")
    if n_agents < 1:
        raise ValueError("n_agents must be >= 1")
    if n_agents == 1:
        return np.array([p_lo])
    return np.geomspace(p_lo, p_hi, n_agents)


def draw_realization(
    means: np.ndarray, jitter_factor: float, rng: np.random.Generator
) -> np.ndarray:
    """One error probability per agent, jittered around its mean.

    The jitter is log-symmetric: each mean is multiplied by
    ``jitter_factor**u`` with u uniform in [-1, 1], then clamped into (0, 1).
    ``jitter_factor=1`` reproduces the means exactly.
    """
    if jitter_factor < 1.0:
        raise ValueError("jitter_factor must be >= 1")
    means = np.asarray(means, dtype=float)
    u = rng.uniform(-1.0, 1.0, size=means.shape)
    return np.clip(means * jitter_factor**u, _CLAMP_EPS, 1.0 - _CLAMP_EPS)


def transmission_outcome(p: float, rng: np.random.Generator) -> bool:
    """True (success) with probability 1 - p."""
    return rng.random() >= p


def snr_from_error_prob(p):
    """Linear SNR associated with an error probability: gamma = 1/p - 1.

    Monotone decreasing bijection from (0, 1) onto (0, inf); the inverse is
    p = 1 / (1 + gamma).
    """
    return 1.0 / np.asarray(p, dtype=float) - 1.0
