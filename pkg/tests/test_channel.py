import numpy as np
import pytest

from appsched.channel import (
    draw_realization,
    linear_means,
    log_means,
    snr_from_error_prob,
    transmission_outcome,
)


class TestLinearMeans:
    def test_endpoints(self):
        np.testing.assert_allclose(linear_means(2, 1e-3, 1e-1), [0.001, 0.1])

    def test_middle_entry(self):
        means = linear_means(100, 1e-3, 1e-1)
        assert means[50] == pytest.approx(0.001 + 50 * 0.099 / 99)

    def test_arithmetic_progression(self):
        np.testing.assert_allclose(linear_means(3, 0.1, 0.3), [0.1, 0.2, 0.3])

    def test_single_agent(self):
        np.testing.assert_allclose(linear_means(1, 1e-3, 1e-1), [1e-3])

    def test_all_distinct(self):
        means = linear_means(100, 1e-3, 1e-1)
        assert len(set(means.tolist())) == 100

    def test_invalid_bounds(self):
        with pytest.raises(ValueError):
            linear_means(5, 0.2, 0.1)
        with pytest.raises(ValueError):
            linear_means(5, 0.0, 0.1)


class TestLogMeans:
    def test_endpoints_and_geometric_ratio(self):
        means = log_means(3, 1e-3, 1e-1)
        np.testing.assert_allclose(means, [1e-3, 1e-2, 1e-1])

    def test_all_distinct_increasing(self):
        means = log_means(100, 1e-3, 1e-1)
        assert np.all(np.diff(means) > 0)


class TestDrawRealization:
    def test_degenerate_jitter_reproduces_means(self):
        rng = np.random.default_rng(0)
        np.testing.assert_allclose(draw_realization(np.array([0.01]), 1.0, rng), [0.01])

    def test_jitter_bounds(self):
        rng = np.random.default_rng(1)
        draws = np.concatenate(
            [draw_realization(np.array([0.01]), 2.0, rng) for _ in range(10_000)]
        )
        assert draws.min() >= 0.005
        assert draws.max() <= 0.02

    def test_clamped_below_one(self):
        rng = np.random.default_rng(2)
        draws = np.concatenate(
            [draw_realization(np.array([0.5]), 4.0, rng) for _ in range(2000)]
        )
        assert draws.max() < 1.0

    def test_mean_recovery(self):
        # jitter is symmetric in the log domain: the geometric mean of many
        # draws recovers each configured mean (the arithmetic mean carries a
        # known bias of (j - 1/j)/(2 ln j), about +8.2% at j=2)
        means = np.array([0.001, 0.01, 0.05])
        rng = np.random.default_rng(3)
        draws = np.stack([draw_realization(means, 2.0, rng) for _ in range(10_000)])
        geo = np.exp(np.log(draws).mean(axis=0))
        np.testing.assert_allclose(geo, means, rtol=0.05)
        avg = draws.mean(axis=0)
        np.testing.assert_allclose(avg, means * 1.5 / (2 * np.log(2)), rtol=0.05)
        assert np.all(np.diff(avg) > 0)  # ordering preserved

    def test_jitter_below_one_rejected(self):
        with pytest.raises(ValueError):
            draw_realization(np.array([0.01]), 0.5, np.random.default_rng(0))


class TestTransmissionOutcome:
    def test_near_perfect_channel(self):
        rng = np.random.default_rng(4)
        assert all(transmission_outcome(1e-12, rng) for _ in range(1000))

    def test_hopeless_channel(self):
        rng = np.random.default_rng(5)
        assert not any(transmission_outcome(1 - 1e-12, rng) for _ in range(1000))

    def test_empirical_rate(self):
        rng = np.random.default_rng(6)
        hits = sum(transmission_outcome(0.1, rng) for _ in range(100_000))
        assert hits / 100_000 == pytest.approx(0.9, abs=0.01)


class TestSnrMap:
    def test_symmetry_point(self):
        assert snr_from_error_prob(0.5) == pytest.approx(1.0)

    def test_direct_values(self):
        assert snr_from_error_prob(0.1) == pytest.approx(9.0)
        assert snr_from_error_prob(0.001) == pytest.approx(999.0)

    def test_bijection_roundtrip(self):
        p = np.linspace(1e-6, 1 - 1e-6, 1000)
        gamma = snr_from_error_prob(p)
        np.testing.assert_allclose(1.0 / (1.0 + gamma), p, atol=1e-12)

    def test_strictly_decreasing(self):
        p = np.linspace(0.01, 0.99, 99)
        assert np.all(np.diff(snr_from_error_prob(p)) < 0)
