import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from appsched.metrics import RunSummary, aggregate, aggregate_summaries, f_of_t, steady_slope


class TestFofT:
    def test_zero_violations(self):
        assert f_of_t(0, 17) == 0.0

    def test_direct_division(self):
        assert f_of_t(50, 100) == pytest.approx(0.5)

    def test_t_zero_rejected(self):
        with pytest.raises(ValueError):
            f_of_t(3, 0)


class TestSteadySlope:
    def test_exact_line(self):
        s = 3 * np.arange(200)
        assert steady_slope(s, 100) == pytest.approx(3.0, abs=1e-9)

    def test_flat_tail(self):
        assert steady_slope(np.full(100, 42.0), 50) == 0.0

    def test_noisy_line(self):
        t = np.arange(6000)
        s = t + 0.5 * (-1.0) ** t
        assert steady_slope(s, 5000) == pytest.approx(1.0, abs=1e-3)

    def test_only_window_tail_counts(self):
        # steep start, flat tail
        s = np.concatenate([np.arange(0, 1000, 10), np.full(100, 990)])
        assert steady_slope(s, 100) == pytest.approx(0.0, abs=1e-9)

    def test_affine_tail_is_exact(self):
        s = np.concatenate([np.zeros(50), 7 + 2.5 * np.arange(150)])
        assert steady_slope(s, 100) == pytest.approx(2.5, rel=1e-9)

    def test_window_validation(self):
        with pytest.raises(ValueError):
            steady_slope(np.arange(10), 11)
        with pytest.raises(ValueError):
            steady_slope(np.arange(10), 1)

    @given(st.lists(st.integers(0, 5), min_size=2, max_size=60))
    def test_nondecreasing_series_has_nonnegative_slope(self, increments):
        s = np.cumsum(increments)
        slope = steady_slope(s, len(s))
        assert slope >= 0.0
        assert slope <= 5.0  # bounded by max per-slot increment

    def test_consistency_with_f_of_t_on_affine_tail(self):
        # F(t) = S(t)/t converges to the tail slope when growth is linear
        s = 0.25 * np.arange(1, 20_001)
        assert f_of_t(s[-1], 20_000) == pytest.approx(steady_slope(s, 5000), rel=1e-6)


class TestAggregate:
    def test_constant_values(self):
        assert aggregate([0.5, 0.5, 0.5]) == (0.5, 0.0, 3)

    def test_two_point_formula(self):
        mean, stderr, n = aggregate([0.0, 1.0])
        assert (mean, n) == (0.5, 2)
        assert stderr == pytest.approx(0.5)

    def test_single_value(self):
        assert aggregate([0.7]) == (0.7, 0.0, 1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_statistical_self_test(self):
        rng = np.random.default_rng(0)
        values = rng.normal(2.0, 0.3, size=1000)
        mean, stderr, n = aggregate(values.tolist())
        assert n == 1000
        assert abs(mean - 2.0) < 3 * stderr

    def test_order_independent_sum_but_ordered_reduction(self):
        vals = [0.1, 0.2, 0.3, 0.4]
        assert aggregate(vals)[0] == pytest.approx(sum(vals) / 4)


class TestAggregateSummaries:
    def _summary(self, f, sid="olt-r", R=100):
        return RunSummary(sid, 0.0, "R", R, f, 10, 1000)

    def test_homogeneous(self):
        mean, stderr, n = aggregate_summaries([self._summary(0.1), self._summary(0.3)])
        assert mean == pytest.approx(0.2)
        assert n == 2

    def test_heterogeneous_rejected(self):
        with pytest.raises(ValueError):
            aggregate_summaries([self._summary(0.1), self._summary(0.1, R=105)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_summaries([])
