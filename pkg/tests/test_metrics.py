import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst
from numpy.testing import assert_allclose

from epimoo.errors import MetricError
from epimoo.metrics import (
    IGDTrace,
    igd,
    interval_means,
    nondominated,
    percent_diff_intervals,
    percent_diff_total,
)


def igd_bruteforce(obtained, reference):
    total = 0.0
    for r in reference:
        best = math.inf
        for o in obtained:
            best = min(best, math.dist(r, o))
        total += best
    return total / len(reference)


class TestIGD:
    def test_self_distance_is_zero(self):
        pts = np.array([[0.0, 1.0], [0.3, 0.4], [1.0, 0.0]])
        assert igd(pts, pts) == 0.0

    def test_two_point_hand_value(self):
        # nearest obtained point to (1,0) is (0,1) at distance sqrt(2)
        val = igd(np.array([[0.0, 1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert_allclose(val, math.sqrt(2.0) / 2.0, atol=1e-15)

    def test_345_triangle(self):
        assert igd(np.array([[3.0, 4.0]]), np.array([[0.0, 0.0]])) == 5.0

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_bruteforce(self, seed):
        rng = np.random.default_rng(seed)
        obtained = rng.uniform(0, 10, size=(int(rng.integers(1, 40)), 2))
        reference = rng.uniform(0, 10, size=(int(rng.integers(1, 40)), 2))
        assert_allclose(igd(obtained, reference), igd_bruteforce(obtained, reference), atol=1e-12)

    def test_scale_covariance_and_translation_invariance(self):
        rng = np.random.default_rng(11)
        obtained = rng.uniform(0, 1, size=(25, 2))
        reference = rng.uniform(0, 1, size=(30, 2))
        base = igd(obtained, reference)
        assert_allclose(igd(3.5 * obtained, 3.5 * reference), 3.5 * base, rtol=1e-12)
        shift = np.array([2.0, -7.0])
        assert_allclose(igd(obtained + shift, reference + shift), base, rtol=1e-12)

    def test_empty_set_rejected(self):
        with pytest.raises(MetricError):
            igd(np.empty((0, 2)), np.array([[0.0, 0.0]]))


class TestNondominated:
    def test_filters_dominated(self):
        pts = np.array([[0.0, 1.0], [0.5, 0.5], [0.6, 0.6], [1.0, 0.0]])
        nd = nondominated(pts)
        assert [0.6, 0.6] not in nd.tolist()
        assert len(nd) == 3

    @given(hst.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_no_survivor_dominates_another(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(0, 1, size=(30, 2))
        nd = nondominated(pts)
        for i in range(len(nd)):
            for j in range(len(nd)):
                if i != j:
                    assert not (np.all(nd[i] <= nd[j]) and np.any(nd[i] < nd[j]))


class TestIntervals:
    def test_identity_at_interval_one(self):
        trace = np.array([0.5, 0.4, 0.3])
        assert_allclose(interval_means([trace], 1), trace)

    def test_mean_across_runs(self):
        a = np.full(6, 0.2)
        b = np.full(6, 0.4)
        assert_allclose(interval_means([a, b], 2), [0.3, 0.3, 0.3])

    def test_length_arithmetic(self):
        runs = np.random.default_rng(0).uniform(0.1, 1.0, size=(5, 200))
        assert interval_means(runs, 2).shape == (100,)

    def test_ragged_rejected(self):
        with pytest.raises(MetricError):
            interval_means(np.ones(7)[None, :], 2)


class TestPercentDiff:
    def test_identical_is_zero(self):
        base = np.array([0.3, 0.3, 0.3])
        assert percent_diff_total(base, base) == 0.0

    def test_halving_gives_plus_100(self):
        assert percent_diff_total(np.array([0.2, 0.2]), np.array([0.1, 0.1])) == 100.0

    def test_doubling_gives_minus_100(self):
        assert percent_diff_total(np.array([0.1]), np.array([0.2])) == -100.0

    def test_interval_sign_antisymmetry(self):
        rng = np.random.default_rng(5)
        base = rng.uniform(0.1, 1.0, size=20)
        var = rng.uniform(0.1, 1.0, size=20)
        forward = percent_diff_intervals(base, var)
        backward = percent_diff_intervals(var, base)
        assert np.all(np.sign(forward) == -np.sign(backward))

    def test_zero_baseline_rejected(self):
        with pytest.raises(MetricError):
            percent_diff_total(np.array([0.0, 0.1]), np.array([0.1, 0.1]))


class TestTrace:
    def test_validation(self):
        with pytest.raises(MetricError):
            IGDTrace("fda1", "e", 1, np.array([0, 0]), np.array([0.0, 0.0]), np.array([0.1, 0.1]))
        with pytest.raises(MetricError):
            IGDTrace("fda1", "e", 1, np.array([0, 1]), np.array([0.0, 0.0]), np.array([0.1, -0.1]))
