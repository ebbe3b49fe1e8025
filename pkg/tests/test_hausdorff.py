import numpy as np
import pytest

from mobcover import (
    CalibrationConfig,
    Classification,
    EmbeddingSet,
    Metric,
    calibrate_tau,
    coupling,
    directed_hausdorff,
)
from mobcover.errors import DegenerateSampleError, DimensionMismatchError

from conftest import random_set


def brute_directed(a, b):
    """Double-loop min/max oracle."""
    worst = 0.0
    for x in a:
        best = min(np.linalg.norm(x - y) for y in b)
        worst = max(worst, best)
    return worst


class TestDirectedHausdorff:
    def test_identical_sets_zero(self, backend):
        rng = np.random.default_rng(0)
        a = random_set(rng, 10, 4)
        assert directed_hausdorff(a, a, Metric.RAW_EUCLIDEAN) == 0.0
        assert directed_hausdorff(a, a, Metric.NORMALIZED_EUCLIDEAN) == 0.0

    def test_forced_geometry(self):
        a = EmbeddingSet(np.array([[0.0, 0.0], [1.0, 0.0]]))
        b = EmbeddingSet(np.array([[0.0, 0.0]]))
        assert directed_hausdorff(a, b, Metric.RAW_EUCLIDEAN) == 1.0
        assert directed_hausdorff(b, a, Metric.RAW_EUCLIDEAN) == 0.0

    def test_dimension_mismatch(self):
        a = EmbeddingSet(np.ones((2, 3)))
        b = EmbeddingSet(np.ones((2, 4)))
        with pytest.raises(DimensionMismatchError):
            directed_hausdorff(a, b, Metric.RAW_EUCLIDEAN)

    def test_matches_double_loop_oracle(self, backend):
        rng = np.random.default_rng(11)
        for _ in range(40):
            a = random_set(rng, int(rng.integers(1, 30)), int(rng.integers(1, 6)))
            b = random_set(rng, int(rng.integers(1, 30)), a.d)
            got = directed_hausdorff(a, b, Metric.RAW_EUCLIDEAN)
            want = brute_directed(a.data, b.data)
            assert got == pytest.approx(want, rel=1e-9)

    def test_monotone_containment(self):
        rng = np.random.default_rng(5)
        a = random_set(rng, 12, 3)
        big = random_set(rng, 20, 3)
        small = EmbeddingSet(big.data[:8])
        d_small = directed_hausdorff(a, small, Metric.RAW_EUCLIDEAN)
        d_big = directed_hausdorff(a, big, Metric.RAW_EUCLIDEAN)
        assert d_big <= d_small


class TestCoupling:
    def test_identical_sets_strong(self):
        rng = np.random.default_rng(1)
        v = random_set(rng, 8, 3)
        rep = coupling(v, v, Metric.RAW_EUCLIDEAN, CalibrationConfig(tau=0.5))
        assert rep.eta == 0.0
        assert rep.classification is Classification.STRONG

    def test_forced_geometry(self):
        v = EmbeddingSet(np.array([[0.0, 0.0], [1.0, 0.0]]))
        p = EmbeddingSet(np.array([[0.0, 0.0]]))
        rep = coupling(v, p, Metric.RAW_EUCLIDEAN)
        assert rep.h_v_to_p == 1.0
        assert rep.h_p_to_v == 0.0
        assert rep.eta == 1.0
        assert rep.classification is Classification.UNCLASSIFIED

    def test_tie_at_tau_is_strong(self):
        v = EmbeddingSet(np.array([[0.0, 0.0], [1.0, 0.0]]))
        p = EmbeddingSet(np.array([[0.0, 0.0]]))
        rep = coupling(v, p, Metric.RAW_EUCLIDEAN, CalibrationConfig(tau=1.0))
        assert rep.classification is Classification.STRONG

    def test_symmetry_and_brute_force(self, backend):
        rng = np.random.default_rng(23)
        for _ in range(20):
            v = random_set(rng, int(rng.integers(2, 25)), 4)
            p = random_set(rng, int(rng.integers(1, 10)), 4)
            fwd = coupling(v, p, Metric.RAW_EUCLIDEAN)
            rev = coupling(p, v, Metric.RAW_EUCLIDEAN)
            assert fwd.eta == rev.eta
            want = max(brute_directed(v.data, p.data), brute_directed(p.data, v.data))
            assert fwd.eta == pytest.approx(want, rel=1e-9)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            a = random_set(rng, 8, 3)
            b = random_set(rng, 6, 3)
            c = random_set(rng, 7, 3)
            h = lambda x, y: coupling(x, y, Metric.RAW_EUCLIDEAN).eta
            assert h(a, c) <= h(a, b) + h(b, c) + 1e-9

    def test_zero_distance_implies_coincidence(self):
        rng = np.random.default_rng(9)
        a = random_set(rng, 6, 3)
        perm = EmbeddingSet(a.data[::-1])
        assert coupling(a, perm, Metric.RAW_EUCLIDEAN).eta == 0.0


class TestCalibration:
    def test_two_cluster_midpoint(self):
        calib = calibrate_tau([0.1, 0.12, 0.9, 0.92])
        assert calib.tau == pytest.approx(0.51, abs=1e-12)
        assert calib.source == "calibrated"

    def test_zero_variance(self):
        with pytest.raises(DegenerateSampleError):
            calibrate_tau([1.0, 1.0, 1.0, 1.0])

    def test_too_few(self):
        with pytest.raises(DegenerateSampleError):
            calibrate_tau([0.1, 0.9, 0.5])

    def test_separated_modes_against_exhaustive_split(self):
        rng = np.random.default_rng(77)
        lo = rng.uniform(0.05, 0.3, size=60)
        hi = rng.uniform(0.8, 1.1, size=40)
        sample = np.concatenate([lo, hi])
        rng.shuffle(sample)
        calib = calibrate_tau(sample)
        assert lo.max() < calib.tau < hi.min()

        # independent exhaustive-split check
        vals = np.sort(sample)
        best = (np.inf, None)
        for split in range(1, len(vals)):
            l, h = vals[:split], vals[split:]
            cost = ((l - l.mean()) ** 2).sum() + ((h - h.mean()) ** 2).sum()
            if cost < best[0]:
                best = (cost, 0.5 * (l.mean() + h.mean()))
        assert calib.tau == pytest.approx(best[1], abs=1e-12)

    def test_tau_positive_with_zeros_present(self):
        calib = calibrate_tau([0.0, 0.0, 0.0, 1.0])
        assert calib.tau == pytest.approx(0.5)
