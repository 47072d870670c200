"""Two-sample tests: KS and MMD against independent oracles.

Expected values marked by hand below were derived with brute-force or
closed-form oracles, and the statistical bands come from seeded Monte Carlo
calibration runs.
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import kolmogorov

from eitest.errors import (
    DimensionMismatchError,
    EmptySampleError,
    NonUnivariateError,
    TooFewPointsError,
)
from eitest.twosample import (
    KernelSpec,
    ks_pvalue,
    ks_statistic,
    ks_test,
    median_heuristic_bandwidth,
    mmd2_biased,
    mmd_gamma_pvalue,
    mmd_permutation_pvalue,
    rbf_kernel,
)


def brute_ks(a, b):
    """O(n*m) sup over pooled evaluation points."""
    best = 0.0
    for v in np.concatenate([a, b]):
        best = max(best, abs(np.mean(a <= v) - np.mean(b <= v)))
    return best


def brute_mmd2(a, b, bandwidth):
    """Double-loop biased estimator, diagonals included."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]

    def k(u, v):
        d = u - v
        return math.exp(-float(np.dot(d, d)) / (2.0 * bandwidth * bandwidth))

    saa = sum(k(u, v) for u in a for v in a) / (len(a) ** 2)
    sbb = sum(k(u, v) for u in b for v in b) / (len(b) ** 2)
    sab = sum(k(u, v) for u in a for v in b) / (len(a) * len(b))
    return saa + sbb - 2.0 * sab


class TestKsStatistic:
    def test_identical_samples(self):
        assert ks_statistic([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_disjoint_supports(self):
        assert ks_statistic([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]) == 1.0

    def test_interleaved_hand_value(self):
        # ECDF steps: at 1.5 F_a=1/2, F_b=... sup reached at x=1 or 2: 0.5.
        assert ks_statistic([1.0, 2.0], [1.5, 2.5]) == 0.5

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        a, b = rng.standard_normal(17), rng.standard_normal(23)
        assert ks_statistic(a, b) == ks_statistic(b, a)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(1)
        a, b = rng.standard_normal(20), rng.standard_normal(30) + 0.5
        d1 = ks_statistic(a, b)
        d2 = ks_statistic(np.exp(a), np.exp(b))
        assert d1 == pytest.approx(d2, abs=1e-15)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n, m = rng.integers(1, 51, size=2)
            if rng.random() < 0.5:
                a = rng.standard_normal(n)
                b = rng.standard_normal(m)
            else:
                a = rng.integers(0, 5, size=n).astype(float)
                b = rng.integers(0, 5, size=m).astype(float)
            assert ks_statistic(a, b) == brute_ks(a, b)

    def test_empty_sample(self):
        with pytest.raises(EmptySampleError):
            ks_statistic([], [1.0])

    def test_non_univariate(self):
        with pytest.raises(NonUnivariateError):
            ks_statistic(np.zeros((3, 2)), np.zeros(3))


class TestKsPvalue:
    def test_zero_statistic(self):
        assert ks_pvalue(0.0, 10, 10) == 1.0

    def test_huge_effective_size(self):
        assert ks_pvalue(1.0, 1000, 1000) == 0.0

    def test_matches_kolmogorov_survival(self):
        # Same asymptotic series as scipy's Kolmogorov survival function.
        for lam in np.linspace(0.3, 3.0, 25):
            n = m = 200
            d = lam / math.sqrt(n * m / (n + m))
            assert ks_pvalue(d, n, m) == pytest.approx(
                min(1.0, float(kolmogorov(lam))), abs=1e-9
            )

    def test_monotone_in_statistic(self):
        ps = [ks_pvalue(d, 50, 60) for d in np.linspace(0.0, 1.0, 21)]
        assert all(p1 >= p2 for p1, p2 in zip(ps, ps[1:]))

    def test_validates_inputs(self):
        with pytest.raises(ValueError):
            ks_pvalue(1.5, 10, 10)
        with pytest.raises(ValueError):
            ks_pvalue(0.5, 0, 10)

    def test_null_calibration(self):
        # i.i.d. equal distributions, n=m=200: rejection at 5% must sit in
        # [0.03, 0.07] over 2000 trials.
        rng = np.random.default_rng(2024)
        rejections = 0
        for _ in range(2000):
            r = ks_test(rng.standard_normal(200), rng.standard_normal(200))
            rejections += r.p_value < 0.05
        assert 0.03 <= rejections / 2000 <= 0.07


class TestRbfKernel:
    def test_identical_points(self):
        assert rbf_kernel([1.0, 2.0], [1.0, 2.0], 1.5) == 1.0

    def test_analytic_value(self):
        # ||u - v|| = sigma * sqrt(2) gives exp(-1).
        sigma = 0.7
        assert rbf_kernel([0.0], [sigma * math.sqrt(2.0)], sigma) == pytest.approx(
            math.exp(-1.0), rel=1e-12
        )

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            u, v = rng.standard_normal(4), rng.standard_normal(4)
            assert rbf_kernel(u, v, 2.0) == rbf_kernel(v, u, 2.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            rbf_kernel([1.0], [1.0, 2.0], 1.0)

    def test_bad_bandwidth(self):
        with pytest.raises(ValueError):
            rbf_kernel([0.0], [1.0], 0.0)


class TestMedianHeuristic:
    def test_hand_value(self):
        # pairwise distances {1, 3, 2} -> median 2
        assert median_heuristic_bandwidth([0.0, 1.0, 3.0]) == 2.0

    def test_all_identical_fallback(self):
        assert median_heuristic_bandwidth([4.0, 4.0, 4.0]) == 1.0

    def test_tied_median_falls_back_to_smallest_nonzero(self):
        # distances: six zeros, four ones -> median 0 -> smallest nonzero 1
        assert median_heuristic_bandwidth([0.0, 0.0, 0.0, 0.0, 1.0]) == 1.0

    def test_scaling_homogeneity(self):
        rng = np.random.default_rng(4)
        pts = rng.standard_normal(12)
        s1 = median_heuristic_bandwidth(pts)
        s2 = median_heuristic_bandwidth(3.0 * pts)
        assert s2 == pytest.approx(3.0 * s1, rel=1e-12)

    def test_too_few_points(self):
        with pytest.raises(TooFewPointsError):
            median_heuristic_bandwidth([1.0])

    def test_kernel_path_matches_public_heuristic(self):
        # The pooled-kernel path selects the median through order statistics
        # of the full squared-distance matrix; on univariate data that must
        # agree exactly with the public pdist-based function.
        from eitest.twosample import _pooled_kernel

        rng = np.random.default_rng(21)
        spec = KernelSpec()
        for case in range(60):
            n = int(rng.integers(2, 30))
            m = int(rng.integers(2, 30))
            if case % 3 == 0:
                a = rng.integers(0, 3, n).astype(float)
                b = rng.integers(0, 3, m).astype(float)
            else:
                a = rng.standard_normal(n)
                b = rng.standard_normal(m)
            _, sigma = _pooled_kernel(a[:, None], b[:, None], spec)
            assert sigma == median_heuristic_bandwidth(np.concatenate([a, b]))

    def test_square_median_matches_condensed_median(self):
        # Order-statistic shortcut vs the literal median of the upper
        # triangle, on the same squared-distance matrix.
        from eitest.twosample import _median_bandwidth, _median_from_square, _sq_distances

        rng = np.random.default_rng(22)
        for case in range(120):
            p = int(rng.integers(4, 40))
            if case % 4 == 0:
                pts = rng.integers(0, 3, (p, 1)).astype(float)
            elif case % 4 == 1:
                pts = rng.standard_normal((p, 3))
            else:
                pts = rng.standard_normal((p, 1))
            d2 = _sq_distances(pts, pts)
            iu = np.triu_indices(p, k=1)
            assert _median_from_square(d2) == _median_bandwidth(np.sqrt(d2[iu]))


class TestMmd2Biased:
    def test_identical_multisets(self):
        a = [1.0, 2.0, 2.5]
        assert mmd2_biased(a, a) == pytest.approx(0.0, abs=1e-12)

    def test_two_point_closed_form(self):
        # a={0,0}, b={x,x}: MMD^2 = 2 - 2*exp(-x^2/(2 sigma^2))
        sigma, x = 1.3, 2.0
        got = mmd2_biased([0.0, 0.0], [x, x], KernelSpec(bandwidth=sigma))
        want = 2.0 - 2.0 * math.exp(-(x * x) / (2.0 * sigma * sigma))
        assert got == pytest.approx(want, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        a, b = rng.standard_normal(9), rng.standard_normal(13) + 1.0
        assert mmd2_biased(a, b) == pytest.approx(mmd2_biased(b, a), abs=1e-12)

    def test_matches_double_loop_univariate(self):
        rng = np.random.default_rng(6)
        for _ in range(40):
            n, m = rng.integers(2, 21, size=2)
            a = rng.standard_normal(int(n))
            b = rng.standard_normal(int(m)) + rng.normal()
            sigma = float(rng.uniform(0.5, 3.0))
            got = mmd2_biased(a, b, KernelSpec(bandwidth=sigma))
            assert got == pytest.approx(brute_mmd2(a, b, sigma), abs=1e-10)

    def test_matches_double_loop_multivariate(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = rng.standard_normal((int(rng.integers(2, 15)), 3))
            b = rng.standard_normal((int(rng.integers(2, 15)), 3))
            sigma = float(rng.uniform(0.5, 3.0))
            got = mmd2_biased(a, b, KernelSpec(bandwidth=sigma))
            assert got == pytest.approx(brute_mmd2(a, b, sigma), abs=1e-10)

    def test_too_few_points(self):
        with pytest.raises(TooFewPointsError):
            mmd2_biased([1.0], [2.0, 3.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            mmd2_biased(np.zeros((4, 2)), np.zeros((4, 3)))


class TestMmdGamma:
    def test_strong_separation(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal(64)
        b = rng.standard_normal(64) + 5.0
        res = mmd_gamma_pvalue(a, b)
        assert res.method == "mmd-gamma"
        assert res.p_value < 0.001
        assert res.sample_sizes == (64, 64)

    def test_null_calibration(self):
        # n=m=128 equal distributions: rejection at 5% within [0.02, 0.10]
        # over 2000 trials (the gamma fit over-rejects slightly).
        rng = np.random.default_rng(99)
        rejections = 0
        for _ in range(2000):
            res = mmd_gamma_pvalue(rng.standard_normal(128), rng.standard_normal(128))
            rejections += res.p_value < 0.05
        assert 0.02 <= rejections / 2000 <= 0.10

    def test_degenerate_kernel_falls_back_to_permutation(self):
        res = mmd_gamma_pvalue([1.0, 1.0, 1.0], [1.0, 1.0, 1.0],
                               rng=np.random.default_rng(0))
        assert res.method == "mmd-permutation"
        assert res.p_value == 1.0

    def test_p_value_in_range(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            res = mmd_gamma_pvalue(rng.standard_normal(16),
                                   rng.standard_normal(16) + rng.normal())
            assert 0.0 <= res.p_value <= 1.0


class TestMmdPermutation:
    def test_p_value_bounds(self):
        rng = np.random.default_rng(11)
        res = mmd_permutation_pvalue(rng.standard_normal(20),
                                     rng.standard_normal(20),
                                     permutations=99,
                                     rng=np.random.default_rng(1))
        assert 1.0 / 100.0 <= res.p_value <= 1.0
        assert res.method == "mmd-permutation"

    def test_identical_samples_never_reject(self):
        a = list(np.random.default_rng(12).standard_normal(15))
        res = mmd_permutation_pvalue(a, a, permutations=199,
                                     rng=np.random.default_rng(2))
        assert res.p_value > 0.9

    def test_deterministic_given_rng(self):
        rng = np.random.default_rng(13)
        a, b = rng.standard_normal(25), rng.standard_normal(25) + 0.4
        p1 = mmd_permutation_pvalue(a, b, permutations=199,
                                    rng=np.random.default_rng(7)).p_value
        p2 = mmd_permutation_pvalue(a, b, permutations=199,
                                    rng=np.random.default_rng(7)).p_value
        assert p1 == p2

    def test_rejects_strong_separation(self):
        rng = np.random.default_rng(14)
        a = rng.standard_normal(50)
        b = rng.standard_normal(50) + 4.0
        res = mmd_permutation_pvalue(a, b, permutations=999,
                                     rng=np.random.default_rng(3))
        assert res.p_value == pytest.approx(1.0 / 1000.0)

    def test_too_few_permutations(self):
        with pytest.raises(ValueError):
            mmd_permutation_pvalue([1.0, 2.0], [3.0, 4.0], permutations=50)

    def test_agrees_with_gamma(self):
        # Moderate separation, n=m=100: the two null approximations must
        # land within 0.05 of each other.
        rng = np.random.default_rng(15)
        a = rng.standard_normal(100)
        b = rng.standard_normal(100) + 0.25
        pg = mmd_gamma_pvalue(a, b).p_value
        pp = mmd_permutation_pvalue(a, b, permutations=2000,
                                    rng=np.random.default_rng(4)).p_value
        assert abs(pg - pp) <= 0.05


class TestKernelSpec:
    def test_defaults(self):
        spec = KernelSpec()
        assert spec.kind == "rbf"
        assert spec.bandwidth is None

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            KernelSpec(kind="linear")

    def test_rejects_nonpositive_bandwidth(self):
        with pytest.raises(ValueError):
            KernelSpec(bandwidth=0.0)
