"""Two-sample tests: Kolmogorov-Smirnov and kernel maximum mean discrepancy.

The KS test compares empirical distribution functions of univariate samples
and uses the asymptotic Kolmogorov distribution for its p-value.  The MMD
test embeds both samples in an RBF-kernel feature space and works in any
dimension; its null distribution is approximated either by a moment-matched
gamma fit or by label permutations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist
from scipy.special import gammaincc

from .errors import (
    DimensionMismatchError,
    EmptySampleError,
    NonUnivariateError,
    TooFewPointsError,
)

KS = "ks"
MMD_GAMMA = "mmd-gamma"
MMD_PERMUTATION = "mmd-permutation"


@dataclass(frozen=True)
class TwoSampleResult:
    """Outcome of one pairwise comparison."""

    statistic: float
    p_value: float
    method: str
    sample_sizes: tuple[int, int]


@dataclass(frozen=True)
class KernelSpec:
    """RBF kernel configuration.  bandwidth=None selects the median heuristic
    on the pooled sample at test time."""

    kind: str = "rbf"
    bandwidth: float | None = None

    def __post_init__(self):
        if self.kind != "rbf":
            raise ValueError(f"unsupported kernel kind: {self.kind!r}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")


def _as_univariate(sample, name: str) -> np.ndarray:
    arr = np.asarray(sample, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise NonUnivariateError(f"{name} must be univariate, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptySampleError(f"{name} is empty")
    return arr


def _as_points(sample, name: str) -> np.ndarray:
    """Normalize a sample to shape (n, d)."""
    arr = np.asarray(sample, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 1- or 2-dimensional, got shape {arr.shape}")
    return arr


def ks_statistic(a, b) -> float:
    """Supremum distance between the two empirical distribution functions.

    Both ECDFs are evaluated (right-continuously) at the pooled sorted unique
    values, which handles ties deterministically.
    """
    a = _as_univariate(a, "a")
    b = _as_univariate(b, "b")
    pooled = np.unique(np.concatenate([a, b]))
    cdf_a = np.searchsorted(np.sort(a), pooled, side="right") / a.size
    cdf_b = np.searchsorted(np.sort(b), pooled, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def ks_pvalue(statistic: float, n: int, m: int) -> float:
    """Asymptotic two-sample KS p-value.

    Evaluates the Kolmogorov survival series
    2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lam^2) at lam = sqrt(nm/(n+m)) * D,
    truncating once a term drops below 1e-12, and clamps to [0, 1].
    """
    if not 0.0 <= statistic <= 1.0:
        raise ValueError(f"KS statistic must be in [0, 1], got {statistic}")
    if n < 1 or m < 1:
        raise ValueError("sample sizes must be >= 1")
    lam = math.sqrt(n * m / (n + m)) * statistic
    # Below 0.2 the series sums to 1 within 1e-12, so skip it (it converges
    # very slowly there).
    if lam < 0.2:
        return 1.0
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * lam * lam)
        if term < 1e-12:
            break
        total += sign * term
        sign = -sign
        j += 1
    return float(min(1.0, max(0.0, 2.0 * total)))


def ks_test(a, b) -> TwoSampleResult:
    """KS statistic plus asymptotic p-value, packaged as a TwoSampleResult."""
    a = _as_univariate(a, "a")
    b = _as_univariate(b, "b")
    d = ks_statistic(a, b)
    return TwoSampleResult(
        statistic=d,
        p_value=ks_pvalue(d, a.size, b.size),
        method=KS,
        sample_sizes=(a.size, b.size),
    )


def rbf_kernel(u, v, bandwidth: float) -> float:
    """Gaussian kernel exp(-||u - v||^2 / (2 * bandwidth^2)) for two points."""
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if u.shape != v.shape:
        raise DimensionMismatchError(f"points have shapes {u.shape} and {v.shape}")
    diff = u - v
    return float(np.exp(-np.dot(diff, diff) / (2.0 * bandwidth * bandwidth)))


def _median_bandwidth(distances: np.ndarray) -> float:
    """Median pairwise distance with tie fallbacks: smallest nonzero distance
    if the median is zero, 1.0 if every distance is zero."""
    med = float(np.median(distances))
    if med > 0.0:
        return med
    nonzero = distances[distances > 0.0]
    if nonzero.size:
        return float(nonzero.min())
    return 1.0


def median_heuristic_bandwidth(pooled) -> float:
    """Median Euclidean distance over all pairs of distinct pooled points."""
    pts = _as_points(pooled, "pooled")
    if pts.shape[0] < 2:
        raise TooFewPointsError("median heuristic needs at least two points")
    return _median_bandwidth(pdist(pts))


def _sq_distances(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape[1] == 1:
        diff = x[:, 0][:, None] - y[:, 0][None, :]
        return diff * diff
    xx = np.einsum("ij,ij->i", x, x)
    yy = np.einsum("ij,ij->i", y, y)
    d2 = xx[:, None] + yy[None, :] - 2.0 * (x @ y.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def _check_mmd_inputs(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = _as_points(a, "a")
    b = _as_points(b, "b")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatchError(
            f"samples have dimensions {a.shape[1]} and {b.shape[1]}"
        )
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise TooFewPointsError("MMD needs at least two points per sample")
    return a, b


def _median_from_square(d2: np.ndarray) -> float:
    """Median pairwise distance read off the full squared-distance matrix.

    The flattened matrix holds every condensed squared distance twice plus p
    diagonal zeros, so the condensed median is the average of the full
    matrix's order statistics at positions p + P - 1 and p + P (0-based,
    P = p(p-1)/2).  Matches np.median of the condensed distances bitwise,
    including the same two-element average on even counts.
    """
    p = d2.shape[0]
    pairs = p * (p - 1) // 2
    flat = d2.ravel().copy()
    k1 = p + pairs - 1
    flat.partition((k1, k1 + 1))
    med = 0.5 * (math.sqrt(flat[k1]) + math.sqrt(flat[k1 + 1]))
    if med > 0.0:
        return med
    nonzero = flat[flat > 0.0]
    if nonzero.size:
        return math.sqrt(float(nonzero.min()))
    return 1.0


def _pooled_kernel(a: np.ndarray, b: np.ndarray, kernel: KernelSpec) -> tuple[np.ndarray, float]:
    """Kernel matrix of the pooled sample (a rows first), plus the bandwidth used."""
    pooled = np.concatenate([a, b], axis=0)
    d2 = _sq_distances(pooled, pooled)
    sigma = kernel.bandwidth
    if sigma is None:
        sigma = _median_from_square(d2)
    np.divide(d2, -2.0 * sigma * sigma, out=d2)
    np.exp(d2, out=d2)
    return d2, sigma


def _mmd2_from_blocks(pooled_k: np.ndarray, n: int) -> float:
    kaa = pooled_k[:n, :n]
    kbb = pooled_k[n:, n:]
    kab = pooled_k[:n, n:]
    val = float(kaa.mean() + kbb.mean() - 2.0 * kab.mean())
    return max(val, 0.0)


def mmd2_biased(a, b, kernel: KernelSpec = KernelSpec()) -> float:
    """Biased (V-statistic) squared MMD: mean(Kaa) + mean(Kbb) - 2 mean(Kab),
    diagonals included.  Non-negative by construction."""
    a, b = _check_mmd_inputs(a, b)
    pooled_k, _ = _pooled_kernel(a, b, kernel)
    return _mmd2_from_blocks(pooled_k, a.shape[0])


def _null_moments(pooled_k: np.ndarray, n: int, m: int) -> tuple[float, float]:
    """Estimated mean and variance of the biased MMD^2 under the null.

    Matches moments of the statistic's limiting weighted-chi-square form:
    the mean comes from the trace of the centred kernel operator, the
    variance from its squared Hilbert-Schmidt norm, both estimated on the
    pooled sample.
    """
    p = n + m
    total = float(pooled_k.sum())
    trace = float(np.trace(pooled_k))
    mean_diag = trace / p
    mean_off = (total - trace) / (p * (p - 1))
    # Off-diagonal energy of the doubly centred kernel, expanded so no p x p
    # temporary is needed: sum(C^2) = sum(K^2) - 2p sum(r^2) + p^2 g^2 with
    # r the row means and g the grand mean.
    row_means = pooled_k.mean(axis=1)
    g = total / (p * p)
    sum_sq = float(np.einsum("ij,ij->", pooled_k, pooled_k))
    sum_r2 = float(row_means @ row_means)
    diag = np.diagonal(pooled_k) - 2.0 * row_means + g
    energy = sum_sq - 2.0 * p * sum_r2 + p * p * g * g - float(diag @ diag)
    hs = max(energy, 0.0) / (p * (p - 1))
    inv = 1.0 / n + 1.0 / m
    return inv * (mean_diag - mean_off), 2.0 * inv * inv * hs


def _permutation_pvalues(
    pooled_k: np.ndarray,
    n: int,
    m: int,
    permutations: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Permutation p-value and observed statistic from a pooled kernel matrix.

    Label shuffles preserve group sizes.  Per-permutation statistics are
    evaluated through indicator-vector algebra so one matrix product covers a
    whole block of permutations; the observed statistic goes through the same
    arithmetic to keep comparisons exchangeable.
    """
    p = n + m
    # Single precision is plenty here: the p-value is a count, and observed
    # and permuted statistics go through the identical arithmetic, which is
    # all the exchangeability argument needs.
    k32 = pooled_k.astype(np.float32)
    row_sums = k32.sum(axis=1)
    total = row_sums.sum()

    def stats_for(indicators: np.ndarray) -> np.ndarray:
        kz = k32 @ indicators
        s_aa = np.einsum("ij,ij->j", indicators, kz)
        s_a = row_sums @ indicators
        s_ab = s_a - s_aa
        s_bb = total - s_aa - 2.0 * s_ab
        return s_aa / (n * n) + s_bb / (m * m) - 2.0 * s_ab / (n * m)

    identity = np.zeros((p, 1), dtype=np.float32)
    identity[:n, 0] = 1.0
    observed = float(stats_for(identity)[0])

    exceed = 0
    block = 512
    done = 0
    while done < permutations:
        width = min(block, permutations - done)
        # Ranks of iid uniforms are uniform permutations, so the positions of
        # the n smallest per row are a uniform size-n relabelling.
        u = rng.random((width, p))
        idx = np.argpartition(u, n - 1, axis=1)[:, :n]
        z = np.zeros((p, width), dtype=np.float32)
        z[idx.T, np.arange(width)[None, :]] = 1.0
        exceed += int(np.count_nonzero(stats_for(z) >= observed))
        done += width
    p_value = (1.0 + exceed) / (permutations + 1.0)
    return p_value, max(observed, 0.0)


def mmd_permutation_pvalue(
    a,
    b,
    kernel: KernelSpec = KernelSpec(),
    permutations: int = 999,
    rng: np.random.Generator | None = None,
) -> TwoSampleResult:
    """Exact-null MMD test: p = (1 + #{permuted >= observed}) / (B + 1).

    The kernel matrix is computed once on the pooled sample and reused for
    every permutation.
    """
    if permutations < 99:
        raise ValueError(f"need at least 99 permutations, got {permutations}")
    a, b = _check_mmd_inputs(a, b)
    if rng is None:
        rng = np.random.default_rng()
    n, m = a.shape[0], b.shape[0]
    pooled_k, _ = _pooled_kernel(a, b, kernel)
    p_value, _ = _permutation_pvalues(pooled_k, n, m, permutations, rng)
    return TwoSampleResult(
        statistic=_mmd2_from_blocks(pooled_k, n),
        p_value=p_value,
        method=MMD_PERMUTATION,
        sample_sizes=(n, m),
    )


def mmd_gamma_pvalue(
    a,
    b,
    kernel: KernelSpec = KernelSpec(),
    fallback_permutations: int = 500,
    rng=None,
) -> TwoSampleResult:
    """MMD test with a two-moment gamma approximation to the null.

    Fits Gamma(shape = mu^2/var, scale = var/mu) to the estimated null mean
    and variance of the biased statistic and returns its upper tail at the
    observed value.  If the pooled kernel is degenerate (non-positive moment
    estimates), falls back to a permutation p-value and labels the result
    accordingly.  `rng` feeds only that fallback; it may be a Generator or a
    zero-argument factory, invoked only if the fallback actually runs.
    """
    a, b = _check_mmd_inputs(a, b)
    n, m = a.shape[0], b.shape[0]
    pooled_k, _ = _pooled_kernel(a, b, kernel)
    mmd2 = _mmd2_from_blocks(pooled_k, n)
    mu, var = _null_moments(pooled_k, n, m)
    if mu <= 0.0 or var <= 0.0:
        if callable(rng):
            rng = rng()
        if rng is None:
            rng = np.random.default_rng(0)
        p_value, _ = _permutation_pvalues(pooled_k, n, m, fallback_permutations, rng)
        return TwoSampleResult(
            statistic=mmd2,
            p_value=p_value,
            method=MMD_PERMUTATION,
            sample_sizes=(n, m),
        )
    shape = mu * mu / var
    scale = var / mu
    p_value = float(np.clip(gammaincc(shape, mmd2 / scale), 0.0, 1.0))
    return TwoSampleResult(
        statistic=mmd2,
        p_value=p_value,
        method=MMD_GAMMA,
        sample_sizes=(n, m),
    )
