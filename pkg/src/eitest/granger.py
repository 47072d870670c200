"""Granger-causality baseline: does the event series linearly predict the series?

Compares a restricted autoregression of x on its own lags against an
unrestricted one that adds lagged event indicators, via the standard F-test.
Sensitive to mean-level information only, which is exactly what makes it a
useful contrast for distribution-level tests.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.stats import f as f_dist

from .errors import InvalidMaxLagError, NonUnivariateError, TooShortError
from .series import EventSeries, TimeSeries

RANK_RTOL = 1e-10

DEFAULT_LAG = 32


@dataclass(frozen=True)
class GcVarResult:
    """F-test outcome.  degenerate=True flags a collinear design (or zero
    unrestricted residual), reported as F=0, p=1 rather than an error."""

    f_statistic: float
    p_value: float
    lag: int
    dof_num: int
    dof_den: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "f_statistic": self.f_statistic,
            "p_value": self.p_value,
            "lag": self.lag,
            "dof_num": self.dof_num,
            "dof_den": self.dof_den,
            "degenerate": self.degenerate,
        }


def _lag_columns(values: np.ndarray, lag: int) -> np.ndarray:
    """Columns [v_{t-1}, ..., v_{t-lag}] for rows t = lag..T-1."""
    total = values.size
    return np.column_stack([values[lag - j : total - j] for j in range(1, lag + 1)])


def _rss_qr(design: np.ndarray, y: np.ndarray) -> float | None:
    """Residual sum of squares via QR; None when the design is rank-deficient
    (relative tolerance on the triangular factor's diagonal)."""
    q, r = np.linalg.qr(design)
    diag = np.abs(np.diag(r))
    if diag.min() <= RANK_RTOL * diag.max():
        return None
    coef = solve_triangular(r, q.T @ y)
    resid = y - design @ coef
    return float(resid @ resid)


def gc_var_test(x, e, lag: int = DEFAULT_LAG) -> GcVarResult:
    """F-test of the event lags' incremental predictive power.

    Restricted model: x_t = c + sum_j a_j x_{t-j}.  Unrestricted adds
    sum_j b_j e_{t-j}, j = 1..lag.  F = ((RSS_r - RSS_u)/lag) /
    (RSS_u/dof_den) with dof_den = (T - lag) - 2*lag - 1, referred to the
    F(lag, dof_den) upper tail.
    """
    if lag < 1:
        raise InvalidMaxLagError(f"lag order must be >= 1, got {lag}")
    if not isinstance(x, TimeSeries):
        x = TimeSeries(x)
    if not x.is_univariate:
        raise NonUnivariateError("gc_var_test requires a univariate series")
    if not isinstance(e, EventSeries):
        e = EventSeries(e)

    total = x.values.shape[0]
    dof_den = (total - lag) - 2 * lag - 1
    if dof_den < 1:
        raise TooShortError(
            f"series length {total} leaves {dof_den} residual degrees of freedom "
            f"at lag {lag}; need at least 3*lag + 2 observations"
        )

    y = x.values[lag:]
    x_lags = _lag_columns(x.values, lag)
    e_lags = _lag_columns(e.marks.astype(float), lag)
    intercept = np.ones((total - lag, 1))
    restricted = np.hstack([intercept, x_lags])
    unrestricted = np.hstack([intercept, x_lags, e_lags])

    rss_u = _rss_qr(unrestricted, y)
    rss_r = _rss_qr(restricted, y) if rss_u is not None else None
    if rss_u is None or rss_r is None or rss_u <= 0.0:
        return GcVarResult(0.0, 1.0, lag, lag, dof_den, degenerate=True)

    f_stat = max(rss_r - rss_u, 0.0) / lag / (rss_u / dof_den)
    p_value = float(f_dist.sf(f_stat, lag, dof_den))
    return GcVarResult(float(f_stat), p_value, lag, lag, dof_den)
