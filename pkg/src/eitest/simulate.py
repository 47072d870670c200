"""Synthetic event-impact generators: mean, variance, and tail models.

Each model couples a time series to a binary event series through a
different moment: a moving-average shift of the mean, a variance increase
one step after events, or a heavier tail with matched mean and variance.
Uncoupled pairs reuse the simulated series but permute the events, so the
marginals stay identical while the association is destroyed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDofError
from .series import EventSeries, TimeSeries, generate_event_series, permute_events

MEAN = "mean"
VARIANCE = "variance"
TAIL = "tail"
MODELS = (MEAN, VARIANCE, TAIL)

# Benchmark defaults: series length, events per series, and model parameters.
DEFAULT_LENGTH = 8192
DEFAULT_EVENTS = {MEAN: 128, VARIANCE: 128, TAIL: 1024}
DEFAULT_ORDER = 8
DEFAULT_SNR = 10.0
DEFAULT_DELAY = 1
DEFAULT_INCREASE = 4.0
DEFAULT_DOF = 3.0


@dataclass(frozen=True)
class MeanImpactParams:
    """Moving-average mean impact: weights applied to the last `order` event
    indicators.  Weights are drawn once per pair, not per time step."""

    order: int
    snr: float
    weights: tuple[float, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if not self.snr > 0:
            raise ValueError(f"snr must be positive, got {self.snr}")
        if len(self.weights) != self.order:
            raise ValueError(
                f"expected {self.order} weights, got {len(self.weights)}"
            )

    @classmethod
    def draw(
        cls, rng: np.random.Generator, order: int = DEFAULT_ORDER, snr: float = DEFAULT_SNR
    ) -> "MeanImpactParams":
        """Draw weights ~ N(0, snr * I)."""
        if order < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        if not snr > 0:
            raise ValueError(f"snr must be positive, got {snr}")
        weights = rng.normal(0.0, math.sqrt(snr), size=order)
        return cls(order=order, snr=snr, weights=tuple(float(w) for w in weights))


@dataclass(frozen=True)
class VarianceImpactParams:
    """Variance impact: Var(X_t) = 1 + increase when an event occurred
    `delay` steps earlier, 1 otherwise."""

    delay: int = DEFAULT_DELAY
    increase: float = DEFAULT_INCREASE

    def __post_init__(self):
        if self.delay < 1:
            raise ValueError(f"delay must be >= 1, got {self.delay}")
        if not self.increase > 0:
            raise ValueError(f"increase must be positive, got {self.increase}")


@dataclass(frozen=True)
class TailImpactParams:
    """Tail impact: Student-t(dof) after events, N(0, dof/(dof-2)) otherwise,
    so mean and variance match across the two branches."""

    delay: int = DEFAULT_DELAY
    dof: float = DEFAULT_DOF

    def __post_init__(self):
        if self.delay < 1:
            raise ValueError(f"delay must be >= 1, got {self.delay}")
        if self.dof < 3:
            raise InvalidDofError(
                f"dof must be >= 3 for a well-behaved variance, got {self.dof}"
            )


def _delayed_marks(events: EventSeries, delay: int) -> np.ndarray:
    """Indicator of an event exactly `delay` steps back; zero before the
    series starts (cold start)."""
    marks = events.marks
    shifted = np.zeros(marks.shape[0], dtype=float)
    if delay < marks.shape[0]:
        shifted[delay:] = marks[: marks.shape[0] - delay]
    return shifted


def simulate_mean_impacts(
    e: EventSeries, params: MeanImpactParams, rng: np.random.Generator
) -> TimeSeries:
    """X_t = sum_{j=1..order} w_j E_{t-j} + Z_t with Z_t i.i.d. N(0, 1).

    Overlapping impacts add linearly; lags before the start contribute zero.
    The noise is the single rng draw, so a re-simulated noise stream from the
    same seed recovers the event contribution exactly.
    """
    length = e.marks.shape[0]
    kernel = np.concatenate([[0.0], np.asarray(params.weights, dtype=float)])
    contribution = np.convolve(e.marks.astype(float), kernel)[:length]
    return TimeSeries(contribution + rng.standard_normal(length))


def simulate_variance_impacts(
    e: EventSeries, params: VarianceImpactParams, rng: np.random.Generator
) -> TimeSeries:
    """X_t ~ N(0, 1 + increase * E_{t-delay}): mean unchanged, variance
    raised on post-event indices only."""
    shifted = _delayed_marks(e, params.delay)
    scale = np.sqrt(1.0 + params.increase * shifted)
    return TimeSeries(rng.standard_normal(e.marks.shape[0]) * scale)


def draw_student_t(rng: np.random.Generator, dof: float, size: int) -> np.ndarray:
    """Student-t draws composed as Z / sqrt(V/dof), V ~ chi-square(dof)."""
    if not dof > 0:
        raise InvalidDofError(f"dof must be positive, got {dof}")
    z = rng.standard_normal(size)
    v = rng.chisquare(dof, size)
    return z / np.sqrt(v / dof)


def simulate_tail_impacts(
    e: EventSeries, params: TailImpactParams, rng: np.random.Generator
) -> TimeSeries:
    """Post-event indices draw Student-t(dof); the rest draw
    N(0, dof/(dof-2)).  Both branches share mean 0 and variance dof/(dof-2),
    so only the tail shape carries the signal."""
    length = e.marks.shape[0]
    shifted = _delayed_marks(e, params.delay)
    z = rng.standard_normal(length)
    v = rng.chisquare(params.dof, length)
    heavy = z / np.sqrt(v / params.dof)
    light = z * math.sqrt(params.dof / (params.dof - 2.0))
    return TimeSeries(np.where(shifted == 1.0, heavy, light))


def make_pair(
    model: str,
    length: int,
    events: int,
    coupled: bool,
    rng: np.random.Generator,
    *,
    order: int = DEFAULT_ORDER,
    snr: float = DEFAULT_SNR,
    delay: int = DEFAULT_DELAY,
    increase: float = DEFAULT_INCREASE,
    dof: float = DEFAULT_DOF,
) -> tuple[TimeSeries, EventSeries]:
    """Generate one (series, events) pair from the selected model.

    The series is always simulated against the generated events; for an
    uncoupled pair the returned event series is a random permutation of the
    one that produced the series.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    e = generate_event_series(length, events, rng)
    if model == MEAN:
        params = MeanImpactParams.draw(rng, order=order, snr=snr)
        x = simulate_mean_impacts(e, params, rng)
    elif model == VARIANCE:
        x = simulate_variance_impacts(e, VarianceImpactParams(delay, increase), rng)
    else:
        x = simulate_tail_impacts(e, TailImpactParams(delay, dof), rng)
    if not coupled:
        e = permute_events(e, rng)
    return x, e
