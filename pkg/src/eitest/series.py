"""Domain types for paired series data and lag-conditional sample extraction.

A time series is a length-T sequence of real observations (scalar or
fixed-dimension vectors).  An event series is a length-T sequence of 0/1
marks.  Given a validated pair, `extract_lag_samples` collects, for each
lag k = 0..max_lag, the observations whose most recent event occurred
exactly k steps earlier.  These per-lag samples feed the pairwise
two-sample tests downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateEventsError,
    InvalidCountError,
    InvalidMaxLagError,
    LengthMismatchError,
)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


class TimeSeries:
    """Immutable real-valued series; shape (T,) univariate or (T, d) vector-valued.

    Rejects empty input and any non-finite entry at construction.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=float)
        if arr.ndim not in (1, 2):
            raise ValueError(f"observations must be scalars or fixed-size vectors, got ndim={arr.ndim}")
        if arr.shape[0] < 1:
            raise ValueError("time series must contain at least one observation")
        if arr.ndim == 2 and arr.shape[1] < 1:
            raise ValueError("vector observations must have dimension >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("time series contains non-finite values (NaN or inf)")
        object.__setattr__(self, "values", _readonly(arr))

    def __setattr__(self, name, value):
        raise AttributeError("TimeSeries is immutable")

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    @property
    def is_univariate(self) -> bool:
        return self.values.ndim == 1

    def __repr__(self) -> str:
        return f"TimeSeries(length={len(self)}, dim={self.dim})"


class EventSeries:
    """Immutable 0/1 mark sequence; keeps a sorted index list of event positions."""

    __slots__ = ("marks", "event_indices")

    def __init__(self, marks):
        arr = np.asarray(marks)
        if arr.ndim != 1:
            raise ValueError("event series must be one-dimensional")
        if arr.shape[0] < 1:
            raise ValueError("event series must contain at least one mark")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("event marks must be 0 or 1")
        dense = arr.astype(np.int8)
        object.__setattr__(self, "marks", _readonly(dense))
        object.__setattr__(self, "event_indices", _readonly(np.flatnonzero(dense)))

    def __setattr__(self, name, value):
        raise AttributeError("EventSeries is immutable")

    def __len__(self) -> int:
        return self.marks.shape[0]

    @property
    def event_count(self) -> int:
        return int(self.event_indices.shape[0])

    def __repr__(self) -> str:
        return f"EventSeries(length={len(self)}, events={self.event_count})"


@dataclass(frozen=True)
class ValidatedPair:
    """A time series and event series of equal length with a non-degenerate
    event series (at least one event and at least one non-event)."""

    series: TimeSeries
    events: EventSeries

    def __len__(self) -> int:
        return len(self.series)


@dataclass(frozen=True)
class LagSampleSet:
    """Per-lag conditional samples.

    ``indices[k]`` holds the 0-based time indices t whose most recent event
    occurred exactly k steps before t; ``samples[k]`` holds the matching
    observations.  Index sets are pairwise disjoint by construction.
    """

    max_lag: int
    min_gap: int
    indices: tuple[np.ndarray, ...] = field(repr=False)
    samples: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(ix) for ix in self.indices)


def validate_pair(series: TimeSeries, events: EventSeries) -> ValidatedPair:
    """Check that the two series align and that conditional samples exist.

    Raises LengthMismatchError if lengths differ and DegenerateEventsError if
    the event series is all zeros or all ones.
    """
    if len(series) != len(events):
        raise LengthMismatchError(
            f"series length {len(series)} != event series length {len(events)}"
        )
    n = events.event_count
    if n == 0 or n == len(events):
        raise DegenerateEventsError(
            "event series must contain at least one event and one non-event"
        )
    return ValidatedPair(series=series, events=events)


def extract_lag_samples(
    pair: ValidatedPair, max_lag: int, min_gap: int = 0
) -> LagSampleSet:
    """Assign each observation to the lag set of its most recent event.

    An observation at time t lands in set k (0 <= k <= max_lag) exactly when
    an event occurred at t-k and no event occurred at t-k+1, ..., t.
    Observations before the first event are unassigned, as are those whose
    most recent event is more than max_lag steps back.

    With min_gap > 0, a single left-to-right pass over the time axis drops
    any assigned observation within min_gap steps of the previously retained
    one, enforcing the spacing both inside each lag set and across sets.
    """
    if max_lag < 1:
        raise InvalidMaxLagError(f"max_lag must be >= 1, got {max_lag}")
    if min_gap < 0:
        raise ValueError(f"min_gap must be >= 0, got {min_gap}")

    marks = pair.events.marks
    n = len(marks)
    positions = np.arange(n)
    # Index of the most recent event at or before each t (-1 if none yet).
    last_event = np.maximum.accumulate(np.where(marks == 1, positions, -1))
    lag = np.where(last_event >= 0, positions - last_event, -1)

    assigned = (lag >= 0) & (lag <= max_lag)
    if min_gap > 0:
        keep = np.zeros(n, dtype=bool)
        last_kept = -(min_gap + 1)
        for t in np.flatnonzero(assigned):
            if t - last_kept > min_gap:
                keep[t] = True
                last_kept = t
        assigned = keep

    values = pair.series.values
    indices = []
    samples = []
    for k in range(max_lag + 1):
        idx = np.flatnonzero(assigned & (lag == k))
        indices.append(_readonly(idx))
        samples.append(_readonly(values[idx]))
    return LagSampleSet(
        max_lag=max_lag,
        min_gap=min_gap,
        indices=tuple(indices),
        samples=tuple(samples),
    )


def generate_event_series(length: int, events: int, rng: np.random.Generator) -> EventSeries:
    """Place `events` marks uniformly without replacement on 0..length-1."""
    if events < 1 or events > length:
        raise InvalidCountError(
            f"event count must be in [1, {length}], got {events}"
        )
    marks = np.zeros(length, dtype=np.int8)
    marks[rng.choice(length, size=events, replace=False)] = 1
    return EventSeries(marks)


def permute_events(events: EventSeries, rng: np.random.Generator) -> EventSeries:
    """Uniform random permutation of the marks; preserves the event count."""
    return EventSeries(rng.permutation(events.marks))
