"""Headerless CSV reading and writing for series data.

Time series file: one observation per line, comma-separated components for
vector data.  Event series file: one 0/1 per line.  Line i holds time step i,
counting from 1; parse errors report that 1-based line number.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import CsvFormatError
from .series import EventSeries, TimeSeries


def read_time_series(path) -> TimeSeries:
    rows: list[list[float]] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                raise CsvFormatError(path, lineno, "blank line in time series file")
            parts = text.split(",")
            try:
                row = [float(p) for p in parts]
            except ValueError:
                raise CsvFormatError(path, lineno, f"not a number: {text!r}") from None
            if not all(np.isfinite(row)):
                raise CsvFormatError(path, lineno, "non-finite value")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise CsvFormatError(
                    path, lineno, f"expected {width} components, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise CsvFormatError(path, 1, "empty time series file")
    arr = np.asarray(rows, dtype=float)
    if width == 1:
        arr = arr[:, 0]
    return TimeSeries(arr)


def read_event_series(path) -> EventSeries:
    marks: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if text == "0":
                marks.append(0)
            elif text == "1":
                marks.append(1)
            else:
                raise CsvFormatError(path, lineno, f"expected 0 or 1, got {text!r}")
    if not marks:
        raise CsvFormatError(path, 1, "empty event series file")
    return EventSeries(marks)


def write_time_series(series: TimeSeries, path) -> None:
    values = series.values
    with open(path, "w", encoding="utf-8") as fh:
        if values.ndim == 1:
            for v in values:
                fh.write(f"{float(v)!r}\n")
        else:
            for row in values:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_event_series(events: EventSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for m in events.marks:
            fh.write(f"{int(m)}\n")


def write_json(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
