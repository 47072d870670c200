"""Benchmark harness: parameter sweeps with coupled and uncoupled trials.

For every sweep value the harness simulates fresh pairs, applies each
selected method, and tallies the true positive rate over coupled pairs and
the false positive rate over uncoupled ones.  Pair generation seeds depend
only on (root seed, model, value index, trial index, coupling arm), so the
data a trial sees never changes when methods are added or removed.
"""
from __future__ import annotations

import functools
import io
import json
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from csv import writer as csv_writer
from dataclasses import dataclass, field

import numpy as np

from .errors import EitestError
from .granger import gc_var_test
from .procedure import eitest
from .series import validate_pair
from .simulate import (
    DEFAULT_DELAY,
    DEFAULT_DOF,
    DEFAULT_EVENTS,
    DEFAULT_INCREASE,
    DEFAULT_LENGTH,
    DEFAULT_ORDER,
    DEFAULT_SNR,
    MODELS,
    make_pair,
)

EITEST_KS = "eitest-ks"
EITEST_MMD = "eitest-mmd"
EITEST_MMD_PERM = "eitest-mmd-perm"
GCVAR = "gcvar"
METHODS = (EITEST_KS, EITEST_MMD, EITEST_MMD_PERM, GCVAR)

SWEEPABLE = ("order", "snr", "increase", "dof", "events", "length")
_INT_PARAMS = ("order", "events", "length")

CSV_COLUMNS = (
    "model",
    "parameter",
    "value",
    "method",
    "tpr",
    "fpr",
    "n_coupled",
    "n_uncoupled",
    "mean_runtime_ms",
)


@dataclass(frozen=True)
class SweepConfig:
    """One panel: a model, the parameter swept over `values`, and everything
    else held fixed.  events=None selects the per-model default count."""

    model: str
    parameter: str
    values: tuple[float, ...]
    trials: int
    methods: tuple[str, ...] = (EITEST_KS, EITEST_MMD, GCVAR)
    alpha: float = 0.05
    seed: int = 0
    length: int = DEFAULT_LENGTH
    events: int | None = None
    order: int = DEFAULT_ORDER
    snr: float = DEFAULT_SNR
    delay: int = DEFAULT_DELAY
    increase: float = DEFAULT_INCREASE
    dof: float = DEFAULT_DOF
    max_lag: int = 32
    gc_lag: int = 32
    min_samples: int = 5
    permutations: int = 199

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.parameter not in SWEEPABLE:
            raise ValueError(
                f"parameter must be one of {SWEEPABLE}, got {self.parameter!r}"
            )
        if not self.values:
            raise ValueError("values must be nonempty")
        if any(v <= 0 for v in self.values):
            raise ValueError("swept values must be positive")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "parameter": self.parameter,
            "values": list(self.values),
            "trials": self.trials,
            "methods": list(self.methods),
            "alpha": self.alpha,
            "seed": self.seed,
            "length": self.length,
            "events": self.events,
            "order": self.order,
            "snr": self.snr,
            "delay": self.delay,
            "increase": self.increase,
            "dof": self.dof,
            "max_lag": self.max_lag,
            "gc_lag": self.gc_lag,
            "min_samples": self.min_samples,
            "permutations": self.permutations,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        kwargs = dict(data)
        kwargs["values"] = tuple(kwargs["values"])
        kwargs["methods"] = tuple(kwargs["methods"])
        return cls(**kwargs)


@dataclass(frozen=True)
class TrialRecord:
    """One method applied to one simulated pair.  A failed trial keeps its
    error message and a null p-value."""

    value: float
    trial: int
    coupled: bool
    method: str
    p_value: float | None
    reject: bool
    runtime_ms: float
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "trial": self.trial,
            "coupled": self.coupled,
            "method": self.method,
            "p_value": self.p_value,
            "reject": self.reject,
            "runtime_ms": self.runtime_ms,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrialRecord":
        return cls(**data)


@dataclass(frozen=True)
class BenchRow:
    """Rates for one (sweep value, method) cell.  Rates are null when every
    trial in the corresponding arm failed."""

    model: str
    parameter: str
    value: float
    method: str
    tpr: float | None
    fpr: float | None
    n_coupled: int
    n_uncoupled: int
    mean_runtime_ms: float | None

    def to_dict(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}

    @classmethod
    def from_dict(cls, data: dict) -> "BenchRow":
        return cls(**data)


@dataclass(frozen=True)
class BenchReport:
    config: SweepConfig
    rows: tuple[BenchRow, ...]
    trial_log: tuple[TrialRecord, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
            "trial_log": [t.to_dict() for t in self.trial_log],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BenchReport":
        return cls(
            config=SweepConfig.from_dict(data["config"]),
            rows=tuple(BenchRow.from_dict(r) for r in data["rows"]),
            trial_log=tuple(TrialRecord.from_dict(t) for t in data["trial_log"]),
        )


def _trial_seed(config: SweepConfig, value_idx: int, trial_idx: int, coupled: bool):
    return np.random.SeedSequence(
        entropy=config.seed,
        spawn_key=(MODELS.index(config.model), value_idx, trial_idx, int(coupled)),
    )


def _pair_kwargs(config: SweepConfig, value) -> dict:
    kwargs = {
        "length": config.length,
        "events": config.events
        if config.events is not None
        else DEFAULT_EVENTS[config.model],
        "order": config.order,
        "snr": config.snr,
        "delay": config.delay,
        "increase": config.increase,
        "dof": config.dof,
    }
    kwargs[config.parameter] = int(value) if config.parameter in _INT_PARAMS else value
    return kwargs


def _method_pvalue(pair, method: str, config: SweepConfig, seed: int) -> float:
    if method == GCVAR:
        return gc_var_test(pair.series, pair.events, config.gc_lag).p_value
    inner = {EITEST_KS: "ks", EITEST_MMD: "mmd-gamma", EITEST_MMD_PERM: "mmd-permutation"}
    report = eitest(
        pair,
        config.max_lag,
        method=inner[method],
        alpha=config.alpha,
        min_samples=config.min_samples,
        permutations=config.permutations,
        seed=seed,
    )
    return report.adjusted_p_value


def _run_task(config: SweepConfig, task: tuple[int, int, bool]) -> list[TrialRecord]:
    """Simulate one pair and apply every configured method to it."""
    value_idx, trial_idx, coupled = task
    value = config.values[value_idx]
    root = _trial_seed(config, value_idx, trial_idx, coupled)
    rng = np.random.Generator(np.random.PCG64(root))
    kwargs = _pair_kwargs(config, value)
    records = []
    try:
        x, e = make_pair(config.model, coupled=coupled, rng=rng, **kwargs)
        pair = validate_pair(x, e)
    except EitestError as exc:
        return [
            TrialRecord(float(value), trial_idx, coupled, m, None, False, 0.0,
                        error=f"simulation failed: {exc}")
            for m in config.methods
        ]
    for method in config.methods:
        # Seed key uses the global method index, so a trial's stream for one
        # method is unaffected by which other methods run alongside it.
        mseed_seq = np.random.SeedSequence(
            entropy=config.seed,
            spawn_key=(MODELS.index(config.model), value_idx, trial_idx,
                       int(coupled), 100 + METHODS.index(method)),
        )
        mseed = mseed_seq.generate_state(1)[0]
        start = time.perf_counter()
        try:
            p_value = _method_pvalue(pair, method, config, int(mseed))
            err = None
            reject = p_value < config.alpha
        except EitestError as exc:
            p_value, reject, err = None, False, str(exc)
        elapsed = (time.perf_counter() - start) * 1000.0
        records.append(
            TrialRecord(float(value), trial_idx, coupled, method, p_value, reject,
                        elapsed, error=err)
        )
    return records


def _summarize(config: SweepConfig, records: list[TrialRecord]) -> tuple[BenchRow, ...]:
    rows = []
    for value in config.values:
        for method in config.methods:
            cell = [
                r for r in records
                if r.method == method and r.value == float(value) and r.error is None
            ]
            coupled = [r for r in cell if r.coupled]
            uncoupled = [r for r in cell if not r.coupled]
            tpr = sum(r.reject for r in coupled) / len(coupled) if coupled else None
            fpr = sum(r.reject for r in uncoupled) / len(uncoupled) if uncoupled else None
            runtime = float(np.mean([r.runtime_ms for r in cell])) if cell else None
            rows.append(
                BenchRow(config.model, config.parameter, float(value), method,
                         tpr, fpr, len(coupled), len(uncoupled), runtime)
            )
    return tuple(rows)


def run_sweep(config: SweepConfig, workers: int = 1) -> BenchReport:
    """Run every (value, trial, coupling arm) cell and reduce to rates.

    Trials are independent; with workers > 1 they run in a process pool, and
    results are reduced in task order either way, so the report is identical
    for any worker count.  Failed trials are kept in the log with their error
    message, surfaced as a warning, and excluded from the rates.
    """
    tasks = [
        (value_idx, trial_idx, coupled)
        for value_idx in range(len(config.values))
        for trial_idx in range(config.trials)
        for coupled in (True, False)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(functools.partial(_run_task, config), tasks,
                                   chunksize=max(1, len(tasks) // (workers * 8))))
    else:
        chunks = [_run_task(config, task) for task in tasks]
    records = [record for chunk in chunks for record in chunk]
    for record in records:
        if record.error is not None:
            warnings.warn(
                f"trial failed ({config.model}/{config.parameter}={record.value}, "
                f"trial {record.trial}, {record.method}): {record.error}",
                stacklevel=2,
            )
    return BenchReport(config, _summarize(config, records), tuple(records))


def emit_report(report: BenchReport, format: str = "csv") -> str:
    """Serialize a report: `csv` for the rate table (header always present),
    `json` for a lossless dump including the per-trial log."""
    if format == "json":
        return json.dumps(report.to_dict(), indent=2)
    if format != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    buf = io.StringIO()
    table = csv_writer(buf, lineterminator="\n")
    table.writerow(CSV_COLUMNS)
    for row in report.rows:
        table.writerow([getattr(row, c) for c in CSV_COLUMNS])
    return buf.getvalue()


def load_report(text: str) -> BenchReport:
    """Inverse of emit_report(..., 'json')."""
    return BenchReport.from_dict(json.loads(text))


def _panel(model: str, parameter: str, values, **overrides) -> SweepConfig:
    return SweepConfig(model=model, parameter=parameter, values=tuple(values), **overrides)


def preset_sweeps(name: str) -> tuple[SweepConfig, ...]:
    """Built-in sweep suites.

    fig2-full enumerates the eight benchmark panels at full scale (length
    8192 baseline, 100 trials per arm); fig2-desk covers the same panels at
    reduced scale for quick runs (length 2048 baseline, 50 trials, smaller
    event counts and value grids).
    """
    if name == "fig2-full":
        common = {"trials": 100, "methods": (EITEST_KS, EITEST_MMD, GCVAR)}
        return (
            _panel("mean", "order", (2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048), **common),
            _panel("mean", "snr", (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0), **common),
            _panel("variance", "increase", (1.0, 2.0, 4.0, 8.0, 16.0), **common),
            _panel("variance", "events", (8, 16, 32, 64, 128, 256, 512, 1024), **common),
            _panel("variance", "length", (1024, 2048, 4096, 8192), **common),
            _panel("tail", "dof", (3.0, 4.0, 5.0, 6.0, 7.0), **common),
            _panel("tail", "events", (8, 16, 32, 64, 128, 256, 512, 1024), **common),
            _panel("tail", "length", (2048, 4096, 8192, 16384), **common),
        )
    if name == "fig2-desk":
        common = {"trials": 50, "methods": (EITEST_KS, EITEST_MMD, GCVAR), "length": 2048}
        small = {**common, "events": 64}
        tail = {**common, "events": 256}
        return (
            _panel("mean", "order", (2, 8, 32, 128, 512), **small),
            _panel("mean", "snr", (0.01, 0.1, 1.0, 10.0, 100.0), **small),
            _panel("variance", "increase", (1.0, 2.0, 4.0, 8.0, 16.0), **small),
            _panel("variance", "events", (8, 32, 64, 128, 256), **common),
            _panel("variance", "length", (512, 1024, 2048, 4096), **small),
            _panel("tail", "dof", (3.0, 4.0, 5.0, 7.0), **tail),
            _panel("tail", "events", (16, 64, 256, 512), **common),
            _panel("tail", "length", (1024, 2048, 4096, 8192), **tail),
        )
    raise ValueError(f"unknown preset {name!r}; available: fig2-desk, fig2-full")


def panel_name(config: SweepConfig) -> str:
    return f"{config.model}-{config.parameter}"
