"""Nonparametric tests for shared information between a time series and a
binary event series, plus simulators and a benchmark harness."""
from .bench import (
    BenchReport,
    BenchRow,
    SweepConfig,
    TrialRecord,
    emit_report,
    load_report,
    preset_sweeps,
    run_sweep,
)
from .errors import (
    CsvFormatError,
    DegenerateEventsError,
    DimensionMismatchError,
    EitestError,
    EmptyListError,
    EmptySampleError,
    InvalidCountError,
    InvalidDofError,
    InvalidMaxLagError,
    LengthMismatchError,
    NonUnivariateError,
    NoTestablePairsError,
    OutOfRangeError,
    TooFewPointsError,
    TooShortError,
)
from .granger import GcVarResult, gc_var_test
from .io import (
    read_event_series,
    read_time_series,
    write_event_series,
    write_time_series,
)
from .procedure import EitestReport, PairTest, SkippedPair, eitest, simes_adjust
from .series import (
    EventSeries,
    LagSampleSet,
    TimeSeries,
    ValidatedPair,
    extract_lag_samples,
    generate_event_series,
    permute_events,
    validate_pair,
)
from .simulate import (
    MeanImpactParams,
    TailImpactParams,
    VarianceImpactParams,
    draw_student_t,
    make_pair,
    simulate_mean_impacts,
    simulate_tail_impacts,
    simulate_variance_impacts,
)
from .twosample import (
    KernelSpec,
    TwoSampleResult,
    ks_pvalue,
    ks_statistic,
    ks_test,
    median_heuristic_bandwidth,
    mmd2_biased,
    mmd_gamma_pvalue,
    mmd_permutation_pvalue,
    rbf_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BenchRow",
    "CsvFormatError",
    "DegenerateEventsError",
    "DimensionMismatchError",
    "EitestError",
    "EitestReport",
    "EmptyListError",
    "EmptySampleError",
    "EventSeries",
    "GcVarResult",
    "InvalidCountError",
    "InvalidDofError",
    "InvalidMaxLagError",
    "KernelSpec",
    "LagSampleSet",
    "LengthMismatchError",
    "MeanImpactParams",
    "NonUnivariateError",
    "NoTestablePairsError",
    "OutOfRangeError",
    "PairTest",
    "SkippedPair",
    "SweepConfig",
    "TailImpactParams",
    "TimeSeries",
    "TooFewPointsError",
    "TooShortError",
    "TrialRecord",
    "TwoSampleResult",
    "ValidatedPair",
    "VarianceImpactParams",
    "draw_student_t",
    "eitest",
    "emit_report",
    "extract_lag_samples",
    "gc_var_test",
    "generate_event_series",
    "ks_pvalue",
    "ks_statistic",
    "ks_test",
    "load_report",
    "make_pair",
    "median_heuristic_bandwidth",
    "mmd2_biased",
    "mmd_gamma_pvalue",
    "mmd_permutation_pvalue",
    "permute_events",
    "preset_sweeps",
    "rbf_kernel",
    "read_event_series",
    "read_time_series",
    "run_sweep",
    "simes_adjust",
    "simulate_mean_impacts",
    "simulate_tail_impacts",
    "simulate_variance_impacts",
    "validate_pair",
    "write_event_series",
    "write_time_series",
]
