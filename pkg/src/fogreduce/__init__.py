"""Time-series reduction at the fog node and reconstruction in the cloud."""

from . import errors
from .fog import (
    aggregate_batches,
    check_outliers,
    detect_trend_changes,
    extract_daily_extrema,
)
from .interpolate import (
    Knots,
    cubic_spline,
    lagrange_fit,
    linear_interpolate,
    pchip,
    polynomial_eval,
    reconstruct,
)
from .metrics import evaluate, r_square, reduction_stats, rmse, sse, sst
from .sax import (
    PaaVector,
    euclidean_distance,
    paa_distance,
    paa_transform,
    sax_breakpoints,
    sax_symbolize,
    symbol_deviation_event,
    z_normalize,
)
from .types import (
    Batch,
    BreakpointMode,
    Event,
    EventKind,
    ExtractionMethod,
    GofReport,
    Interpolant,
    PipelineConfig,
    ReducedSeries,
    Sample,
    SaxWord,
    TimeSeries,
    validate_series,
)

__version__ = "0.1.0"

__all__ = [
    "Batch", "BreakpointMode", "Event", "EventKind", "ExtractionMethod", "GofReport",
    "Interpolant", "Knots", "PaaVector", "PipelineConfig", "ReducedSeries", "Sample",
    "SaxWord", "TimeSeries", "aggregate_batches", "check_outliers", "cubic_spline",
    "detect_trend_changes", "errors", "euclidean_distance", "evaluate",
    "extract_daily_extrema", "lagrange_fit", "linear_interpolate", "paa_distance",
    "paa_transform", "pchip", "polynomial_eval", "r_square", "reconstruct",
    "reduction_stats", "rmse", "sax_breakpoints", "sax_symbolize", "sse", "sst",
    "symbol_deviation_event", "validate_series", "z_normalize",
]
