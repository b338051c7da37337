"""Deterministic fog-to-cloud pipeline simulator and its file formats."""

from .io import ingest_csv, load_config, read_config_file
from .node import (
    MessageKind,
    NodeOutput,
    RunReport,
    UpstreamMessage,
    run_cloud,
    run_fog_node,
    run_pipeline,
    run_variable,
)
from .preprocess import clean, fill_gaps, median3, preprocess
from .report import emit_report
from .synth import Profile, generate_synthetic

__all__ = [
    "MessageKind",
    "NodeOutput",
    "Profile",
    "RunReport",
    "UpstreamMessage",
    "clean",
    "emit_report",
    "fill_gaps",
    "generate_synthetic",
    "ingest_csv",
    "load_config",
    "median3",
    "preprocess",
    "read_config_file",
    "run_cloud",
    "run_fog_node",
    "run_pipeline",
    "run_variable",
]
