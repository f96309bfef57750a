"""Experiment harness: configuration, run orchestration, persistence, reports."""

from epimoo.harness.config import ExperimentConfig, load_config_file, PRESETS
from epimoo.harness.report import (
    interval_grid,
    format_summary_table,
    summarize_experiment,
    write_grid_csv,
    write_summary_csv,
)
from epimoo.harness.runner import RunRecord, protocol_summary, run_experiment, run_single

__all__ = [
    "ExperimentConfig",
    "PRESETS",
    "RunRecord",
    "format_summary_table",
    "interval_grid",
    "load_config_file",
    "protocol_summary",
    "run_experiment",
    "run_single",
    "summarize_experiment",
    "write_grid_csv",
    "write_summary_csv",
]
