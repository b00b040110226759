from .config import CSV_COLUMNS, ExperimentConfig, GridPoint, expand_sweep, threshold_m
from .runner import TrialSummary, format_csv, format_json, run, write_results
from .scenarios import SCENARIOS, scenario
from .stats import RunningStats, wilson_ci

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "GridPoint",
    "RunningStats",
    "SCENARIOS",
    "TrialSummary",
    "expand_sweep",
    "format_csv",
    "format_json",
    "run",
    "scenario",
    "threshold_m",
    "wilson_ci",
    "write_results",
]
