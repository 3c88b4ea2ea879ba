"""Experiment driver: sweeps, scaling fits, CSV and the command line."""
from .config import ConfigError, SweepConfig
from .fitting import ScalingFit, fit_power_law, points_from_records
from .sweep import SweepRecord, SweepResult, evaluate_sweep, read_csv, records_to_csv, run_sweep, write_csv

__all__ = [
    "ConfigError", "SweepConfig", "ScalingFit", "fit_power_law", "points_from_records",
    "SweepRecord", "SweepResult", "evaluate_sweep", "read_csv", "records_to_csv", "run_sweep", "write_csv",
]
