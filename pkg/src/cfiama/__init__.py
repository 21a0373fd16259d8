"""Interference-aware massive access simulation for cell-free massive MIMO."""

from .config import SimulationConfig, parse_config
from .access import AccessState, iama, iar, iar_table, musa_assign, select_masters
from .experiment import RunManifest, run_experiment, summarize_csv

__all__ = [
    "SimulationConfig", "parse_config",
    "AccessState", "iama", "iar", "iar_table", "musa_assign", "select_masters",
    "RunManifest", "run_experiment", "summarize_csv",
]

__version__ = "0.1.0"
