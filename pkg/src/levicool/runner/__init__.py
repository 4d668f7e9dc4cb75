"""Scenario runner: presets, configuration, ensembles and artifact output."""

from .config_loader import build_scenario_config, parse_config_file
from .ensemble import run_ensemble, summarize
from .schemas import OutputFormat, RunResult, Scenario, ScenarioConfig
from .workflow import run_scenario

__all__ = [
    "OutputFormat",
    "RunResult",
    "Scenario",
    "ScenarioConfig",
    "build_scenario_config",
    "parse_config_file",
    "run_ensemble",
    "run_scenario",
    "summarize",
]
