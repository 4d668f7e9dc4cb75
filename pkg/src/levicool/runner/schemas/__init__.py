"""Runner schemas."""

from .config import CONFIG_KEYS, DEFAULT_DIM, DEFAULT_DT, ScenarioConfig
from .output import ErrorRecord, RunResult
from .scenarios import OutputFormat, Scenario, ScenarioKind, ScenarioProfile

__all__ = [
    "CONFIG_KEYS",
    "DEFAULT_DIM",
    "DEFAULT_DT",
    "ErrorRecord",
    "OutputFormat",
    "RunResult",
    "Scenario",
    "ScenarioConfig",
    "ScenarioKind",
    "ScenarioProfile",
]
