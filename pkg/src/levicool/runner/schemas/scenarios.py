"""Scenario contracts and preset profiles for the runner."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field

from ...dynamics import SimulationMode


class Scenario(str, Enum):
    FIG2 = "fig2"
    FIG3 = "fig3"
    FIG4 = "fig4"
    FIG5 = "fig5"
    FIG6 = "fig6"
    CUSTOM = "custom"
    ORACLE_CHECK = "oracle-check"


class ScenarioKind(str, Enum):
    TRAJECTORY = "trajectory"
    CONDITIONAL_SWEEP = "conditional_sweep"
    LANDSCAPE = "landscape"
    ORACLE = "oracle"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ScenarioProfile(BaseModel):
    scenario: Scenario
    kind: ScenarioKind
    mode: SimulationMode | None = None
    defaults: dict[str, float] = Field(default_factory=dict)
    required_keys: list[str] = Field(default_factory=list)
    eta_list: list[float] = Field(default_factory=list)
    k_tilde_range: tuple[float, float, int] | None = None
    include_actuation: bool = False

    @property
    def swept_keys(self) -> tuple[str, ...]:
        """Keys the scenario sweeps over itself and therefore does not take as input."""

        if self.kind in (ScenarioKind.CONDITIONAL_SWEEP, ScenarioKind.LANDSCAPE):
            return ("eta", "k_tilde")
        return ()


__all__ = ["OutputFormat", "Scenario", "ScenarioKind", "ScenarioProfile"]
