"""Resolved run configuration."""

from __future__ import annotations

import math
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ...core import TrapParams, validated
from ...dynamics import SimulationMode
from .scenarios import OutputFormat, Scenario

DEFAULT_DT = 2.0 * math.pi * 1e-4
DEFAULT_DIM = 30

# Flat keys accepted by configuration files and command line flags.
CONFIG_KEYS = (
    "scenario",
    "mass_kg",
    "omega_hz",
    "temperature_k",
    "eta",
    "k_tilde",
    "gamma_fb",
    "dt",
    "duration_periods",
    "seed",
    "seed_count",
    "format",
    "out",
)


class ScenarioConfig(BaseModel):
    """Everything needed to reproduce a run.

    Physical inputs keep the units of the flat configuration keys (Hz, trap
    periods) so an output header can be fed back verbatim.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    scenario: Scenario
    mode: SimulationMode | None = None
    mass_kg: float = Field(gt=0)
    omega_hz: float = Field(gt=0)
    temperature_k: float = Field(ge=0)
    eta: float = Field(ge=0, le=1)
    k_tilde: float = Field(ge=0)
    gamma_fb: float = Field(ge=0)
    dt: float = Field(default=DEFAULT_DT, gt=0)
    duration_periods: float = Field(gt=0)
    seeds: list[int] = Field(min_length=1)
    output_path: Path
    format: OutputFormat = OutputFormat.CSV
    jobs: int = Field(default=1, ge=1)
    per_seed: bool = False
    dim: int = Field(default=DEFAULT_DIM, ge=4, le=128)

    @field_validator("seeds")
    @classmethod
    def _seeds_are_contiguous(cls, value: list[int]) -> list[int]:
        if any(seed < 0 for seed in value):
            raise ValueError("seeds must be non-negative")
        if value != list(range(value[0], value[0] + len(value))):
            raise ValueError("seeds must be a contiguous run base_seed .. base_seed + count - 1")
        return value

    @property
    def trap(self) -> TrapParams:
        return validated(
            TrapParams,
            mass=self.mass_kg,
            omega=2.0 * math.pi * self.omega_hz,
            temperature=self.temperature_k,
            eta=self.eta,
            k_tilde=self.k_tilde,
            gamma_fb=self.gamma_fb,
        )

    @property
    def duration(self) -> float:
        """Simulated time in units of 1/omega."""

        return 2.0 * math.pi * self.duration_periods

    def flat(self) -> dict[str, object]:
        """The configuration as flat key/value pairs, in CONFIG_KEYS order."""

        return {
            "scenario": self.scenario.value,
            "mass_kg": self.mass_kg,
            "omega_hz": self.omega_hz,
            "temperature_k": self.temperature_k,
            "eta": self.eta,
            "k_tilde": self.k_tilde,
            "gamma_fb": self.gamma_fb,
            "dt": self.dt,
            "duration_periods": self.duration_periods,
            "seed": self.seeds[0],
            "seed_count": len(self.seeds),
            "format": self.format.value,
            "out": str(self.output_path),
        }


__all__ = ["CONFIG_KEYS", "DEFAULT_DIM", "DEFAULT_DT", "ScenarioConfig"]
