"""Run results and the machine-readable error record."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from .scenarios import Scenario


class RunResult(BaseModel):
    scenario: Scenario
    files: list[Path] = Field(default_factory=list)
    seeds: list[int] = Field(default_factory=list)
    rows: int = 0


class ErrorRecord(BaseModel):
    error: str
    message: str
    exit_code: int
    context: dict[str, Any] = Field(default_factory=dict)


__all__ = ["ErrorRecord", "RunResult"]
