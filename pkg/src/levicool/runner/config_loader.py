"""Flat key/value run configuration: parsing, preset merging and validation."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Mapping

from ..config import Settings, get_settings
from ..core import validated
from ..errors import ParameterError
from .scenario_selector import get_scenario_profile, resolve_mode
from .schemas import CONFIG_KEYS, OutputFormat, Scenario, ScenarioConfig

_FLOAT_KEYS = {
    "mass_kg",
    "omega_hz",
    "temperature_k",
    "eta",
    "k_tilde",
    "gamma_fb",
    "dt",
    "duration_periods",
}
_INT_KEYS = {"seed", "seed_count"}


def parse_config_file(path: Path) -> dict[str, str]:
    """Read ``key = value`` lines; blank lines and ``#`` comments are skipped."""

    data: dict[str, str] = {}
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParameterError(
                f"{path}:{number}: expected 'key = value', got {stripped!r}", field="config"
            )
        key, raw_value = stripped.split("=", 1)
        data[key.strip()] = raw_value.split("#", 1)[0].strip().strip('"').strip("'")
    return data


def _coerce(key: str, value: Any) -> Any:
    if key not in CONFIG_KEYS:
        raise ParameterError(
            f"Unknown configuration key '{key}'. Expected one of {list(CONFIG_KEYS)}", field=key
        )
    if value is None:
        return None
    try:
        if key in _FLOAT_KEYS:
            number = float(value)
            if not math.isfinite(number):
                raise ValueError("not finite")
            return number
        if key in _INT_KEYS:
            return int(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"Invalid value {value!r} for '{key}'", field=key) from exc
    return str(value).strip()


def build_scenario_config(
    values: Mapping[str, Any],
    *,
    settings: Settings | None = None,
    jobs: int | None = None,
    per_seed: bool | None = None,
    dim: int | None = None,
) -> ScenarioConfig:
    """Merge preset defaults with explicit values and validate the result."""

    settings = settings or get_settings()
    explicit = {key: _coerce(key, value) for key, value in values.items()}
    explicit = {key: value for key, value in explicit.items() if value is not None}

    try:
        scenario = Scenario(explicit.get("scenario", Scenario.CUSTOM.value))
    except ValueError as exc:
        raise ParameterError(
            f"Unknown scenario '{explicit.get('scenario')}'. "
            f"Expected one of {[item.value for item in Scenario]}",
            field="scenario",
        ) from exc
    profile = get_scenario_profile(scenario)

    missing = [key for key in profile.required_keys if key not in explicit]
    if missing:
        raise ParameterError(
            f"Scenario '{scenario.value}' requires explicit values for {missing}", field=missing[0]
        )
    swept = [key for key in profile.swept_keys if key in explicit]
    if swept:
        raise ParameterError(
            f"Scenario '{scenario.value}' sweeps {list(profile.swept_keys)} itself; drop {swept}",
            field=swept[0],
        )

    merged: dict[str, Any] = {**profile.defaults, **explicit}
    seed = merged.get("seed", 0)
    seed_count = merged.get("seed_count", 1)
    if seed_count < 1:
        raise ParameterError(f"seed_count must be >= 1, got {seed_count}", field="seed_count")

    fmt = merged.get("format", OutputFormat.CSV.value)
    if scenario is Scenario.ORACLE_CHECK:
        fmt = OutputFormat.JSON.value

    fields: dict[str, Any] = {
        key: merged[key]
        for key in (
            "mass_kg",
            "omega_hz",
            "temperature_k",
            "eta",
            "k_tilde",
            "gamma_fb",
            "dt",
            "duration_periods",
        )
        if key in merged
    }
    fields.update(
        scenario=scenario,
        mode=resolve_mode(profile, float(merged.get("gamma_fb", 0.0))),
        seeds=list(range(seed, seed + seed_count)),
        output_path=Path(merged.get("out", settings.output_dir)),
        format=fmt,
        jobs=jobs or settings.resolved_jobs,
        per_seed=settings.per_seed_files if per_seed is None else per_seed,
    )
    if dim is not None:
        fields["dim"] = dim
    return validated(ScenarioConfig, **fields)


__all__ = ["build_scenario_config", "parse_config_file"]
