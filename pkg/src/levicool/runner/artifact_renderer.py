"""Tabulate results and write them as CSV or JSON with a reproducibility header."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .._version import __version__
from ..dynamics import TrajectoryOutput
from ..steady import SteadyStateReport, conditional_steady_state
from .scenario_selector import get_scenario_profile
from .schemas import ScenarioConfig

UNIT_NOTE = (
    "simulation units hbar = m = omega = 1; time in 1/omega; tau in trap periods; "
    "x, p, sd and energy columns in simulation units (ground state Vx = Vp = 1/2); "
    "*_tilde quantities normalised so the ground state has unit variance"
)

TRAJECTORY_COLUMNS = (
    "tau",
    "x_true",
    "p_true",
    "x_est",
    "p_est",
    "sd_x_est",
    "sd_p_est",
    "dI",
    "energy_true",
)
ACTUATION_COLUMNS = ("fx", "fp")
CONDITIONAL_COLUMNS = ("k_tilde", "eta", "v_x_tilde", "v_p_tilde")
LANDSCAPE_COLUMNS = ("eta", "k_tilde", "n_phonon", "purity")


def trajectory_columns(include_actuation: bool) -> tuple[str, ...]:
    return TRAJECTORY_COLUMNS + (ACTUATION_COLUMNS if include_actuation else ())


def trajectory_table(output: TrajectoryOutput, include_actuation: bool = False) -> np.ndarray:
    true = output.true_states
    est = output.est_states
    columns = [
        output.times / (2.0 * math.pi),
        true[:, 0],
        true[:, 1],
        est[:, 0],
        est[:, 1],
        np.sqrt(est[:, 2]),
        np.sqrt(est[:, 3]),
        output.record[:, 0],
        0.5 * (true[:, 2] + true[:, 3] + true[:, 0] ** 2 + true[:, 1] ** 2),
    ]
    if include_actuation:
        columns.extend([output.actuation[:, 0], output.actuation[:, 1]])
    return np.column_stack(columns)


def conditional_sweep_table(eta_list: Sequence[float], k_grid: Sequence[float]) -> np.ndarray:
    rows = []
    for eta in eta_list:
        for k_tilde in k_grid:
            cond = conditional_steady_state(eta, float(k_tilde))
            rows.append((float(k_tilde), eta, cond.v_x_tilde, cond.v_p_tilde))
    return np.array(rows, dtype=float)


def landscape_table(reports: Sequence[SteadyStateReport]) -> np.ndarray:
    return np.array(
        [(r.eta, r.k_tilde, r.phonon, r.purity_conditional) for r in reports], dtype=float
    )


def build_meta(cfg: ScenarioConfig, **extra: Any) -> dict[str, Any]:
    swept = get_scenario_profile(cfg.scenario).swept_keys
    meta: dict[str, Any] = {
        "tool": "levicool",
        "version": __version__,
        "units": UNIT_NOTE,
        "config": {key: value for key, value in cfg.flat().items() if key not in swept},
        "seeds": list(cfg.seeds),
        "dt": cfg.dt,
    }
    if cfg.mode is not None:
        meta["mode"] = cfg.mode.value
    meta.update(extra)
    return meta


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(item) for item in value)
    return str(value)


def header_lines(meta: Mapping[str, Any]) -> list[str]:
    lines = [f"# {meta['tool']} {meta['version']}", f"# units: {meta['units']}"]
    lines.extend(f"# {key} = {_format_value(value)}" for key, value in meta["config"].items())
    for key, value in meta.items():
        if key in {"tool", "version", "units", "config"}:
            continue
        lines.append(f"# {key}: {_format_value(value)}")
    return lines


def write_csv(path: Path, columns: Sequence[str], data: np.ndarray, meta: Mapping[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="\n") as handle:
        handle.write("\n".join(header_lines(meta)) + "\n")
        np.savetxt(
            handle,
            np.atleast_2d(data),
            fmt="%.17g",
            delimiter=",",
            header=",".join(columns),
            comments="",
        )
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [_jsonable(item) for item in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, Path):
        return str(value)
    return value


def table_payload(columns: Sequence[str], data: np.ndarray) -> dict[str, Any]:
    data = np.atleast_2d(data)
    return {name: data[:, index] for index, name in enumerate(columns)}


def write_json(path: Path, meta: Mapping[str, Any], data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"meta": _jsonable(dict(meta)), "data": _jsonable(data)}
    path.write_text(json.dumps(document, indent=2, allow_nan=False) + "\n")
    return path


__all__ = [
    "ACTUATION_COLUMNS",
    "CONDITIONAL_COLUMNS",
    "LANDSCAPE_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "UNIT_NOTE",
    "build_meta",
    "conditional_sweep_table",
    "header_lines",
    "landscape_table",
    "table_payload",
    "trajectory_columns",
    "trajectory_table",
    "write_csv",
    "write_json",
]
