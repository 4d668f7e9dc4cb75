"""Scenario orchestration: resolve parameters, run the physics, write artifacts."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Callable

import numpy as np

from ..core import normalize_params
from ..dynamics import SimulationMode, excess_position_variance
from ..logging_utils import get_logger
from ..oracle import compare_oracle
from ..steady import cooling_landscape
from .artifact_renderer import (
    CONDITIONAL_COLUMNS,
    LANDSCAPE_COLUMNS,
    build_meta,
    conditional_sweep_table,
    landscape_table,
    table_payload,
    trajectory_columns,
    trajectory_table,
    write_csv,
    write_json,
)
from .ensemble import run_ensemble, summarize
from .scenario_selector import get_scenario_profile
from .schemas import OutputFormat, RunResult, ScenarioConfig, ScenarioKind, ScenarioProfile


class _ArtifactWriter:
    """Writes tables in the configured format and remembers every file it created."""

    def __init__(self, cfg: ScenarioConfig) -> None:
        self.cfg = cfg
        self.files: list[Path] = []

    def path(self, stem: str) -> Path:
        return self.cfg.output_path / f"{stem}.{self.cfg.format.value}"

    def table(self, stem: str, columns, data: np.ndarray, meta: dict) -> None:
        target = self.path(stem)
        self.files.append(target)
        if self.cfg.format is OutputFormat.JSON:
            write_json(target, meta, table_payload(columns, data))
        else:
            write_csv(target, columns, data, meta)

    def document(self, stem: str, meta: dict, data) -> None:
        target = self.cfg.output_path / f"{stem}.json"
        self.files.append(target)
        write_json(target, meta, data)

    def discard(self) -> None:
        for target in self.files:
            target.unlink(missing_ok=True)
        self.files.clear()


def _grid(profile: ScenarioProfile) -> np.ndarray:
    low, high, points = profile.k_tilde_range
    return np.logspace(low, high, int(points))


def _run_trajectories(cfg: ScenarioConfig, profile: ScenarioProfile, writer: _ArtifactWriter) -> int:
    sp = normalize_params(cfg.trap, cfg.dt, cfg.duration)
    outputs = run_ensemble(sp, cfg.seeds, cfg.mode, jobs=cfg.jobs)
    columns = trajectory_columns(profile.include_actuation)
    tables = [trajectory_table(out, profile.include_actuation) for out in outputs]
    stem = cfg.scenario.value

    if len(outputs) == 1:
        seed = cfg.seeds[0]
        writer.table(f"{stem}_seed{seed}", columns, tables[0], build_meta(cfg, content="trajectory"))
        return len(tables[0])

    mean, sem = summarize(tables)
    summary_columns = [columns[0]]
    summary_columns += [f"{name}_{stat}" for name in columns[1:] for stat in ("mean", "sem")]
    summary = np.column_stack(
        [mean[:, 0]] + [part for j in range(1, len(columns)) for part in (mean[:, j], sem[:, j])]
    )
    extra = {"content": "ensemble summary (mean, standard error)"}
    if cfg.mode is SimulationMode.FULL_FEEDBACK and cfg.duration > 2.0 * math.pi:
        # Second trap period, where the damped motion has settled.
        extra["excess_v_x_tilde_second_period"] = excess_position_variance(
            outputs, 2.0 * math.pi, min(4.0 * math.pi, cfg.duration)
        )
    writer.table(f"{stem}_summary", summary_columns, summary, build_meta(cfg, **extra))

    if cfg.per_seed:
        for out, table in zip(outputs, tables):
            meta = build_meta(cfg, content="trajectory", trajectory_seed=out.seed)
            writer.table(f"{stem}_seed{out.seed}", columns, table, meta)
    return len(summary)


def _run_conditional_sweep(cfg: ScenarioConfig, profile: ScenarioProfile, writer: _ArtifactWriter) -> int:
    data = conditional_sweep_table(profile.eta_list, _grid(profile))
    meta = build_meta(cfg, content="conditional steady states", eta_list=profile.eta_list)
    writer.table(cfg.scenario.value, CONDITIONAL_COLUMNS, data, meta)
    return len(data)


def _run_landscape(cfg: ScenarioConfig, profile: ScenarioProfile, writer: _ArtifactWriter) -> int:
    reports = cooling_landscape(profile.eta_list, _grid(profile), cfg.gamma_fb)
    data = landscape_table(reports)
    meta = build_meta(cfg, content="cooling landscape", eta_list=profile.eta_list)
    writer.table(cfg.scenario.value, LANDSCAPE_COLUMNS, data, meta)
    return len(data)


def _run_oracle(cfg: ScenarioConfig, profile: ScenarioProfile, writer: _ArtifactWriter) -> int:
    sp = normalize_params(cfg.trap, cfg.dt, cfg.duration)
    reports = [compare_oracle(sp, cfg.duration, cfg.dim, seed).model_dump() for seed in cfg.seeds]
    writer.document(cfg.scenario.value, build_meta(cfg, content="oracle comparison", dim=cfg.dim), reports)
    return len(reports)


_RUNNERS: dict[ScenarioKind, Callable[[ScenarioConfig, ScenarioProfile, _ArtifactWriter], int]] = {
    ScenarioKind.TRAJECTORY: _run_trajectories,
    ScenarioKind.CONDITIONAL_SWEEP: _run_conditional_sweep,
    ScenarioKind.LANDSCAPE: _run_landscape,
    ScenarioKind.ORACLE: _run_oracle,
}


def run_scenario(cfg: ScenarioConfig) -> RunResult:
    """Execute a scenario; on any failure the files written so far are removed."""

    profile = get_scenario_profile(cfg.scenario)
    logger = get_logger("workflow")
    logger.info(
        "Running scenario",
        extra={"scenario": cfg.scenario.value, "seeds": len(cfg.seeds), "out": str(cfg.output_path)},
    )
    writer = _ArtifactWriter(cfg)
    try:
        rows = _RUNNERS[profile.kind](cfg, profile, writer)
    except BaseException:
        writer.discard()
        raise
    logger.info("Scenario finished", extra={"files": [str(f) for f in writer.files], "rows": rows})
    return RunResult(scenario=cfg.scenario, files=writer.files, seeds=cfg.seeds, rows=rows)


__all__ = ["run_scenario"]
