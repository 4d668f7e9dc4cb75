"""Seeded ensembles over a process pool, aggregated in seed order."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Sequence

import numpy as np

from ..core import SimParams
from ..dynamics import SimulationMode, TrajectoryOutput, run_simulation
from ..logging_utils import get_logger


def run_ensemble(
    sp: SimParams,
    seeds: Sequence[int],
    mode: SimulationMode,
    *,
    jobs: int = 1,
) -> list[TrajectoryOutput]:
    """Simulate one trajectory per seed; the result list follows ``seeds`` order."""

    logger = get_logger("ensemble")
    workers = max(1, min(jobs, len(seeds)))
    logger.info(
        "Running ensemble",
        extra={"seeds": len(seeds), "workers": workers, "mode": mode.value, "steps": sp.n_steps},
    )
    simulate = partial(run_simulation, sp, mode=mode)
    if workers == 1:
        outputs = [simulate(seed) for seed in seeds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(simulate, seeds))
    logger.info("Ensemble finished", extra={"seeds": len(seeds)})
    return outputs


def summarize(tables: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise mean and standard error across equally shaped per-seed tables."""

    stacked = np.stack(tables)
    count = stacked.shape[0]
    mean = stacked.mean(axis=0)
    if count < 2:
        return mean, np.full_like(mean, np.nan)
    sem = stacked.std(axis=0, ddof=1) / np.sqrt(count)
    return mean, sem


__all__ = ["run_ensemble", "summarize"]
