"""Conditional Gaussian-moment dynamics, state estimation and feedback damping.

The true state and the estimator obey the same moment equations in simulation
units. The estimator replaces the Wiener increment with the innovation of the
photocurrent record, and feedback is computed from the estimated means only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .core import SimParams, TrapParams, normalize_params
from .errors import IntegratorBlowup, MeasurementOff, NumericalError, ParameterError
from .logging_utils import get_logger
from .measurement import RecordIncrement, generate_record_increment

VARIANCE_CEILING = 1e6
HEISENBERG_RTOL = 1e-9
MAX_STEPS = 100_000_000
NOISE_CHUNK = 65_536

# Quadratic cost weights of the feedback law (position and momentum equally).
# The controller is the closed-form solution H_f = (<p> x + <x> p) / q with
# damping Gamma = 1 / q; no Riccati solve happens at run time.
COST_P = np.eye(2)
COST_Q = np.eye(2)

STATE_COLUMNS = ("mean_x", "mean_p", "var_x", "var_p", "cov_xp")


class SimulationMode(str, Enum):
    MEASURE_ONLY = "MeasureOnly"
    ESTIMATE_ONLY = "EstimateOnly"
    FULL_FEEDBACK = "FullFeedback"
    UNCONDITIONED = "Unconditioned"


@dataclass(frozen=True)
class GaussianState:
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float

    @property
    def uncertainty_product(self) -> float:
        return self.var_x * self.var_p - self.cov_xp**2

    @property
    def energy(self) -> float:
        return 0.5 * (self.var_x + self.var_p + self.mean_x**2 + self.mean_p**2)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.mean_x, self.mean_p, self.var_x, self.var_p, self.cov_xp)

    @classmethod
    def from_row(cls, row: Sequence[float]) -> "GaussianState":
        return cls(*(float(value) for value in row))


@dataclass(frozen=True)
class TrajectoryOutput:
    """One seeded trajectory.

    Row 0 of every array is the initial condition at t = 0; record and
    actuation rows hold NaN there. ``record`` columns are (dI, dW_used) and
    ``true_states`` / ``est_states`` columns follow STATE_COLUMNS.
    """

    times: np.ndarray
    true_states: np.ndarray
    est_states: np.ndarray
    record: np.ndarray
    actuation: np.ndarray
    seed: int
    params_echo: SimParams
    mode: SimulationMode

    def __len__(self) -> int:
        return len(self.times)

    def true_state(self, index: int) -> GaussianState:
        return GaussianState.from_row(self.true_states[index])

    def est_state(self, index: int) -> GaussianState:
        return GaussianState.from_row(self.est_states[index])

    def record_increment(self, index: int) -> RecordIncrement:
        dI, dW = self.record[index]
        return RecordIncrement(dI=float(dI), dt=self.params_echo.dt, dW_used=float(dW))

    def phonon_series(self) -> np.ndarray:
        """Occupation E - 1/2 of the true state at every stored time."""

        mx, mp, vx, vp, _ = self.true_states.T
        return 0.5 * (vx + vp + mx**2 + mp**2) - 0.5


def variance_derivatives(s: GaussianState, sp: SimParams) -> tuple[float, float, float]:
    """Right-hand sides (dVx/dt, dVp/dt, dCxp/dt) of the conditional variance equations."""

    rate = sp.measurement_rate
    d_vx = 2.0 * s.cov_xp - rate * s.var_x**2
    d_vp = -2.0 * s.cov_xp + 2.0 * sp.kappa_s - rate * s.cov_xp**2
    d_cxp = s.var_p - s.var_x - rate * s.var_x * s.cov_xp
    return d_vx, d_vp, d_cxp


def _guard(var_x: float, var_p: float, cov_xp: float) -> None:
    for name, value in (("var_x", var_x), ("var_p", var_p)):
        if not (0.0 < value < VARIANCE_CEILING):
            raise IntegratorBlowup(f"{name} left (0, {VARIANCE_CEILING:g}): {value!r}; reduce dt")
    if not math.isfinite(cov_xp):
        raise IntegratorBlowup(f"cov_xp is not finite: {cov_xp!r}; reduce dt")
    product = var_x * var_p - cov_xp**2
    if product < 0.25 * (1.0 - HEISENBERG_RTOL):
        raise IntegratorBlowup(f"uncertainty product {product!r} fell below 1/4; reduce dt")


def _advance_variances(s: GaussianState, sp: SimParams) -> tuple[float, float, float]:
    # Euler step on (Vx, Cxp, D = VxVp - Cxp^2); dD/dt = Vx (2 kappa_s - 8 eta kappa_s D)
    # is the same ODE and keeps D on its relaxation towards 1/(4 eta).
    dt = sp.dt
    rate = sp.measurement_rate
    d_vx, _, d_cxp = variance_derivatives(s, sp)
    det = s.uncertainty_product
    d_det = s.var_x * (2.0 * sp.kappa_s - rate * det)

    var_x = s.var_x + dt * d_vx
    cov_xp = s.cov_xp + dt * d_cxp
    det = det + dt * d_det
    if not var_x > 0.0:
        raise IntegratorBlowup(f"var_x stepped to {var_x!r}; reduce dt")
    return var_x, (det + cov_xp**2) / var_x, cov_xp


def conditional_step(
    s: GaussianState,
    sp: SimParams,
    dW: float,
    feedback: bool = False,
    *,
    actuation: tuple[float, float] | None = None,
) -> GaussianState:
    """One Euler-Maruyama step of the conditional moment equations.

    ``actuation`` is a rate pair (fx, fp) added to the mean drifts. When it is
    omitted and ``feedback`` is set, the state damps itself at rate gamma_s.

    The means follow the plain Euler update. The variances take the Euler step
    in (Vx, Cxp, D = Vx Vp - Cxp^2) and recover Vp from D, so Vp differs from a
    literal Euler step on Vp at O(dt^2) per step; fixed points and first-order
    accuracy are the same, and D cannot undershoot 1/4 while a Vx dt < 1.
    """

    if actuation is None and feedback:
        actuation = (-sp.gamma_s * s.mean_x, -sp.gamma_s * s.mean_p)
    fx, fp = actuation if actuation is not None else (0.0, 0.0)

    dt = sp.dt
    gain = math.sqrt(sp.measurement_rate)
    mean_x = s.mean_x + (s.mean_p + fx) * dt + gain * s.var_x * dW
    mean_p = s.mean_p + (-s.mean_x + fp) * dt + gain * s.cov_xp * dW
    var_x, var_p, cov_xp = _advance_variances(s, sp)
    _guard(var_x, var_p, cov_xp)
    if not (math.isfinite(mean_x) and math.isfinite(mean_p)):
        raise IntegratorBlowup("means are no longer finite; reduce dt")
    return GaussianState(mean_x, mean_p, var_x, var_p, cov_xp)


def innovation(est: GaussianState, inc: RecordIncrement, sp: SimParams) -> float:
    return math.sqrt(sp.measurement_rate) * (inc.dI - est.mean_x * inc.dt)


def estimator_step(
    est: GaussianState,
    inc: RecordIncrement,
    sp: SimParams,
    feedback_applied: tuple[float, float] = (0.0, 0.0),
) -> GaussianState:
    """Propagate the estimate with the record innovation and the actuation actually applied."""

    return conditional_step(est, sp, innovation(est, inc, sp), actuation=feedback_applied)


def actuation(est: GaussianState, sp: SimParams) -> tuple[float, float]:
    """Feedback drift (fx, fp) = -gamma_s (<x>, <p>) computed from the estimate."""

    return (-sp.gamma_s * est.mean_x, -sp.gamma_s * est.mean_p)


def initial_true_state(sp: SimParams, phase: float) -> GaussianState:
    """Coherent state carrying the thermal energy n_th, at the given oscillation phase."""

    amplitude = math.sqrt(2.0 * sp.n_th)
    return GaussianState(amplitude * math.cos(phase), -amplitude * math.sin(phase), 0.5, 0.5, 0.0)


def initial_estimate(sp: SimParams) -> GaussianState:
    thermal = sp.n_th + 0.5
    return GaussianState(0.0, 0.0, thermal, thermal, 0.0)


def initial_phase(rng: np.random.Generator) -> float:
    return float(rng.uniform(0.0, 2.0 * math.pi))


def wiener_increments(
    rng: np.random.Generator, n_steps: int, dt: float, *, chunk: int = NOISE_CHUNK
) -> Iterator[float]:
    """Yield ``n_steps`` increments sqrt(dt) N(0, 1), drawn in fixed-size blocks."""

    scale = math.sqrt(dt)
    for start in range(0, n_steps, chunk):
        block = rng.standard_normal(min(chunk, n_steps - start)) * scale
        yield from block.tolist()


def _check_step_count(sp: SimParams) -> int:
    n_steps = sp.n_steps
    if n_steps > MAX_STEPS:
        raise ParameterError(
            f"duration/dt requests {n_steps} steps; the limit is {MAX_STEPS}", field="dt"
        )
    return n_steps


def run_simulation(sp: SimParams, seed: int, mode: SimulationMode | str) -> TrajectoryOutput:
    """Run the coupled true-state / record / estimator / feedback loop in simulation units."""

    mode = SimulationMode(mode)
    n_steps = _check_step_count(sp)
    measuring = mode is not SimulationMode.UNCONDITIONED
    if measuring and sp.measurement_rate <= 0:
        raise MeasurementOff(
            f"mode {mode.value} needs a measurement record but eta * kappa_s = 0",
            eta=sp.eta,
            kappa_s=sp.kappa_s,
        )
    tracking = mode in (SimulationMode.ESTIMATE_ONLY, SimulationMode.FULL_FEEDBACK)
    dynamics_sp = sp if measuring else sp.model_copy(update={"eta": 0.0})

    rng = np.random.default_rng(seed)
    true = initial_true_state(sp, initial_phase(rng))
    est = initial_estimate(sp) if tracking else None

    times = sp.dt * np.arange(n_steps + 1)
    true_rows = np.empty((n_steps + 1, 5))
    est_rows = np.full((n_steps + 1, 5), np.nan)
    record = np.full((n_steps + 1, 2), np.nan)
    applied_rows = np.full((n_steps + 1, 2), np.nan)
    true_rows[0] = true.as_tuple()
    if est is not None:
        est_rows[0] = est.as_tuple()

    noise = wiener_increments(rng, n_steps, sp.dt) if measuring else itertools.repeat(0.0, n_steps)
    for step, dW in enumerate(noise, start=1):
        try:
            if mode is SimulationMode.FULL_FEEDBACK:
                applied = actuation(est, sp)
            elif mode is SimulationMode.UNCONDITIONED and sp.gamma_s > 0:
                applied = actuation(true, sp)
            else:
                applied = (0.0, 0.0)

            if measuring:
                inc = generate_record_increment(true.mean_x, sp, dW)
                record[step] = (inc.dI, inc.dW_used)
            true = conditional_step(true, dynamics_sp, dW, actuation=applied)
            if est is not None:
                est = estimator_step(est, inc, sp, applied)
                est_rows[step] = est.as_tuple()
        except NumericalError as exc:
            raise exc.with_context(step=step, time=step * sp.dt, seed=seed)
        true_rows[step] = true.as_tuple()
        applied_rows[step] = applied

    return TrajectoryOutput(
        times=times,
        true_states=true_rows,
        est_states=est_rows,
        record=record,
        actuation=applied_rows,
        seed=seed,
        params_echo=sp,
        mode=mode,
    )


def simulate_trajectory(
    tp: TrapParams,
    dt: float,
    duration: float,
    seed: int,
    mode: SimulationMode | str,
) -> TrajectoryOutput:
    """Normalise ``tp`` and run one seeded trajectory; ``dt`` and ``duration`` in 1/omega."""

    sp = normalize_params(tp, dt, duration)
    logger = get_logger("dynamics")
    logger.debug(
        "Simulating trajectory",
        extra={"seed": seed, "mode": str(SimulationMode(mode).value), "steps": sp.n_steps},
    )
    return run_simulation(sp, seed, mode)


def ensemble_energy(outputs: Sequence[TrajectoryOutput]) -> np.ndarray:
    """Ensemble average of E = (Vx + Vp + <x>^2 + <p>^2) / 2 at every stored time."""

    stacked = np.stack([out.true_states for out in outputs])
    mx, mp, vx, vp = stacked[..., 0], stacked[..., 1], stacked[..., 2], stacked[..., 3]
    return (0.5 * (vx + vp + mx**2 + mp**2)).mean(axis=0)


def excess_position_variance(
    outputs: Sequence[TrajectoryOutput], t_start: float, t_stop: float
) -> float:
    """Spread of the true mean position across the ensemble, averaged over a time window.

    Returned in normalised units (twice the simulation-unit variance) so it is
    directly comparable to the steady-state excess variance.
    """

    if len(outputs) < 2:
        raise ParameterError("an ensemble of at least two trajectories is required", field="outputs")
    times = outputs[0].times
    window = (times >= t_start) & (times <= t_stop)
    if not window.any():
        raise ParameterError(
            f"window [{t_start}, {t_stop}] contains no stored times", field="t_start"
        )
    positions = np.stack([out.true_states[window, 0] for out in outputs])
    return float(2.0 * positions.var(axis=0, ddof=1).mean())


__all__ = [
    "COST_P",
    "COST_Q",
    "GaussianState",
    "STATE_COLUMNS",
    "SimulationMode",
    "TrajectoryOutput",
    "actuation",
    "conditional_step",
    "ensemble_energy",
    "estimator_step",
    "excess_position_variance",
    "initial_estimate",
    "initial_phase",
    "initial_true_state",
    "innovation",
    "run_simulation",
    "simulate_trajectory",
    "variance_derivatives",
    "wiener_increments",
]
