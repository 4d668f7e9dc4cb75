"""Closed-form steady states of the conditional and feedback-damped Gaussian states.

All quantities here are normalised so that the oscillator ground state has
unit position and momentum variance (twice the simulation-unit variances).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import LevicoolError, ParameterError, SingularSystem
from .logging_utils import get_logger

HEISENBERG_RTOL = 1e-9


@dataclass(frozen=True)
class ConditionalSteadyState:
    v_x_tilde: float
    v_p_tilde: float
    c_xp_tilde: float
    xi: float
    chi: float


@dataclass(frozen=True)
class ExcessSteadyState:
    v_x_excess: float
    v_p_excess: float
    c_xp_excess: float


@dataclass(frozen=True)
class SteadyStateReport:
    conditional: ConditionalSteadyState
    excess: ExcessSteadyState
    purity_conditional: float
    purity_total: float
    phonon: float
    inputs: tuple[float, float, float]

    @property
    def eta(self) -> float:
        return self.inputs[0]

    @property
    def k_tilde(self) -> float:
        return self.inputs[1]

    @property
    def gamma_fb(self) -> float:
        return self.inputs[2]


def _check_eta(eta: float) -> None:
    if not (math.isfinite(eta) and 0.0 < eta <= 1.0):
        raise ParameterError(f"eta must lie in (0, 1], got {eta}", field="eta")


def _check_k_tilde(k_tilde: float) -> None:
    if not (math.isfinite(k_tilde) and k_tilde > 0.0):
        raise ParameterError(f"k_tilde must be finite and > 0, got {k_tilde}", field="k_tilde")


def conditional_steady_state(eta: float, k_tilde: float) -> ConditionalSteadyState:
    """Fixed point of the conditional variance equations."""

    _check_eta(eta)
    _check_k_tilde(k_tilde)
    chi = 1.0 / (4.0 * eta * k_tilde)
    xi = math.sqrt(1.0 + 4.0 / (eta * chi**2))
    v_x = math.sqrt((2.0 / eta) / (xi + 1.0))
    v_p = math.sqrt((2.0 / eta) * xi**2 / (xi + 1.0))
    return ConditionalSteadyState(
        v_x_tilde=v_x,
        v_p_tilde=v_p,
        c_xp_tilde=v_x**2 / chi,
        xi=xi,
        chi=chi,
    )


def _excess_sources(cond: ConditionalSteadyState) -> np.ndarray:
    scale = 2.0 / cond.chi
    return scale * np.array(
        [cond.v_x_tilde**2, cond.c_xp_tilde**2, cond.v_x_tilde * cond.c_xp_tilde]
    )


def excess_derivatives(
    excess: ExcessSteadyState | Sequence[float],
    cond: ConditionalSteadyState,
    gamma_fb: float,
) -> np.ndarray:
    """Right-hand sides of the excess-variance equations (omega = 1)."""

    if isinstance(excess, ExcessSteadyState):
        v_x, v_p, c_xp = excess.v_x_excess, excess.v_p_excess, excess.c_xp_excess
    else:
        v_x, v_p, c_xp = excess
    drift = np.array(
        [
            -2.0 * gamma_fb * v_x + 2.0 * c_xp,
            -2.0 * gamma_fb * v_p - 2.0 * c_xp,
            -2.0 * gamma_fb * c_xp - (v_x - v_p),
        ]
    )
    return drift + _excess_sources(cond)


def excess_steady_state(eta: float, k_tilde: float, gamma_fb: float) -> ExcessSteadyState:
    """Excess variances left by the damped mean motion, from a direct 3x3 linear solve."""

    if not (math.isfinite(gamma_fb) and gamma_fb > 0.0):
        raise ParameterError(
            f"gamma_fb must be finite and > 0 for a steady state, got {gamma_fb}", field="gamma_fb"
        )
    cond = conditional_steady_state(eta, k_tilde)
    g = 2.0 * gamma_fb
    system = np.array(
        [
            [-g, 0.0, 2.0],
            [0.0, -g, -2.0],
            [-1.0, 1.0, -g],
        ]
    )
    try:
        solution = np.linalg.solve(system, -_excess_sources(cond))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(
            "excess-variance system is singular", eta=eta, k_tilde=k_tilde, gamma_fb=gamma_fb
        ) from exc
    if not np.all(np.isfinite(solution)):
        raise SingularSystem(
            "excess-variance solve returned non-finite values",
            eta=eta,
            k_tilde=k_tilde,
            gamma_fb=gamma_fb,
        )
    v_x, v_p, c_xp = (float(value) for value in solution)
    return ExcessSteadyState(v_x_excess=v_x, v_p_excess=v_p, c_xp_excess=c_xp)


def purity(v_x_tilde: float, v_p_tilde: float, c_xp_tilde: float) -> float:
    """Tr(rho^2) of a Gaussian state from its normalised second moments."""

    det = v_x_tilde * v_p_tilde - c_xp_tilde**2
    if not det >= 1.0 - HEISENBERG_RTOL:
        raise ParameterError(
            f"normalised determinant {det!r} violates the uncertainty bound 1",
            field="v_x_tilde",
        )
    return 1.0 / math.sqrt(det)


def phonon_number(cond: ConditionalSteadyState, exc: ExcessSteadyState) -> float:
    """Mean occupation from the combined conditional and excess second moments."""

    total_x = cond.v_x_tilde + exc.v_x_excess
    total_p = cond.v_p_tilde + exc.v_p_excess
    # Round-off can push a ground-state result a few ulps below zero.
    return max(0.0, total_x / 4.0 + total_p / 4.0 - 0.5)


def steady_state_report(eta: float, k_tilde: float, gamma_fb: float) -> SteadyStateReport:
    cond = conditional_steady_state(eta, k_tilde)
    exc = excess_steady_state(eta, k_tilde, gamma_fb)
    return SteadyStateReport(
        conditional=cond,
        excess=exc,
        purity_conditional=purity(cond.v_x_tilde, cond.v_p_tilde, cond.c_xp_tilde),
        purity_total=purity(
            cond.v_x_tilde + exc.v_x_excess,
            cond.v_p_tilde + exc.v_p_excess,
            cond.c_xp_tilde + exc.c_xp_excess,
        ),
        phonon=phonon_number(cond, exc),
        inputs=(eta, k_tilde, gamma_fb),
    )


def cooling_landscape(
    eta_list: Iterable[float],
    k_tilde_grid: Iterable[float],
    gamma_fb: float,
) -> list[SteadyStateReport]:
    """Steady-state reports on an (eta, k_tilde) grid, ordered by eta then k_tilde."""

    etas = sorted(float(eta) for eta in eta_list)
    k_values = sorted(float(k) for k in k_tilde_grid)
    if not etas or not k_values:
        raise ParameterError("cooling landscape needs at least one eta and one k_tilde", field="grid")

    logger = get_logger("steady")
    logger.info(
        "Evaluating cooling landscape",
        extra={"etas": len(etas), "k_points": len(k_values), "gamma_fb": gamma_fb},
    )
    table: list[SteadyStateReport] = []
    for eta in etas:
        for k_tilde in k_values:
            try:
                table.append(steady_state_report(eta, k_tilde, gamma_fb))
            except LevicoolError as exc:
                raise exc.with_context(eta=eta, k_tilde=k_tilde)
    return table


def damping_sweep(eta: float, k_tilde: float, gamma_list: Iterable[float]) -> list[SteadyStateReport]:
    """Reports along increasing feedback damping at fixed eta and k_tilde."""

    table: list[SteadyStateReport] = []
    for gamma_fb in sorted(float(g) for g in gamma_list):
        try:
            table.append(steady_state_report(eta, k_tilde, gamma_fb))
        except LevicoolError as exc:
            raise exc.with_context(gamma_fb=gamma_fb)
    return table


__all__ = [
    "ConditionalSteadyState",
    "ExcessSteadyState",
    "SteadyStateReport",
    "conditional_steady_state",
    "cooling_landscape",
    "damping_sweep",
    "excess_derivatives",
    "excess_steady_state",
    "phonon_number",
    "purity",
    "steady_state_report",
]
