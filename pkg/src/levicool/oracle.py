"""Brute-force check of the Gaussian-moment equations on a truncated Fock basis.

The conditioned master equation

    d rho = -i[H, rho] dt + 2 kappa_s D[x] rho dt + sqrt(2 eta kappa_s) H[x] rho dW

is integrated with the same Wiener increments that drive the Gaussian
integrator, and the moments of both are compared step by step. With this
normalisation d<x> carries sqrt(8 eta kappa_s) Vx dW and dVp carries
2 kappa_s dt, term for term the moment equations used by ``dynamics``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel

from .core import SimParams
from .dynamics import (
    GaussianState,
    conditional_step,
    initial_phase,
    initial_true_state,
    wiener_increments,
)
from .errors import LevicoolError, ParameterError, PositivityLoss, TruncationLeak
from .logging_utils import get_logger

MIN_DIM = 4
MAX_DIM = 128
TOP_LEVELS = 3
LEAK_THRESHOLD = 1e-4
INITIAL_LEAK_THRESHOLD = 1e-6
POSITIVITY_FLOOR = -1e-6


@dataclass(frozen=True)
class FockOperators:
    """Quadrature operators on the first ``dim`` number states (simulation units).

    The quadratic operators are truncations of the exact infinite-dimensional
    products, so ground-state expectations are exact.
    """

    dim: int
    x_op: np.ndarray
    p_op: np.ndarray
    x_sq_op: np.ndarray
    p_sq_op: np.ndarray
    xp_sym_op: np.ndarray
    energies: np.ndarray
    x_eigenvalues: np.ndarray = field(repr=False)
    x_eigenvectors: np.ndarray = field(repr=False)


@dataclass
class DensityState:
    rho: np.ndarray
    trace_drift: float = 0.0

    def trace(self) -> float:
        return float(np.real(np.trace(self.rho)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.rho)[0])

    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))

    def top_population(self, levels: int = TOP_LEVELS) -> float:
        return float(np.real(np.diag(self.rho)[-levels:]).sum())


class OracleReport(BaseModel):
    """Largest Gaussian-vs-Fock moment deviations observed over a run."""

    dim: int
    seed: int
    dt: float
    duration: float
    steps: int
    max_mean_x_deviation: float
    max_mean_p_deviation: float
    max_var_x_deviation: float
    max_var_p_deviation: float
    max_cov_xp_deviation: float
    max_deviation: float
    max_trace_drift: float
    max_top_population: float
    min_eigenvalue: float


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def build_operators(dim: int) -> FockOperators:
    if not (isinstance(dim, (int, np.integer)) and MIN_DIM <= dim <= MAX_DIM):
        raise ParameterError(f"dim must be an integer in [{MIN_DIM}, {MAX_DIM}], got {dim!r}", field="dim")

    # One extra level makes the truncated quadratic operators exact.
    big = dim + 1
    a = _ladder(big)
    x_big = (a + a.conj().T) / math.sqrt(2.0)
    p_big = -1j * (a - a.conj().T) / math.sqrt(2.0)
    x_op = x_big[:dim, :dim].copy()
    p_op = p_big[:dim, :dim].copy()
    x_sq = (x_big @ x_big)[:dim, :dim]
    p_sq = (p_big @ p_big)[:dim, :dim]
    xp_sym = (0.5 * (x_big @ p_big + p_big @ x_big))[:dim, :dim]
    eigenvalues, eigenvectors = np.linalg.eigh(x_op)
    return FockOperators(
        dim=dim,
        x_op=x_op,
        p_op=p_op,
        x_sq_op=x_sq,
        p_sq_op=p_sq,
        xp_sym_op=xp_sym,
        energies=np.arange(dim, dtype=float) + 0.5,
        x_eigenvalues=eigenvalues,
        x_eigenvectors=eigenvectors,
    )


def _expect(op: np.ndarray, rho: np.ndarray) -> float:
    return float(np.real(np.einsum("ij,ji->", op, rho)))


def fock_moments(ds: DensityState, ops: FockOperators) -> GaussianState:
    mean_x = _expect(ops.x_op, ds.rho)
    mean_p = _expect(ops.p_op, ds.rho)
    return GaussianState(
        mean_x=mean_x,
        mean_p=mean_p,
        var_x=_expect(ops.x_sq_op, ds.rho) - mean_x**2,
        var_p=_expect(ops.p_sq_op, ds.rho) - mean_p**2,
        cov_xp=_expect(ops.xp_sym_op, ds.rho) - mean_x * mean_p,
    )


def central_moment(ds: DensityState, ops: FockOperators, order: int) -> float:
    """<(x - <x>)^order> evaluated in the eigenbasis of the truncated position operator."""

    u = ops.x_eigenvectors
    weights = np.real(np.einsum("ki,kl,li->i", u.conj(), ds.rho, u))
    mean = float(weights @ ops.x_eigenvalues)
    return float(weights @ (ops.x_eigenvalues - mean) ** order)


def coherent_density(ops: FockOperators, mean_x: float, mean_p: float) -> DensityState:
    alpha = complex(mean_x, mean_p) / math.sqrt(2.0)
    ratios = np.empty(ops.dim, dtype=complex)
    ratios[0] = math.exp(-0.5 * abs(alpha) ** 2)
    ratios[1:] = alpha / np.sqrt(np.arange(1, ops.dim))
    amplitudes = np.cumprod(ratios)
    rho = np.outer(amplitudes, amplitudes.conj())
    state = DensityState(rho=rho / np.real(np.trace(rho)))
    leak = state.top_population(1)
    if leak > INITIAL_LEAK_THRESHOLD:
        raise TruncationLeak(
            f"initial state holds {leak:.3g} population in the top level; raise dim",
            dim=ops.dim,
        )
    return state


def sme_step(ds: DensityState, ops: FockOperators, sp: SimParams, dW: float) -> DensityState:
    """One step of the conditioned master equation, positive by construction.

    With y = x - <x>, c = sqrt(2 eta kappa_s) and V = <y^2>, the measurement acts
    through the Kraus factor exp(c y dW - c^2 y^2 dt - c^2 V (dW^2 - dt)) and the
    unobserved dephasing at rate (1 - eta) kappa_s, both diagonal in the position
    eigenbasis; the free rotation exp(-i H dt) is exact. Before renormalisation
    the trace moves by O(dt^1.5) per step; ``trace_drift`` records it.
    """

    dt = sp.dt
    c = math.sqrt(2.0 * sp.eta * sp.kappa_s)
    rho = ds.rho
    if sp.kappa_s > 0:
        lam = ops.x_eigenvalues
        u = ops.x_eigenvectors
        rotated = u.conj().T @ rho @ u
        weights = np.real(np.diag(rotated))
        offset = lam - weights @ lam
        spread_x = float(weights @ offset**2)
        kraus = np.exp(c * dW * offset - c**2 * dt * offset**2 - c**2 * spread_x * (dW**2 - dt))
        spread = np.subtract.outer(lam, lam) ** 2
        kernel = np.outer(kraus, kraus) * np.exp(-(1.0 - sp.eta) * sp.kappa_s * dt * spread)
        rho = u @ (rotated * kernel) @ u.conj().T

    phase = np.exp(-1j * ops.energies * dt)
    rho = rho * np.outer(phase, phase.conj())
    rho = 0.5 * (rho + rho.conj().T)
    trace = float(np.real(np.trace(rho)))
    state = DensityState(rho=rho / trace, trace_drift=abs(trace - 1.0))

    leak = state.top_population()
    if leak > LEAK_THRESHOLD:
        raise TruncationLeak(
            f"top {TOP_LEVELS} levels hold {leak:.3g} population; raise dim", dim=ops.dim
        )
    lowest = state.min_eigenvalue()
    if lowest < POSITIVITY_FLOOR:
        raise PositivityLoss(f"density matrix eigenvalue {lowest:.3g} below {POSITIVITY_FLOOR}")
    return state


def _summed(increments: Iterable[float], block: int) -> Iterator[float]:
    stream = iter(increments)
    while chunk := list(itertools.islice(stream, block)):
        yield math.fsum(chunk)


def compare_oracle(
    sp: SimParams, duration: float, dim: int, seed: int, *, substeps: int = 1
) -> OracleReport:
    """Run the Gaussian integrator and the Fock-basis oracle on a shared noise stream.

    The Wiener path is drawn at dt / ``substeps`` and summed back to dt, so a run
    at dt with ``substeps=2`` follows the same path as a run at dt / 2.
    """

    if not (math.isfinite(duration) and duration >= sp.dt):
        raise ParameterError(f"duration must be >= dt, got {duration}", field="duration")
    if substeps < 1:
        raise ParameterError(f"substeps must be >= 1, got {substeps}", field="substeps")
    ops = build_operators(dim)
    n_steps = int(round(duration / sp.dt))

    rng = np.random.default_rng(seed)
    gauss = initial_true_state(sp, initial_phase(rng))
    ds = coherent_density(ops, gauss.mean_x, gauss.mean_p)
    noise = _summed(wiener_increments(rng, n_steps * substeps, sp.dt / substeps), substeps)

    logger = get_logger("oracle")
    logger.info(
        "Comparing Gaussian moments with Fock-basis oracle",
        extra={"dim": dim, "seed": seed, "steps": n_steps, "kappa_s": sp.kappa_s, "eta": sp.eta},
    )

    deviations = np.zeros(5)
    max_drift = 0.0
    max_top = ds.top_population()
    min_eig = ds.min_eigenvalue()
    for step, dW in enumerate(noise, start=1):
        try:
            gauss = conditional_step(gauss, sp, dW)
            ds = sme_step(ds, ops, sp, dW)
        except LevicoolError as exc:
            raise exc.with_context(step=step, seed=seed)
        fock = fock_moments(ds, ops)
        deviations = np.maximum(
            deviations, np.abs(np.subtract(gauss.as_tuple(), fock.as_tuple()))
        )
        max_drift = max(max_drift, ds.trace_drift)
        max_top = max(max_top, ds.top_population())
        min_eig = min(min_eig, ds.min_eigenvalue())

    report = OracleReport(
        dim=dim,
        seed=seed,
        dt=sp.dt,
        duration=duration,
        steps=n_steps,
        max_mean_x_deviation=float(deviations[0]),
        max_mean_p_deviation=float(deviations[1]),
        max_var_x_deviation=float(deviations[2]),
        max_var_p_deviation=float(deviations[3]),
        max_cov_xp_deviation=float(deviations[4]),
        max_deviation=float(deviations.max()),
        max_trace_drift=max_drift,
        max_top_population=max_top,
        min_eigenvalue=min_eig,
    )
    logger.info("Oracle comparison finished", extra={"max_deviation": report.max_deviation})
    return report


__all__ = [
    "DensityState",
    "FockOperators",
    "OracleReport",
    "build_operators",
    "central_moment",
    "coherent_density",
    "compare_oracle",
    "fock_moments",
    "sme_step",
]
