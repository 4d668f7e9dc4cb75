"""Physical parameters, unit conventions and nondimensionalisation.

Every dynamical module works in simulation units with hbar = m = omega = 1 and
time measured in 1/omega. In these units the ground state has Vx = Vp = 1/2,
and the normalised ("tilde") variances used by the steady-state formulas are
exactly twice the simulation variances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy import constants

from .errors import ParameterError

HBAR = constants.hbar
K_B = constants.k

# ħω/k_B T above this makes the Bose factor underflow to zero.
_FROZEN_OUT = 700.0

ModelT = TypeVar("ModelT", bound=BaseModel)


class TrapParams(BaseModel):
    """Trap, probe and controller settings in physical units."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    mass: float = Field(gt=0, description="particle mass in kg")
    omega: float = Field(gt=0, description="trap angular frequency in rad/s")
    temperature: float = Field(ge=0, description="initial temperature in K")
    eta: float = Field(ge=0, le=1, description="quantum efficiency")
    k_tilde: float = Field(ge=0, description="normalised measurement strength kappa x0^2 / omega")
    gamma_fb: float = Field(ge=0, description="feedback damping in units of omega")


class SimParams(BaseModel):
    """Dimensionless parameters consumed by the integrators."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kappa_s: float = Field(ge=0)
    eta: float = Field(ge=0, le=1)
    gamma_s: float = Field(ge=0)
    n_th: float = Field(ge=0)
    dt: float = Field(gt=0)
    duration: float = Field(gt=0)

    @model_validator(mode="after")
    def _duration_covers_one_step(self) -> "SimParams":
        if self.duration < self.dt:
            raise ValueError(f"duration {self.duration} is shorter than one step dt={self.dt}")
        return self

    @property
    def measurement_rate(self) -> float:
        """Information rate 8 eta kappa_s entering the variance equations."""

        return 8.0 * self.eta * self.kappa_s

    @property
    def chi(self) -> float:
        rate = 2.0 * self.eta * self.kappa_s
        return math.inf if rate == 0 else 1.0 / rate

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True)
class GroundStateScale:
    x0: float
    p0: float


def validated(model: type[ModelT], **fields: Any) -> ModelT:
    """Build a pydantic model, converting validation failures into ParameterError."""

    try:
        return model(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first.get("loc", ())) or model.__name__
        raise ParameterError(
            f"Invalid {model.__name__}.{field}: {first.get('msg', 'validation failed')}",
            field=field,
        ) from exc


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value!r}", field=name)


def thermal_occupation(tp: TrapParams) -> float:
    """Bose-Einstein occupation of the trap mode at the initial temperature."""

    if tp.temperature == 0:
        return 0.0
    ratio = HBAR * tp.omega / (K_B * tp.temperature)
    if ratio > _FROZEN_OUT:
        return 0.0
    return 1.0 / math.expm1(ratio)


def thermal_budget(T_gas: float, gamma_th: float, omega: float) -> float:
    """Phonon reheating rate k_B T gamma_th / (hbar omega) in 1/s; diagnostic only."""

    _require_finite(T_gas=T_gas, gamma_th=gamma_th, omega=omega)
    for name, value in (("T_gas", T_gas), ("gamma_th", gamma_th), ("omega", omega)):
        if value < 0:
            raise ParameterError(f"{name} must be >= 0, got {value}", field=name)
    if gamma_th == 0 or T_gas == 0:
        return 0.0
    if omega == 0:
        raise ParameterError("omega must be > 0 for a finite reheating rate", field="omega")
    return K_B * T_gas * gamma_th / (HBAR * omega)


def ground_state_scale(tp: TrapParams) -> GroundStateScale:
    x0 = math.sqrt(HBAR / (2.0 * tp.mass * tp.omega))
    return GroundStateScale(x0=x0, p0=HBAR / (2.0 * x0))


def normalize_params(tp: TrapParams, dt: float, duration: float) -> SimParams:
    """Map physical trap parameters onto simulation units.

    kappa_s = kappa (hbar / m omega) / omega = 2 k_tilde because hbar / m omega = 2 x0^2.
    """

    _require_finite(dt=dt, duration=duration)
    return validated(
        SimParams,
        kappa_s=2.0 * tp.k_tilde,
        eta=tp.eta,
        gamma_s=tp.gamma_fb,
        n_th=thermal_occupation(tp),
        dt=dt,
        duration=duration,
    )


def trap_params_from_sim(sp: SimParams, *, mass: float, omega: float) -> TrapParams:
    """Invert normalize_params for a particle of the given mass and trap frequency."""

    if sp.n_th == 0:
        temperature = 0.0
    else:
        temperature = HBAR * omega / (K_B * math.log1p(1.0 / sp.n_th))
    return validated(
        TrapParams,
        mass=mass,
        omega=omega,
        temperature=temperature,
        eta=sp.eta,
        k_tilde=sp.kappa_s / 2.0,
        gamma_fb=sp.gamma_s,
    )


__all__ = [
    "GroundStateScale",
    "SimParams",
    "TrapParams",
    "ground_state_scale",
    "normalize_params",
    "thermal_budget",
    "thermal_occupation",
    "trap_params_from_sim",
    "validated",
]
