"""Optical probe model: measurement strength, photocurrent record and diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate

from .core import SimParams
from .errors import LambDickeViolation, MeasurementOff, ParameterError

LAMB_DICKE_PASS = 0.1
LAMB_DICKE_WARN = 0.3
RETRO_MIRROR_ONSET = 0.25


class OpticalProbe(BaseModel):
    """Standing-wave probe formed by the particle's scattered light and its mirror image."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    gamma: float = Field(ge=0, description="scattering rate into the mirror mode, 1/s")
    k_L: float = Field(gt=0, description="probe wavenumber, 1/m")
    mirror_distance_phase: float = Field(default=math.pi / 4, description="k_L L at the trap centre")


@dataclass(frozen=True)
class RecordIncrement:
    dI: float
    dt: float
    dW_used: float


class RecoilGeometry(str, Enum):
    IMAGING_PERPENDICULAR = "ImagingPerpendicular"
    MIRROR_AXIAL = "MirrorAxial"


class LambDickeStatus(str, Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"


@dataclass(frozen=True)
class LambDickeReport:
    status: LambDickeStatus
    parameter: float

    @property
    def ok(self) -> bool:
        return self.status is LambDickeStatus.PASS


def kappa_from_probe(probe: OpticalProbe) -> float:
    """Measurement strength kappa = gamma k_L^2 / 2 in 1/(m^2 s)."""

    return probe.gamma * probe.k_L**2 / 2.0


def photon_rate(probe: OpticalProbe, mean_x: float) -> float:
    """Deterministic detection rate of the linearised standing-wave signal.

    Intensity at the trap centre goes as sin^2(phase + k_L x); expanded to first
    order in k_L x. At the default phase pi/4 this is gamma/2 + gamma k_L x.
    """

    lamb_dicke = abs(probe.k_L * mean_x)
    if lamb_dicke >= LAMB_DICKE_PASS:
        raise LambDickeViolation(
            f"k_L*x = {lamb_dicke:.3g} is outside the Lamb-Dicke regime (< {LAMB_DICKE_PASS})",
            field="mean_x",
        )
    phase = probe.mirror_distance_phase
    return probe.gamma * (math.sin(phase) ** 2 + math.sin(2.0 * phase) * probe.k_L * mean_x)


def generate_record_increment(true_mean_x: float, sp: SimParams, dW: float) -> RecordIncrement:
    """Photocurrent increment dI = <x> dt + dW / sqrt(8 eta kappa_s).

    ``dW`` must be the same Wiener increment that drives the true state this step.
    """

    rate = sp.measurement_rate
    if rate <= 0:
        raise MeasurementOff(
            "No measurement record exists when eta * kappa_s = 0",
            eta=sp.eta,
            kappa_s=sp.kappa_s,
        )
    return RecordIncrement(dI=true_mean_x * sp.dt + dW / math.sqrt(rate), dt=sp.dt, dW_used=dW)


def resolution(delta_t: float, eta: float, kappa_s: float) -> float:
    """Position resolution after integrating the record for ``delta_t``."""

    for name, value in (("delta_t", delta_t), ("eta", eta), ("kappa_s", kappa_s)):
        if value < 0 or math.isnan(value):
            raise ParameterError(f"{name} must be >= 0, got {value}", field=name)
    information = 8.0 * delta_t * eta * kappa_s
    if information == 0:
        return math.inf
    return 1.0 / math.sqrt(information)


def required_k_tilde(eta: float, delta_t: float = 1.0) -> float:
    """Measurement strength whose resolution over ``delta_t`` equals the ground-state size."""

    if not 0 < eta <= 1:
        raise ParameterError(f"eta must be in (0, 1], got {eta}", field="eta")
    if delta_t <= 0:
        raise ParameterError(f"delta_t must be > 0, got {delta_t}", field="delta_t")
    return 1.0 / (8.0 * eta * delta_t)


def _emission(theta: float) -> float:
    return 0.75 * abs(math.cos(theta))


def _projection(geometry: RecoilGeometry):
    if geometry is RecoilGeometry.MIRROR_AXIAL:
        return lambda phi, theta: math.cos(theta) ** 2
    return lambda phi, theta: (math.sin(theta) * math.cos(phi)) ** 2


def _cone_shares(collection_efficiency: float) -> tuple[float, float]:
    """Fractions of the forward and backward lobe powers inside the collector.

    The lens alone gathers the first quarter of the emitted power; past that the
    retro-mirror opens a backward cone and both lobes fill together.
    """

    if collection_efficiency <= RETRO_MIRROR_ONSET:
        return 2.0 * collection_efficiency, 0.0
    forward = (2.0 * collection_efficiency + 1.0) / 3.0
    return forward, 2.0 * collection_efficiency - forward


def _solid_angle_integral(func, theta_lo: float, theta_hi: float) -> float:
    if theta_hi <= theta_lo:
        return 0.0
    value, _ = integrate.dblquad(func, theta_lo, theta_hi, 0.0, 2.0 * math.pi, epsabs=1e-13, epsrel=1e-11)
    return value


def recoil_fraction(collection_efficiency: float, geometry: RecoilGeometry | str) -> float:
    """Fraction of the x-axis recoil witnessed by a detector collecting the given power share.

    f(theta) = (3/4)|cos theta| is the power per unit polar angle about the
    collector axis, spread evenly in azimuth, so dP/dOmega = f / (2 pi sin theta).
    Recoil along the measured axis is weighted by the squared projection of the
    photon direction: cos^2 theta with the axis along the collector, and
    sin^2 theta cos^2 phi with the axis in the imaging plane. The collector is a
    forward cone plus, above a quarter of the emitted power, a backward cone
    returned by the retro-mirror.
    """

    geometry = RecoilGeometry(geometry)
    if not 0.0 <= collection_efficiency <= 1.0:
        raise ParameterError(
            f"collection_efficiency must lie in [0, 1], got {collection_efficiency}",
            field="collection_efficiency",
        )
    if collection_efficiency == 0.0:
        return 0.0
    if collection_efficiency == 1.0:
        return 1.0

    projection = _projection(geometry)

    def weighted(phi: float, theta: float) -> float:
        # sin theta of the solid-angle element cancels the 1/sin theta of dP/dOmega
        return _emission(theta) / (2.0 * math.pi) * projection(phi, theta)

    forward, backward = _cone_shares(collection_efficiency)
    collected = _solid_angle_integral(weighted, 0.0, math.asin(forward)) + _solid_angle_integral(
        weighted, math.pi - math.asin(backward), math.pi
    )
    total = 2.0 * _solid_angle_integral(weighted, 0.0, math.pi / 2)
    return collected / total


def lamb_dicke_check(k_L: float, rms_x: float) -> LambDickeReport:
    parameter = abs(k_L * rms_x)
    if parameter < LAMB_DICKE_PASS:
        status = LambDickeStatus.PASS
    elif parameter < LAMB_DICKE_WARN:
        status = LambDickeStatus.WARN
    else:
        status = LambDickeStatus.FAIL
    return LambDickeReport(status=status, parameter=parameter)


__all__ = [
    "LAMB_DICKE_PASS",
    "LAMB_DICKE_WARN",
    "LambDickeReport",
    "LambDickeStatus",
    "OpticalProbe",
    "RecoilGeometry",
    "RecordIncrement",
    "generate_record_increment",
    "kappa_from_probe",
    "lamb_dicke_check",
    "photon_rate",
    "recoil_fraction",
    "required_k_tilde",
    "resolution",
]
