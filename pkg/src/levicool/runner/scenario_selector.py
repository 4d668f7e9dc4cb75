"""Scenario presets: default particle, physics inputs and run kind per scenario."""

from __future__ import annotations

from ..dynamics import SimulationMode
from .schemas import Scenario, ScenarioKind, ScenarioProfile

# Default particle: ~0.1 um diamond in a 100 Hz trap.
_PARTICLE = {"mass_kg": 1e-17, "omega_hz": 100.0}

_TRAJECTORY_KEYS = [
    "mass_kg",
    "omega_hz",
    "temperature_k",
    "eta",
    "k_tilde",
    "gamma_fb",
    "dt",
    "duration_periods",
]

_SCENARIO_PROFILES: dict[Scenario, ScenarioProfile] = {
    Scenario.FIG2: ScenarioProfile(
        scenario=Scenario.FIG2,
        kind=ScenarioKind.TRAJECTORY,
        mode=SimulationMode.ESTIMATE_ONLY,
        defaults={
            **_PARTICLE,
            "temperature_k": 1e-6,
            "eta": 1e-3,
            "k_tilde": 1.0,
            "gamma_fb": 0.0,
            "duration_periods": 1.0,
        },
    ),
    Scenario.FIG3: ScenarioProfile(
        scenario=Scenario.FIG3,
        kind=ScenarioKind.TRAJECTORY,
        mode=SimulationMode.MEASURE_ONLY,
        defaults={
            **_PARTICLE,
            "temperature_k": 0.0,
            "eta": 1e-3,
            "k_tilde": 1.0,
            "gamma_fb": 0.0,
            "duration_periods": 5.0,
        },
    ),
    Scenario.FIG4: ScenarioProfile(
        scenario=Scenario.FIG4,
        kind=ScenarioKind.CONDITIONAL_SWEEP,
        defaults={
            **_PARTICLE,
            "temperature_k": 0.0,
            "eta": 1.0,
            "k_tilde": 1.0,
            "gamma_fb": 0.0,
            "duration_periods": 1.0,
        },
        eta_list=[1.0, 0.15],
        k_tilde_range=(-2.0, 2.0, 81),
    ),
    Scenario.FIG5: ScenarioProfile(
        scenario=Scenario.FIG5,
        kind=ScenarioKind.TRAJECTORY,
        mode=SimulationMode.FULL_FEEDBACK,
        defaults={
            **_PARTICLE,
            "temperature_k": 1e-6,
            "eta": 0.1,
            "k_tilde": 1.0,
            "gamma_fb": 10.0,
            "duration_periods": 2.0,
        },
        include_actuation=True,
    ),
    Scenario.FIG6: ScenarioProfile(
        scenario=Scenario.FIG6,
        kind=ScenarioKind.LANDSCAPE,
        defaults={
            **_PARTICLE,
            "temperature_k": 0.0,
            "eta": 0.2,
            "k_tilde": 1.0,
            "gamma_fb": 10.0,
            "duration_periods": 1.0,
        },
        eta_list=[0.05, 0.1, 0.2, 0.5, 1.0],
        k_tilde_range=(-1.0, 1.0, 21),
    ),
    Scenario.CUSTOM: ScenarioProfile(
        scenario=Scenario.CUSTOM,
        kind=ScenarioKind.TRAJECTORY,
        required_keys=_TRAJECTORY_KEYS,
    ),
    Scenario.ORACLE_CHECK: ScenarioProfile(
        scenario=Scenario.ORACLE_CHECK,
        kind=ScenarioKind.ORACLE,
        defaults={
            **_PARTICLE,
            "temperature_k": 0.0,
            "eta": 1.0,
            "k_tilde": 0.1,
            "gamma_fb": 0.0,
            "dt": 1e-4,
            "duration_periods": 0.25,
        },
    ),
}


def get_scenario_profile(scenario: Scenario) -> ScenarioProfile:
    return _SCENARIO_PROFILES[Scenario(scenario)]


def resolve_mode(profile: ScenarioProfile, gamma_fb: float) -> SimulationMode | None:
    """Preset mode, or for custom runs feedback whenever a damping rate is given."""

    if profile.kind is not ScenarioKind.TRAJECTORY:
        return None
    if profile.mode is not None:
        return profile.mode
    return SimulationMode.FULL_FEEDBACK if gamma_fb > 0 else SimulationMode.ESTIMATE_ONLY


__all__ = ["get_scenario_profile", "resolve_mode"]
