"""Tests for parameter models and nondimensionalisation."""

from __future__ import annotations

import math

import pytest

from levicool import ParameterError
from levicool.core import (
    HBAR,
    K_B,
    SimParams,
    TrapParams,
    ground_state_scale,
    normalize_params,
    thermal_budget,
    thermal_occupation,
    trap_params_from_sim,
    validated,
)

OMEGA_100HZ = 2 * math.pi * 100.0


def _trap(**overrides) -> TrapParams:
    fields = dict(
        mass=1e-17,
        omega=OMEGA_100HZ,
        temperature=1e-6,
        eta=0.2,
        k_tilde=1.0,
        gamma_fb=10.0,
    )
    fields.update(overrides)
    return TrapParams(**fields)


def test_all_couplings_off_normalize_to_zero():
    sp = normalize_params(_trap(k_tilde=0.0, gamma_fb=0.0, temperature=0.0), 1e-3, 1.0)
    assert sp.kappa_s == 0.0
    assert sp.gamma_s == 0.0
    assert sp.n_th == 0.0
    assert sp.chi == math.inf


def test_kappa_is_twice_k_tilde_exactly():
    for k_tilde in (1.0, 0.37, 12.5, 1e-3):
        sp = normalize_params(_trap(k_tilde=k_tilde), 1e-3, 1.0)
        assert sp.kappa_s / 2 == k_tilde


def test_chi_follows_efficiency_and_strength():
    sp = normalize_params(_trap(k_tilde=1.0, eta=0.2), 1e-3, 1.0)
    assert sp.kappa_s == 2.0
    assert sp.chi == pytest.approx(1.25)
    assert sp.chi == pytest.approx(1 / (4 * 0.2 * 1.0))
    assert sp.measurement_rate == pytest.approx(3.2)


@pytest.mark.parametrize(
    "field, value",
    [("eta", 1.5), ("mass", 0.0), ("mass", float("nan")), ("temperature", -1.0), ("k_tilde", -0.1)],
)
def test_invalid_trap_fields_name_the_field(field, value):
    fields = dict(mass=1e-17, omega=OMEGA_100HZ, temperature=0.0, eta=0.5, k_tilde=1.0, gamma_fb=0.0)
    fields[field] = value
    with pytest.raises(ParameterError) as excinfo:
        validated(TrapParams, **fields)
    assert excinfo.value.field == field


def test_normalize_rejects_bad_steps():
    with pytest.raises(ParameterError) as excinfo:
        normalize_params(_trap(), float("inf"), 1.0)
    assert excinfo.value.field == "dt"

    with pytest.raises(ParameterError):
        normalize_params(_trap(), 1e-2, 1e-3)


def test_thermal_occupation_reference_values():
    assert thermal_occupation(_trap(temperature=0.0)) == 0.0
    assert thermal_occupation(_trap(temperature=1e-6)) == pytest.approx(2.08e2, rel=1e-2)

    equal_energy = HBAR * OMEGA_100HZ / K_B
    assert thermal_occupation(_trap(temperature=equal_energy)) == pytest.approx(1 / (math.e - 1))


def test_thermal_occupation_matches_classical_limit():
    hot = 100 * HBAR * OMEGA_100HZ / K_B
    classical = K_B * hot / (HBAR * OMEGA_100HZ)
    assert thermal_occupation(_trap(temperature=hot)) == pytest.approx(classical, rel=1e-2)


def test_thermal_occupation_is_monotone():
    temperatures = [1e-9, 1e-8, 1e-7, 1e-6]
    values = [thermal_occupation(_trap(temperature=t)) for t in temperatures]
    assert values == sorted(values)
    assert len(set(values)) == len(values)

    omegas = [4 * OMEGA_100HZ, 2 * OMEGA_100HZ, OMEGA_100HZ]
    values = [thermal_occupation(_trap(omega=w)) for w in omegas]
    assert values[0] < values[1] < values[2]


def test_thermal_budget():
    assert thermal_budget(300.0, 0.0, OMEGA_100HZ) == 0.0
    unit_temperature = HBAR * OMEGA_100HZ / K_B
    assert thermal_budget(unit_temperature, 1.0, OMEGA_100HZ) == pytest.approx(1.0)
    assert thermal_budget(2e-3, 1e-6, OMEGA_100HZ) == pytest.approx(
        2 * thermal_budget(1e-3, 1e-6, OMEGA_100HZ)
    )
    with pytest.raises(ParameterError):
        thermal_budget(-1.0, 1.0, OMEGA_100HZ)


def test_ground_state_scale_of_default_particle():
    scale = ground_state_scale(_trap())
    assert 0.05e-9 < scale.x0 < 0.15e-9
    assert scale.x0 * scale.p0 == pytest.approx(HBAR / 2)


def test_round_trip_through_physical_units():
    tp = _trap(temperature=3e-7, k_tilde=0.75, gamma_fb=4.0, eta=0.3)
    sp = normalize_params(tp, 1e-3, 2.0)
    again = normalize_params(trap_params_from_sim(sp, mass=tp.mass, omega=tp.omega), sp.dt, sp.duration)
    assert again.kappa_s == sp.kappa_s
    assert again.eta == sp.eta
    assert again.gamma_s == sp.gamma_s
    assert again.n_th == pytest.approx(sp.n_th, rel=1e-12)


def test_sim_params_rejects_duration_shorter_than_step():
    with pytest.raises(ValueError):
        SimParams(kappa_s=1.0, eta=1.0, gamma_s=0.0, n_th=0.0, dt=0.1, duration=0.01)
