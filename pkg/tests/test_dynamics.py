"""Tests for the conditional moment integrator, estimator and feedback loop."""

from __future__ import annotations

import math

import numpy as np
import pytest

from levicool import IntegratorBlowup, MeasurementOff
from levicool.core import SimParams, TrapParams
from levicool.dynamics import (
    GaussianState,
    SimulationMode,
    conditional_step,
    estimator_step,
    initial_estimate,
    initial_true_state,
    run_simulation,
    simulate_trajectory,
    variance_derivatives,
)
from levicool.measurement import generate_record_increment
from levicool.steady import conditional_steady_state


def _sim(**overrides) -> SimParams:
    fields = dict(kappa_s=2.0, eta=0.2, gamma_s=0.0, n_th=5.0, dt=1e-3, duration=2.0)
    fields.update(overrides)
    return SimParams(**fields)


def _integrate(state: GaussianState, sp: SimParams, steps: int, **kwargs) -> GaussianState:
    for _ in range(steps):
        state = conditional_step(state, sp, 0.0, **kwargs)
    return state


def test_free_rotation_without_measurement():
    sp = _sim(kappa_s=0.0, eta=1.0, dt=1e-4, duration=math.pi / 2)
    start = GaussianState(1.0, 0.0, 0.5, 0.5, 0.0)
    end = _integrate(start, sp, round(sp.duration / sp.dt))
    assert end.mean_x == pytest.approx(0.0, abs=1e-3)
    assert end.mean_p == pytest.approx(-1.0, abs=1e-3)
    assert (end.var_x, end.var_p, end.cov_xp) == (0.5, 0.5, 0.0)


@pytest.mark.parametrize("eta, k_tilde", [(0.2, 1.0), (1.0, 0.1), (0.05, 10.0), (0.6, 3.0)])
def test_conditional_steady_state_is_a_fixed_point(eta, k_tilde):
    cond = conditional_steady_state(eta, k_tilde)
    state = GaussianState(0.0, 0.0, cond.v_x_tilde / 2, cond.v_p_tilde / 2, cond.c_xp_tilde / 2)
    sp = _sim(eta=eta, kappa_s=2 * k_tilde)
    for derivative in variance_derivatives(state, sp):
        assert derivative == pytest.approx(0.0, abs=1e-9)


def test_self_feedback_damps_the_means():
    sp = _sim(kappa_s=0.0, gamma_s=10.0, dt=1e-4)
    end = _integrate(GaussianState(1.0, 0.0, 0.5, 0.5, 0.0), sp, 10_000, feedback=True)
    assert math.hypot(end.mean_x, end.mean_p) <= math.exp(-9)


def test_actuation_is_added_as_a_rate():
    sp = _sim(kappa_s=0.0, dt=1e-2)
    state = GaussianState(0.0, 0.0, 0.5, 0.5, 0.0)
    moved = conditional_step(state, sp, 0.0, actuation=(3.0, -2.0))
    assert moved.mean_x == pytest.approx(0.03)
    assert moved.mean_p == pytest.approx(-0.02)


def test_heisenberg_bound_holds_with_perfect_detection():
    sp = _sim(eta=1.0, kappa_s=4.0, n_th=2.0, dt=2e-3, duration=4 * math.pi)
    for mode in (SimulationMode.MEASURE_ONLY, SimulationMode.ESTIMATE_ONLY):
        out = run_simulation(sp, seed=3, mode=mode)
        for states in (out.true_states, out.est_states):
            if np.isnan(states).all():
                continue
            product = states[:, 2] * states[:, 3] - states[:, 4] ** 2
            assert product.min() >= 0.25 * (1 - 1e-9)


def test_variances_do_not_depend_on_feedback():
    sp = _sim(eta=0.1, gamma_s=10.0, n_th=50.0, dt=2e-3, duration=2 * math.pi)
    measured = run_simulation(sp, seed=11, mode=SimulationMode.MEASURE_ONLY)
    damped = run_simulation(sp, seed=11, mode=SimulationMode.FULL_FEEDBACK)
    assert np.array_equal(measured.true_states[:, 2:], damped.true_states[:, 2:])
    assert not np.array_equal(measured.true_states[:, :2], damped.true_states[:, :2])


def test_matched_estimator_tracks_true_state_exactly():
    sp = _sim(eta=1.0, kappa_s=1.0, dt=1e-3)
    rng = np.random.default_rng(5)
    true = GaussianState(0.8, -0.4, 0.5, 0.5, 0.0)
    est = true
    for dW in rng.standard_normal(3000) * math.sqrt(sp.dt):
        inc = generate_record_increment(true.mean_x, sp, dW)
        true = conditional_step(true, sp, dW)
        est = estimator_step(est, inc, sp)
        assert est.mean_x == pytest.approx(true.mean_x, abs=1e-9)
        assert est.mean_p == pytest.approx(true.mean_p, abs=1e-9)
    assert est.var_x == true.var_x


def test_innovation_has_zero_mean_for_a_matched_estimate():
    sp = _sim(eta=0.5, kappa_s=2.0, dt=1e-3)
    rng = np.random.default_rng(9)
    state = GaussianState(0.3, 0.1, 0.5, 0.5, 0.0)
    dW = rng.standard_normal(20_000) * math.sqrt(sp.dt)
    innovations = np.array(
        [
            math.sqrt(sp.measurement_rate) * (generate_record_increment(state.mean_x, sp, w).dI - state.mean_x * sp.dt)
            for w in dW
        ]
    )
    assert abs(innovations.mean()) < 4 * innovations.std(ddof=1) / math.sqrt(len(innovations))


def test_estimator_variances_forget_their_initialisation():
    sp = _sim(eta=0.2, kappa_s=2.0, n_th=5.0, dt=1e-3)
    cond = conditional_steady_state(0.2, 1.0)
    steps = round(3 * 2 * math.pi / sp.dt)
    thermal = initial_estimate(sp)
    inflated = GaussianState(0.0, 0.0, 10 * thermal.var_x, 10 * thermal.var_p, 0.0)
    for start in (thermal, inflated):
        end = _integrate(start, sp, steps)
        assert 2 * end.var_x == pytest.approx(cond.v_x_tilde, abs=1e-6)
        assert 2 * end.var_p == pytest.approx(cond.v_p_tilde, abs=1e-6)
        assert 2 * end.cov_xp == pytest.approx(cond.c_xp_tilde, abs=1e-6)


def test_initial_conditions():
    sp = _sim(n_th=8.0)
    true = initial_true_state(sp, math.pi / 3)
    assert (true.var_x, true.var_p, true.cov_xp) == (0.5, 0.5, 0.0)
    assert true.mean_x**2 + true.mean_p**2 == pytest.approx(16.0)
    assert true.mean_p < 0
    est = initial_estimate(sp)
    assert (est.mean_x, est.mean_p, est.var_x, est.var_p) == (0.0, 0.0, 8.5, 8.5)


def test_same_seed_is_bit_identical():
    tp = TrapParams(mass=1e-17, omega=2 * math.pi * 100, temperature=1e-6, eta=0.1, k_tilde=1.0, gamma_fb=10.0)
    first = simulate_trajectory(tp, 2e-3, 2.0, 42, SimulationMode.FULL_FEEDBACK)
    second = simulate_trajectory(tp, 2e-3, 2.0, 42, "FullFeedback")
    for name in ("times", "true_states", "est_states", "record", "actuation"):
        assert np.array_equal(getattr(first, name), getattr(second, name), equal_nan=True)
    other = simulate_trajectory(tp, 2e-3, 2.0, 43, SimulationMode.FULL_FEEDBACK)
    assert not np.array_equal(first.true_states, other.true_states)


def test_trajectory_layout():
    sp = _sim(dt=1e-2, duration=1.0)
    out = run_simulation(sp, seed=1, mode=SimulationMode.ESTIMATE_ONLY)
    assert len(out) == 101
    assert out.true_states.shape == out.est_states.shape == (101, 5)
    assert out.record.shape == out.actuation.shape == (101, 2)
    assert np.allclose(np.diff(out.times), sp.dt)
    assert np.isnan(out.record[0]).all()
    assert not np.isnan(out.record[1:]).any()
    assert out.record_increment(5).dt == sp.dt
    assert out.true_state(0).var_x == 0.5
    assert out.params_echo == sp
    assert out.phonon_series()[0] == pytest.approx(out.true_state(0).energy - 0.5)


def test_measure_only_has_no_estimate():
    out = run_simulation(_sim(dt=1e-2), seed=2, mode=SimulationMode.MEASURE_ONLY)
    assert np.isnan(out.est_states).all()


def test_unconditioned_means_rotate_rigidly():
    sp = _sim(eta=0.3, kappa_s=2.0, n_th=10.0, dt=1e-4, duration=2 * math.pi)
    out = run_simulation(sp, seed=4, mode=SimulationMode.UNCONDITIONED)
    radius = out.true_states[:, 0] ** 2 + out.true_states[:, 1] ** 2
    assert radius == pytest.approx(np.full_like(radius, radius[0]), rel=1e-3)
    assert np.isnan(out.record).all()
    assert out.true_states[-1, 2] + out.true_states[-1, 3] > 1.0 + 2.0 * sp.duration * 0.9


def test_modes_requiring_a_record_refuse_zero_efficiency():
    sp = _sim(eta=0.0)
    with pytest.raises(MeasurementOff):
        run_simulation(sp, seed=0, mode=SimulationMode.ESTIMATE_ONLY)


def test_oversized_step_reports_step_index():
    sp = _sim(eta=1.0, kappa_s=2.0, n_th=1e4, dt=0.1, duration=1.0)
    with pytest.raises(IntegratorBlowup) as excinfo:
        run_simulation(sp, seed=0, mode=SimulationMode.ESTIMATE_ONLY)
    assert excinfo.value.context["step"] == 1
    assert excinfo.value.exit_code == 3


def test_dt_convergence():
    duration = 2.0
    dts = (1e-3, 5e-4, 2.5e-4)
    fine_steps = round(duration / dts[-1])
    fine = np.random.default_rng(21).standard_normal(fine_steps) * math.sqrt(dts[-1])

    endpoints = []
    for level, dt in enumerate(dts):
        block = 2 ** (len(dts) - 1 - level)
        increments = fine.reshape(-1, block).sum(axis=1)
        sp = _sim(eta=0.2, kappa_s=2.0, dt=dt, duration=duration)
        state = GaussianState(1.0, 0.5, 0.5, 0.5, 0.0)
        for dW in increments:
            state = conditional_step(state, sp, float(dW))
        endpoints.append(np.array(state.as_tuple()))

    coarse_gap = np.abs(endpoints[0] - endpoints[1])
    fine_gap = np.abs(endpoints[1] - endpoints[2])
    assert 1.5 < coarse_gap[2] / fine_gap[2] < 3.0
    assert 1.5 < coarse_gap[3] / fine_gap[3] < 3.0
    assert coarse_gap[:2].max() < 20 * dts[0]
    assert fine_gap[:2].max() < 20 * dts[1]


def test_variance_step_departs_from_literal_euler_at_second_order():
    state = GaussianState(0.0, 0.0, 2.0, 1.0, 0.3)
    gaps = []
    for dt in (1e-3, 5e-4):
        sp = _sim(kappa_s=1.0, eta=0.5, dt=dt)
        d_vx, d_vp, d_cxp = variance_derivatives(state, sp)
        stepped = conditional_step(state, sp, 0.0)
        assert stepped.var_x == pytest.approx(state.var_x + dt * d_vx, abs=1e-15)
        assert stepped.cov_xp == pytest.approx(state.cov_xp + dt * d_cxp, abs=1e-15)
        gap = abs(stepped.var_p - (state.var_p + dt * d_vp))
        assert 0.0 < gap < 20 * dt**2
        gaps.append(gap)
    assert 3.5 < gaps[0] / gaps[1] < 4.5
