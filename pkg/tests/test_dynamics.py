"""Pulse schedules, Floquet-frame gate extraction, and two-qubit coupling."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from floqspot.circuit import TWO_PI, FluxoniumParams
from floqspot.dynamics import (SQRT_ISWAP, PathInvalidError, PulseSchedule,
                               QubitSpec, SecondaryTone, Segment,
                               TwoQubitSystem, constant_schedule,
                               evolve_closed, gate_fidelity, manifold_root,
                               quasi_energy_vs_amp, rabi_rate,
                               two_qubit_interaction_picture)
from floqspot.floquet import floquet_solve_extended
from floqspot.noise import filter_weights


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment(0.0, 1.0, 1.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        Segment(5.0, 1.0, 1.0, 0.0, 2.0)
    with pytest.raises(ValueError):
        Segment(5.0, 1.0, 1.0, 2.0, 2.0, shape="spline")


@pytest.mark.parametrize("shape", ["cosine", "linear"])
def test_segment_phase_increment_closed_form(shape):
    seg = Segment(8.0, 0.5, 1.5, 2.0, 3.5, shape=shape)
    for t in (0.0, 2.7, 8.0):
        numeric, _ = quad(seg.freq, 0.0, t, epsabs=1e-12, epsrel=1e-12)
        assert seg.phase_increment(t) == pytest.approx(numeric, abs=1e-9)
    assert seg.amp(0.0) == pytest.approx(0.5)
    assert seg.amp(8.0) == pytest.approx(1.5)


def test_schedule_requires_continuity():
    a = Segment(2.0, 0.0, 1.0, 2.0, 2.0)
    b = Segment(2.0, 0.5, 0.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        PulseSchedule((a, b))
    with pytest.raises(ValueError):
        PulseSchedule(())


def test_schedule_phase_accumulates_across_segments():
    a = Segment(2.0, 0.0, 1.0, 2.0, 3.0)
    b = Segment(3.0, 1.0, 1.0, 3.0, 2.5)
    sched = PulseSchedule((a, b))
    assert sched.duration == pytest.approx(5.0)
    assert sched.drive_phase(5.0) == pytest.approx(
        a.phase_increment(2.0) + b.phase_increment(3.0))
    assert sched.amp(2.0) == pytest.approx(1.0)
    assert sched.end_freq == pytest.approx(2.5)


def test_secondary_tone_envelope():
    tone = SecondaryTone(0.02, 1.3, start=5.0, duration=20.0)
    assert tone.envelope(4.9) == 0.0
    assert tone.envelope(25.1) == 0.0
    assert tone.envelope(15.0) == pytest.approx(1.0)
    ts = np.linspace(5.01, 24.99, 101)
    env = np.array([tone.envelope(t) for t in ts])
    assert np.all(env >= 0.0) and np.all(env <= 1.0)
    with pytest.raises(ValueError):
        SecondaryTone(0.02, 1.3, start=0.0, duration=10.0, ramp_fraction=0.7)


def test_gate_fidelity_gauge_freedom():
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    assert gate_fidelity(x, x) == pytest.approx(1.0, abs=1e-12)
    # Global phase and Z-conjugation gauge leave the fidelity unchanged.
    assert gate_fidelity(np.exp(0.3j) * x, x) == pytest.approx(1.0, abs=1e-9)
    z = np.diag([np.exp(0.7j), np.exp(-0.7j)])
    assert gate_fidelity(z @ x @ z.conj().T, x) == pytest.approx(1.0,
                                                                 abs=1e-9)
    assert gate_fidelity(np.eye(2, dtype=complex), x) == pytest.approx(
        1.0 / 3.0, abs=1e-9)
    # Two-qubit local Z freedom.
    zl = np.array([0.0, 0.0, 1.0, 1.0])
    zr = np.array([0.0, 1.0, 0.0, 1.0])
    pre = np.diag(np.exp(1j * (0.4 * zl - 0.9 * zr)))
    post = np.diag(np.exp(1j * (-0.2 * zl + 1.3 * zr)))
    assert gate_fidelity(pre @ SQRT_ISWAP @ post, SQRT_ISWAP) == \
        pytest.approx(1.0, abs=1e-7)


def test_rabi_rate_formula(tl_gate):
    sol = floquet_solve_extended(tl_gate)
    w = filter_weights(sol)
    k0 = (len(w.g_plus) - 1) // 2
    assert rabi_rate(tl_gate, 0.012, sol) == pytest.approx(
        0.012 * abs(w.g_plus[k0]), rel=1e-12)


def test_unperturbed_evolution_is_frame_identity(tl_gate):
    sched = constant_schedule(tl_gate, 10.0)
    res = evolve_closed(tl_gate, sched, n_report=5)
    assert gate_fidelity(res.unitary, np.eye(2, dtype=complex)) > 1 - 1e-8
    assert res.defect < 1e-9
    # The tracked trajectory starts in mode 0 and stays there.
    assert np.all(res.populations[:, 0] > 1 - 1e-8)


def test_evolve_requires_matching_start(tl_gate):
    sched = constant_schedule(tl_gate.replace(amp=tl_gate.amp * 2.0), 10.0)
    with pytest.raises(ValueError):
        evolve_closed(tl_gate, sched)


def test_quasi_energy_branch_continuation(tl_gate):
    amps = np.linspace(tl_gate.amp, 1.6 * tl_gate.amp, 7)
    eps = quasi_energy_vs_amp(tl_gate, amps)
    # Continued branch: no Brillouin-fold jumps between neighboring points.
    assert np.max(np.abs(np.diff(eps))) < 0.05 * tl_gate.omega_d


def test_manifold_root_reports_cut(spec_pi):
    with pytest.raises(PathInvalidError):
        manifold_root(spec_pi, 0.02 * TWO_PI, TWO_PI * 0.52, 0.55,
                      rel_window=0.05)


@pytest.fixture(scope="module")
def fig_pair():
    left = QubitSpec(params=FluxoniumParams(e_c=1.2, e_j=6.0, e_l=0.95),
                     phi_dc=TWO_PI * 0.529, phi_ac=TWO_PI * 0.05, f_d=0.91)
    right = QubitSpec(params=FluxoniumParams(e_c=1.0, e_j=4.1, e_l=0.7),
                      phi_dc=TWO_PI * 0.520, phi_ac=TWO_PI * 0.06,
                      f_d=0.4153048049458353)
    return TwoQubitSystem(left=left, right=right, j_coupling=0.0048)


def test_two_qubit_system_validation(fig_pair):
    with pytest.raises(ValueError):
        TwoQubitSystem(left=fig_pair.left, right=fig_pair.right,
                       j_coupling=-1e-3)


def test_interaction_picture_term_reconstruction(fig_pair):
    # The sideband decomposition must reproduce the exact interaction-
    # picture flip-flop element when all harmonics are kept.
    info = two_qubit_interaction_picture(fig_pair, k_window=10 ** 6)
    j_ang = TWO_PI * fig_pair.j_coupling

    def weights_of(side):
        _, tl = side.reduce()
        sol = floquet_solve_extended(tl)
        return sol, filter_weights(sol)

    sol_l, _ = weights_of(fig_pair.left)
    sol_r, _ = weights_of(fig_pair.right)
    sz = np.diag([1.0, -1.0])
    for t in (0.0, 0.37, 1.84):
        raising = np.conj(sol_l.mode(1, t)) @ sz @ sol_l.mode(0, t)
        lowering = np.conj(sol_r.mode(0, t)) @ sz @ sol_r.mode(1, t)
        direct = (j_ang * raising * np.exp(1j * sol_l.eps01 * t) *
                  lowering * np.exp(-1j * sol_r.eps01 * t))
        series = sum(row["coeff"] * np.exp(1j * row["freq"] * t)
                     for row in info["terms"])
        assert abs(series - direct) < 1e-10 * j_ang
    # Consistency of the reported quantities.
    assert info["zz_coeff"] == pytest.approx(
        j_ang * info["g0_phi_left"] * info["g0_phi_right"], rel=1e-12)
    assert info["detuning_bare"] == pytest.approx(
        info["eps01_left"] - info["eps01_right"], rel=1e-12)
    if "swap_period_ns" in info:
        assert info["swap_period_ns"] == pytest.approx(
            math.pi / abs(info["xi"]), rel=1e-12)
        assert info["tau_sqrt_iswap_ns"] == pytest.approx(
            info["swap_period_ns"] / 4.0, rel=1e-12)
