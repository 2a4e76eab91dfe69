"""End-to-end acceptance checks with stated tolerances and runtime budgets.

One test per guaranteed behaviour, in order: static coherence table, filter
weight conservation, solver cross-validation, dispersion derivatives, sweet
manifold asymptotes and coherence, gap scaling laws, single-qubit gates,
two-qubit resonant gate, analytic limit reductions, and thread determinism.
Each test prints a single PASS line with the measured numbers and asserts
its wall-clock budget.  Reference coherence values are for the
(E_C, E_J, E_L) = (0.5, 4.0, 1.3) GHz circuit with the default loss model.
"""

import json
import math
import time

import numpy as np
from scipy.special import jn_zeros, jv

from floqspot.circuit import (TWO_PI, FluxoniumParams, TwoLevelParams,
                              diagonalize_fluxonium, two_level_reduce)
from floqspot.cli import main as cli_main
from floqspot.dynamics import (RAMP_FRACTION, OpenSystemConfig, QubitSpec,
                               TwoQubitSystem, adiabatic_map, calibrate_gate,
                               manifold_point, manifold_root,
                               measure_swap_period, phase_gate,
                               plan_resonant_gate_point, rabi_rate,
                               rabi_transfer, two_qubit_fidelity_map,
                               two_qubit_interaction_picture,
                               two_qubit_open_report)
from floqspot.floquet import (floquet_solve_extended, floquet_solve_monodromy,
                              fold_quasi_energy)
from floqspot.noise import NoiseModel, filter_weights, static_rates
from floqspot.sweetspot import (dispersion_amp, dispersion_bias, gap_strong,
                                gap_weak, general_sweet_condition,
                                limit_frequency_modulation,
                                limit_spin_locking, measure_fwhm, measure_gap,
                                trace_dc_manifold)

E_C, E_J, E_L = 0.5, 4.0, 1.3


def _reference_circuit():
    params = FluxoniumParams(e_c=E_C, e_j=E_J, e_l=E_L)
    spec_pi = diagonalize_fluxonium(params, math.pi)
    model = NoiseModel.from_loss_tangents(spec_pi.phi_ge, E_C, E_L)
    return params, spec_pi, model


def _richardson_slope(fn, x0, h):
    def central(step):
        return (fn(x0 + step) - fn(x0 - step)) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def test_criterion_01_static_coherence_table():
    t0 = time.perf_counter()
    params, spec_pi, model = _reference_circuit()
    away = static_rates(diagonalize_fluxonium(params, TWO_PI * 0.52), model)
    assert abs(away.t1 - 770.0) <= 0.25 * 770.0
    assert abs(away.t_phi - 0.88) <= 0.25 * 0.88
    sweet = static_rates(spec_pi, model)
    assert abs(sweet.t1 - 360.0) <= 0.25 * 360.0
    # First-order 1/f flux dephasing vanishes identically at half flux.
    assert sweet.gamma_phi == 0.0
    assert math.isinf(sweet.t_phi)
    wall = time.perf_counter() - t0
    assert wall < 10.0
    print(f"CRITERION 1 PASS: delta phi/2pi = 0.02 gives T1 = {away.t1:.1f} us"
          f" (target 770 +-25%) and Tphi = {away.t_phi:.3f} us (target 0.88"
          f" +-25%); half flux gives T1 = {sweet.t1:.1f} us (target 360 +-25%)"
          f" and zero first-order 1/f dephasing; {wall:.2f} s < 10 s")


def test_criterion_02_filter_weight_conservation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260825)
    worst = 0.0
    for _ in range(500):
        omega_ge = rng.uniform(0.5, 5.0)
        theta = rng.uniform(0.0, 0.5 * math.pi)
        tl = TwoLevelParams(delta=omega_ge * math.sin(theta),
                            amp=rng.uniform(0.0, 5.0) * omega_ge,
                            bias=omega_ge * math.cos(theta),
                            omega_d=rng.uniform(0.4, 4.0))
        sol = floquet_solve_extended(tl)
        while sol.degenerate:
            tl = tl.replace(omega_d=tl.omega_d * 1.000137)
            sol = floquet_solve_extended(tl)
        worst = max(worst, abs(filter_weights(sol).conservation_sum - 2.0))
    assert worst < 1e-10
    wall = time.perf_counter() - t0
    assert wall < 60.0
    print(f"CRITERION 2 PASS: |W+ + W- + Wphi - 2| <= {worst:.2e} over 500"
          f" random driven points with A/omega_ge in [0, 5] (tolerance 1e-10);"
          f" {wall:.1f} s < 60 s")


def test_criterion_03_solver_route_agreement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst_rel = 0.0
    checked = 0
    while checked < 100:
        tl = TwoLevelParams(delta=rng.uniform(0.3, 2.2),
                            amp=rng.uniform(0.0, 4.0),
                            bias=rng.uniform(0.0, 2.5),
                            omega_d=rng.uniform(0.7, 3.5))
        ext = floquet_solve_extended(tl)
        # Keep the comparison in general position: away from fold
        # degeneracies the relative difference is well defined.
        if ext.degenerate or ext.gap_circle() < 1e-3 * tl.omega_d:
            continue
        mono = floquet_solve_monodromy(tl)
        worst_rel = max(worst_rel, abs(mono.eps01 - ext.eps01) / ext.eps01)
        checked += 1
    assert worst_rel < 1e-9
    # Longitudinal drive (delta = 0): quasi-energies are exactly +-B/2 and
    # the mode harmonics are Bessel functions J_k(A/omega_d).
    worst_eps = 0.0
    worst_mode = 0.0
    checked = 0
    while checked < 20:
        omega_d = rng.uniform(0.6, 3.0)
        bias = rng.uniform(0.2, 3.0)
        amp = rng.uniform(0.1, 4.0) * omega_d
        tl = TwoLevelParams(delta=0.0, amp=amp, bias=bias, omega_d=omega_d)
        exact = 2.0 * abs(fold_quasi_energy(bias / 2.0, omega_d))
        if exact < 0.05 * omega_d or exact > 0.95 * omega_d:
            continue
        sol = floquet_solve_extended(tl)
        if sol.degenerate:
            continue
        worst_eps = max(worst_eps, abs(sol.eps01 - exact) / exact)
        k0 = sol.truncation_k
        z = amp / omega_d
        for j, sigma in enumerate(sol.static_assignment):
            u = sol.fourier_modes[j]
            live = 1 - sigma
            # Folding the exact quasi-energy s B/2 by n omega_d shifts the
            # harmonic ladder of the mode by n.
            sign = 1.0 if sigma == 1 else -1.0
            n_shift = round((sign * bias / 2.0 - sol.eps[j]) / omega_d)
            for k in range(-5, 6):
                worst_mode = max(worst_mode,
                                 abs(abs(u[live, k0 + k])
                                     - abs(jv(k - n_shift, z))))
        checked += 1
    assert worst_eps < 1e-10
    assert worst_mode < 1e-10
    wall = time.perf_counter() - t0
    assert wall < 120.0
    print(f"CRITERION 3 PASS: extended vs monodromy quasi-energy splitting"
          f" agrees to {worst_rel:.2e} relative on 100 random points"
          f" (tolerance 1e-9); longitudinal-drive solutions match the exact"
          f" +-B/2 / Bessel form to {max(worst_eps, worst_mode):.2e}"
          f" (tolerance 1e-10); {wall:.1f} s < 120 s")


def test_criterion_04_dispersion_matches_finite_difference():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = 0.0
    checked = 0
    while checked < 50:
        omega_ge = rng.uniform(0.7, 3.0)
        theta = rng.uniform(0.15, 1.42)
        tl = TwoLevelParams(delta=omega_ge * math.sin(theta),
                            amp=rng.uniform(0.05, 3.0) * omega_ge,
                            bias=omega_ge * math.cos(theta),
                            omega_d=rng.uniform(0.5, 3.5))
        sol = floquet_solve_extended(tl)
        # A margin from the fold boundary keeps the finite-difference
        # stencil on a single quasi-energy branch.
        if sol.degenerate or sol.gap_circle() < 0.02 * tl.omega_d:
            continue
        fd_bias = _richardson_slope(
            lambda b: floquet_solve_extended(tl.replace(bias=b)).eps01,
            tl.bias, 1e-3)
        fd_amp = _richardson_slope(
            lambda a: floquet_solve_extended(tl.replace(amp=a)).eps01,
            tl.amp, 1e-3)
        ana_bias = dispersion_bias(tl, sol)
        ana_amp = dispersion_amp(tl, sol)
        rel_bias = abs(fd_bias - ana_bias) / max(abs(ana_bias), 1e-3)
        rel_amp = abs(fd_amp - ana_amp) / max(abs(ana_amp), 1e-3)
        worst = max(worst, rel_bias, rel_amp)
        checked += 1
    assert worst < 1e-6
    wall = time.perf_counter() - t0
    assert wall < 60.0
    print(f"CRITERION 4 PASS: bias and amplitude quasi-energy dispersions"
          f" match central finite differences to {worst:.2e} relative on 50"
          f" random points (tolerance 1e-6); {wall:.1f} s < 60 s")


def test_criterion_05_manifold_asymptotes_and_coherence():
    t0 = time.perf_counter()
    params, spec_pi, model = _reference_circuit()
    phi_dc = TWO_PI * 0.52
    ac_lo, ac_hi = TWO_PI * 1e-4, TWO_PI * 0.25
    curves = trace_dc_manifold(spec_pi, phi_dc, (0.1, 0.8), (ac_lo, ac_hi),
                               n_f=200, n_ac=200, model=model,
                               attach_rates=True, threads=8)
    assert curves
    tl0 = two_level_reduce(spec_pi, 0.0, phi_dc, TWO_PI)
    omega_ghz = tl0.omega_ge / TWO_PI
    b_ghz = abs(tl0.bias) / TWO_PI

    def harmonic_rel(f_ghz, ref_ghz):
        m = max(1, round(ref_ghz / f_ghz))
        return abs(f_ghz - ref_ghz / m) * m / ref_ghz, m

    pts = [p for curve in curves for p in curve]
    bottom = [p for p in pts if p.phi_ac <= ac_lo * (1.0 + 1e-9)]
    top = [p for p in pts if p.phi_ac >= ac_hi * (1.0 - 1e-9)]
    assert len(bottom) >= 3 and len(top) >= 1
    weak_orders = set()
    worst_weak = 0.0
    for p in bottom:
        rel, m = harmonic_rel(p.f_d, omega_ghz)
        assert rel < 1e-3
        worst_weak = max(worst_weak, rel)
        weak_orders.add(m)
    assert len(weak_orders) >= 3
    worst_strong = 0.0
    for p in top:
        rel, m = harmonic_rel(p.f_d, b_ghz)
        assert rel < 1e-3
        worst_strong = max(worst_strong, rel)
    coherent = [p for p in pts if p.rates is not None
                and p.rates.t_phi > 1000.0 and p.rates.t1 > 300.0]
    assert coherent
    wall = time.perf_counter() - t0
    assert wall < 600.0
    print(f"CRITERION 5 PASS: {len(curves)} manifold curves on a 200x200"
          f" window; weak-drive rows reach omega_ge/m (orders"
          f" {sorted(weak_orders)}) within {worst_weak:.1e} and strong-drive"
          f" rows reach B/m within {worst_strong:.1e} (tolerance 1e-3);"
          f" {len(coherent)} sweet points with Tphi > 1000 us and"
          f" T1 > 300 us; {wall:.0f} s < 600 s on 8 threads")


def test_criterion_06_gap_scaling_laws():
    t0 = time.perf_counter()
    params, spec_pi, model = _reference_circuit()
    phi_dc = TWO_PI * 0.52
    probe = two_level_reduce(spec_pi, 0.0, phi_dc, TWO_PI)
    omega_ge = probe.omega_ge
    # Drive amplitude fixed at A/omega_ge = 0.1 for the weak-drive laws.
    phi_ac = 0.1 * omega_ge / (TWO_PI * E_L * spec_pi.phi_ge)
    weak_rels = []
    for m in (1, 2, 3):
        f_c = omega_ge / m / TWO_PI
        tl = two_level_reduce(spec_pi, phi_ac, phi_dc, TWO_PI * f_c)
        est = gap_weak(m, tl)
        gap_meas, _ = measure_gap(tl, (0.97 * f_c, 1.03 * f_c), n_scan=61)
        rel = abs(gap_meas - est.gap) / est.gap
        assert rel < 0.05
        weak_rels.append(rel)
    strong_rels = []
    bias = 6.0
    for m in (1, 2, 3):
        omega_d = bias / m
        tl = TwoLevelParams(delta=0.08 * omega_d, amp=omega_d, bias=bias,
                            omega_d=omega_d)
        est = gap_strong(m, tl)
        f_c = omega_d / TWO_PI
        gap_meas, _ = measure_gap(tl, (0.97 * f_c, 1.03 * f_c), n_scan=61)
        rel = abs(gap_meas - est.gap) / est.gap
        assert rel < 0.05
        strong_rels.append(rel)
    # The m = 1 gap closes at the first zero of J_1(2A/omega_d).
    omega_d = 6.0
    tl_cut = TwoLevelParams(delta=0.08 * omega_d, amp=omega_d, bias=bias,
                            omega_d=omega_d)
    a_star = float(jn_zeros(1, 1)[0]) * omega_d / 2.0
    amps = np.linspace(0.96 * a_star, 1.04 * a_star, 13)
    f_c = omega_d / TWO_PI
    gaps = [measure_gap(tl_cut.replace(amp=float(a)),
                        (0.97 * f_c, 1.03 * f_c), n_scan=41)[0] for a in amps]
    i_min = int(np.argmin(gaps))
    assert abs(float(amps[i_min]) - a_star) <= float(amps[1] - amps[0])
    fwhm_rels = []
    for m in (1, 2):
        f_c = omega_ge / m / TWO_PI
        tl = two_level_reduce(spec_pi, phi_ac, phi_dc, TWO_PI * f_c)
        est = gap_weak(m, tl)
        width, _ = measure_fwhm(
            tl, (f_c - 4.0 * est.fwhm, f_c + 4.0 * est.fwhm), n_scan=241)
        rel = abs(width - est.fwhm) / est.fwhm
        assert rel < 0.20
        fwhm_rels.append(rel)
    wall = time.perf_counter() - t0
    assert wall < 300.0
    print(f"CRITERION 6 PASS: weak-drive gaps (m = 1..3) within"
          f" {max(weak_rels):.1%} and strong-drive Bessel gaps within"
          f" {max(strong_rels):.1%} of the closed forms (tolerance 5%); gap"
          f" closes at the first J_1 zero within one grid step; dispersion-dip"
          f" FWHm within {max(fwhm_rels):.1%} of 2*gap/(sqrt(3) m) (tolerance"
          f" 20%); {wall:.0f} s < 300 s")


def test_criterion_07_single_qubit_gates_and_mapping():
    t0 = time.perf_counter()
    params, spec_pi, model = _reference_circuit()
    phi_dc = TWO_PI * 0.52
    phi_ac = TWO_PI * 0.02
    f_star = manifold_root(spec_pi, phi_ac, phi_dc, 0.3564)
    tl = two_level_reduce(spec_pi, phi_ac, phi_dc, TWO_PI * f_star)
    fids = {}
    for target in ("x", "sqrt-x"):
        fids[target] = calibrate_gate(tl, target).fidelity
        assert fids[target] >= 0.999
    # Phase gates from a calibrated amplitude excursion.
    delta_a = TWO_PI * E_L * (TWO_PI * 0.002) * spec_pi.phi_ge
    for target in ("s", "t"):
        fids[target] = phase_gate(tl, target, delta_a).fidelity
        assert fids[target] >= 0.999
    # Chevron: full population transfer only on quasi-energy resonance.
    sol = floquet_solve_extended(tl)
    w = filter_weights(sol)
    d_rabi = 0.02 * sol.eps01 / abs(w.g_plus[(len(w.g_plus) - 1) // 2])
    omega_r = rabi_rate(tl, d_rabi, sol)
    duration = math.pi / (omega_r * (1.0 - RAMP_FRACTION))
    peak = {}
    for off in (-4.0, -1.0, 0.0, 1.0, 4.0):
        res = rabi_transfer(tl, d_rabi, sol.eps01 + off * omega_r, duration,
                            n_report=257)
        peak[off] = float(res.populations[:, 1].max())
    assert peak[0.0] >= 0.99
    assert peak[-1.0] <= 0.75 and peak[1.0] <= 0.75
    assert peak[-4.0] <= 0.30 and peak[4.0] <= 0.30
    # Adiabatic mapping of Floquet modes onto static eigenstates at a
    # located sweet spot; quality grows monotonically with the ramp time.
    f_ad = manifold_root(spec_pi, phi_ac, TWO_PI * 0.51, 0.3339)
    tl_ad = two_level_reduce(spec_pi, phi_ac, TWO_PI * 0.51, TWO_PI * f_ad)
    fid_30 = adiabatic_map(tl_ad, 30.0).fidelity
    assert fid_30 >= 0.99
    fid_ramp = [adiabatic_map(tl_ad, tr).fidelity
                for tr in (100.0, 140.0, 180.0)]
    assert fid_ramp[0] >= fid_30 - 1e-12
    assert fid_ramp[1] >= fid_ramp[0] - 1e-12
    assert fid_ramp[2] >= fid_ramp[1] - 1e-12
    assert fid_ramp[2] >= 0.9999
    wall = time.perf_counter() - t0
    assert wall < 300.0
    print(f"CRITERION 7 PASS: gate fidelities x = {fids['x']:.6f},"
          f" sqrt-x = {fids['sqrt-x']:.6f}, s = {fids['s']:.6f},"
          f" t = {fids['t']:.6f} (threshold 0.999); chevron peak transfer"
          f" {peak[0.0]:.4f} on resonance vs <= {max(peak[-4.0], peak[4.0]):.3f}"
          f" at +-4 Rabi detunings; adiabatic map {fid_30:.5f} at 30 ns"
          f" (threshold 0.99) rising monotonically to {fid_ramp[-1]:.7f} at"
          f" 180 ns; {wall:.0f} s < 300 s")


def test_criterion_08_two_qubit_resonant_gate():
    t0 = time.perf_counter()
    params_l = FluxoniumParams(1.2, 6.0, 0.95)
    params_r = FluxoniumParams(1.0, 4.1, 0.7)
    left = QubitSpec(params_l, TWO_PI * 0.529, TWO_PI * 0.05, 0.91)
    right = QubitSpec(params_r, TWO_PI * 0.520, TWO_PI * 0.06,
                      0.4153048049458353)
    sys0 = TwoQubitSystem(left, right, 0.0048)
    planned = plan_resonant_gate_point(sys0, TWO_PI * 0.015, TWO_PI * 0.12)
    info = two_qubit_interaction_picture(planned)
    j_ang = TWO_PI * sys0.j_coupling
    assert abs(info["detuning"]) < 1e-6 * TWO_PI * planned.left.f_d
    # Residual ZZ vanishes whenever a qubit sits on its sweet manifold.
    assert abs(info["zz_coeff"]) < 1e-12 * j_ang
    idle_left = manifold_point(params_l, TWO_PI * 0.529, TWO_PI * 0.02,
                               0.9019)
    info_idle = two_qubit_interaction_picture(
        TwoQubitSystem(idle_left, planned.right, sys0.j_coupling))
    assert abs(info_idle["zz_coeff"]) < 1e-12 * j_ang
    swap = measure_swap_period(planned)
    swap_rel = (abs(swap["period_ns"] - swap["predicted_ns"])
                / swap["predicted_ns"])
    assert swap_rel <= 0.02
    tau_waits = (18.0, 20.0, 22.0)
    t_ramps = (18.0, 20.0, 22.0)
    fmap = two_qubit_fidelity_map(planned, idle_left, tau_waits, t_ramps)
    best = float(fmap.max())
    assert best >= 0.999
    i_best, j_best = np.unravel_index(int(np.argmax(fmap)), fmap.shape)
    model_l = NoiseModel.from_loss_tangents(
        diagonalize_fluxonium(params_l, math.pi).phi_ge, 1.2, 0.95)
    model_r = NoiseModel.from_loss_tangents(
        diagonalize_fluxonium(params_r, math.pi).phi_ge, 1.0, 0.7)
    cfg = OpenSystemConfig(noise_left=model_l, noise_right=model_r,
                           n_samples=4, seed=7)
    report = two_qubit_open_report(planned, idle_left,
                                   t_ramps[j_best], tau_waits[i_best], cfg)
    # The open-system number is reported with its methodology, not asserted
    # against a target.
    assert 0.9 < report["fidelity"] < 1.0
    meth = report["methodology"]
    assert meth["n_samples"] == 4 and meth["seed"] == 7
    wall = time.perf_counter() - t0
    assert wall < 1200.0
    print(f"CRITERION 8 PASS: residual ZZ/J = {abs(info['zz_coeff'])/j_ang:.1e}"
          f" at the gate point and {abs(info_idle['zz_coeff'])/j_ang:.1e} at"
          f" idle (tolerance 1e-12); swap period {swap['period_ns']:.2f} ns vs"
          f" predicted {swap['predicted_ns']:.2f} ns ({100 * swap_rel:.2f}%"
          f" <= 2%); best closed-system sqrt-iSWAP fidelity {best:.5f}"
          f" (threshold 0.999) at tau_wait = {tau_waits[i_best]:.0f} ns,"
          f" t_ramp = {t_ramps[j_best]:.0f} ns; open-system fidelity"
          f" {report['fidelity']:.5f} reported ({meth['one_over_f']};"
          f" {meth['dielectric']}; {meth['n_samples']} samples, seed"
          f" {meth['seed']}); {wall:.0f} s < 1200 s")


def test_criterion_09_limit_reductions():
    t0 = time.perf_counter()
    lam0 = 0.2
    omega_d = TWO_PI * 1.1

    def coeffs(lam):
        c0 = 3.0 + 0.5 * lam
        c1 = (0.4 + 0.1j) + (0.2 + 0.05j) * lam
        return np.array([np.conj(c1), c0, c1])

    out = limit_frequency_modulation(coeffs, lam0, omega_d)
    rel_eps = abs(out["eps01_numeric"] - out["eps01"]) / abs(out["eps01"])
    g_scale = float(np.max(np.abs(out["g_phi"])))
    rel_g = float(np.max(np.abs(out["g_phi_numeric"] - out["g_phi"]))
                  / g_scale)
    assert rel_eps < 1e-8
    assert rel_g < 1e-8

    locked = limit_spin_locking(0.8, 0.3, 1.7, lambda freq: 2.5)
    rel_lock = max(abs(locked["numeric"][key] - locked["analytic"][key])
                   / abs(locked["analytic"][key])
                   for key in locked["analytic"])
    assert rel_lock < 1e-8

    def family(lam, t):
        drive = 0.5 * lam + 0.9 * math.cos(2.6 * t)
        return np.array([[drive, 0.7], [0.7, -drive]])

    general = general_sweet_condition(family, 0.4, 2.6)
    half_slope = 0.5 * general["eps01_slope"]
    rel_general = abs(general["g_phi_0"] - half_slope) / abs(half_slope)
    assert rel_general < 1e-8
    wall = time.perf_counter() - t0
    assert wall < 30.0
    print(f"CRITERION 9 PASS: frequency-modulation limit reproduced to"
          f" {max(rel_eps, rel_g):.1e}, spin-locking rates to {rel_lock:.1e},"
          f" and the generic sweet condition g_phi0 = slope/2 to"
          f" {rel_general:.1e} (tolerance 1e-8); {wall:.1f} s < 30 s")


def test_criterion_10_thread_count_determinism(tmp_path):
    t0 = time.perf_counter()
    config = {"circuit": {"e_c": E_C, "e_j": E_J, "e_l": E_L},
              "drive": {"phi_dc_over_2pi": 0.52,
                        "phi_ac_over_2pi": {"min": 0.01, "max": 0.04, "n": 3},
                        "f_d_ghz": {"min": 0.37, "max": 0.62, "n": 6}},
              "noise": {}}
    cfg_path = tmp_path / "scan.json"
    cfg_path.write_text(json.dumps(config), encoding="utf-8")
    blobs = []
    for sub, threads in (("a", "1"), ("b", "8"), ("c", "1")):
        run_dir = tmp_path / sub
        run_dir.mkdir()
        out = run_dir / "scan_out.json"
        code = cli_main(["sweet-scan", "--config", str(cfg_path),
                         "--out", str(out), "--threads", threads])
        assert code == 0
        blobs.append((out.read_bytes(),
                      (run_dir / "scan_out.csv").read_bytes()))
    assert blobs[0] == blobs[1]
    assert blobs[1] == blobs[2]
    wall = time.perf_counter() - t0
    print(f"CRITERION 10 PASS: sweet-scan output is byte-identical between"
          f" --threads 1 and --threads 8 and across reruns"
          f" ({len(blobs[0][0])} JSON bytes, {len(blobs[0][1])} CSV bytes);"
          f" {wall:.1f} s")
