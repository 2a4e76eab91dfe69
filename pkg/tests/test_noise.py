"""Noise spectra, filter weights, and static versus driven rates."""

import math

import numpy as np
import pytest

from floqspot.circuit import TWO_PI, TwoLevelParams, two_level_reduce
from floqspot.floquet import floquet_solve_extended
from floqspot.noise import (FLAG_T1_LIMITED, NoiseModel, dephasing_envelope,
                            dynamical_rates, filter_function, filter_weights,
                            spectrum_1f, spectrum_dielectric, spectrum_total,
                            static_rates, static_weights)

# Frozen reference values for (E_C, E_J, E_L) = (0.5, 4.0, 1.3) GHz with the
# default loss tangents, from an independent evaluation of the amplitude
# formulas and rate sums.
A_F_REF = 0.00018441744185886661    # rad/ns
A_D_REF = 1.3771947436148985e-05    # ns
THERMAL_GHZ_REF = 0.3125492868499136
T1_AWAY_REF = 770.3093280716394     # us at delta phi / 2 pi = 0.02
TPHI_AWAY_REF = 0.7356267581086898  # us at delta phi / 2 pi = 0.02
T1_SWEET_REF = 361.4863188667725    # us at half flux


def test_loss_tangent_amplitudes(model_ref):
    assert model_ref.a_f == pytest.approx(A_F_REF, rel=1e-9)
    assert model_ref.a_d == pytest.approx(A_D_REF, rel=1e-9)
    assert model_ref.thermal_freq / TWO_PI == pytest.approx(THERMAL_GHZ_REF,
                                                            rel=1e-9)


def test_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(a_f=-1.0, a_d=0.0)
    with pytest.raises(ValueError):
        NoiseModel(a_f=0.0, a_d=1.0, temperature=0.0)
    with pytest.raises(ValueError):
        NoiseModel(a_f=0.0, a_d=1.0, ln_factor=0.0)


def test_static_rates_away_from_half_flux(spec_away, model_ref):
    rates = static_rates(spec_away, model_ref)
    assert rates.t1 == pytest.approx(T1_AWAY_REF, rel=1e-9)
    assert rates.t_phi == pytest.approx(TPHI_AWAY_REF, rel=1e-9)


def test_static_rates_at_half_flux(spec_pi, model_ref):
    rates = static_rates(spec_pi, model_ref)
    assert rates.t1 == pytest.approx(T1_SWEET_REF, rel=1e-9)
    # First-order 1/f dephasing vanishes identically at the sweet spot.
    assert rates.gamma_phi == 0.0
    assert rates.t_phi == math.inf


def test_breakdown_sums_to_totals(spec_away, model_ref, tl_gate):
    for rates in (static_rates(spec_away, model_ref),
                  dynamical_rates(filter_weights(floquet_solve_extended(
                      tl_gate)), model_ref)):
        for channel, total in (("+", rates.gamma_plus),
                               ("-", rates.gamma_minus),
                               ("phi", rates.gamma_phi)):
            acc = sum(r["contribution"] for r in rates.breakdown
                      if r["channel"] == channel)
            assert acc == pytest.approx(total, rel=1e-12, abs=1e-15)


def test_weight_conservation_random_points():
    rng = np.random.default_rng(42)
    for _ in range(25):
        omega_ge = rng.uniform(0.5, 5.0)
        theta = rng.uniform(0.05, math.pi / 2 - 0.05)
        ratio = rng.uniform(0.0, 5.0)
        omega_d = rng.uniform(0.4, 4.0)
        tl = TwoLevelParams(delta=omega_ge * math.sin(theta),
                            amp=ratio * omega_ge,
                            bias=omega_ge * math.cos(theta),
                            omega_d=omega_d)
        sol = floquet_solve_extended(tl)
        while sol.degenerate:
            tl = tl.replace(omega_d=tl.omega_d * 1.000137)
            sol = floquet_solve_extended(tl)
        w = filter_weights(sol)
        assert abs(w.conservation_sum - 2.0) < 1e-10


def test_zero_amplitude_matches_static(spec_pi, model_ref):
    # Undriven limit: the dynamical machinery at zero amplitude reproduces
    # the static rates (drive frequency above the splitting, no folding).
    tl = two_level_reduce(spec_pi, 0.0, TWO_PI * 0.52, TWO_PI * 3.0)
    w = filter_weights(floquet_solve_extended(tl))
    dyn = dynamical_rates(w, model_ref)
    stat = static_rates(tl, model_ref)
    assert dyn.gamma_plus == pytest.approx(stat.gamma_plus, rel=1e-9)
    assert dyn.gamma_minus == pytest.approx(stat.gamma_minus, rel=1e-9)
    assert dyn.gamma_phi == pytest.approx(stat.gamma_phi, rel=1e-9)


def test_static_weights_structure(spec_pi):
    tl = two_level_reduce(spec_pi, 0.0, TWO_PI * 0.52, TWO_PI * 3.0)
    w = static_weights(tl)
    assert len(w.g_phi) == 1
    assert w.conservation_sum == pytest.approx(2.0, abs=1e-12)
    theta = tl.mixing_angle
    assert w.weight_plus == pytest.approx(math.sin(theta) ** 2, rel=1e-12)
    assert abs(w.g_phi_0()) == pytest.approx(abs(math.cos(theta)), rel=1e-12)


def test_spectrum_conventions(model_ref):
    with pytest.raises(ValueError):
        spectrum_1f(0.0, model_ref)
    assert spectrum_dielectric(0.0, model_ref) == 0.0
    # 1/f is symmetric; the dielectric spectrum obeys detailed balance.
    assert spectrum_1f(-1.3, model_ref) == pytest.approx(
        spectrum_1f(1.3, model_ref))
    omega = 1.7
    ratio = (spectrum_dielectric(omega, model_ref) /
             spectrum_dielectric(-omega, model_ref))
    assert ratio == pytest.approx(math.exp(omega / model_ref.thermal_freq),
                                  rel=1e-12)
    assert spectrum_total(omega, model_ref) == pytest.approx(
        spectrum_1f(omega, model_ref) + spectrum_dielectric(omega, model_ref))


def test_low_frequency_clamp_flag(model_ref):
    # Near an m = 1 crossing the k = +-1 depolarization lines sit close to
    # zero frequency, where the 1/f factor must be clamped and flagged.
    omega = TWO_PI * 1.0
    tl = TwoLevelParams(delta=TWO_PI * 0.01, amp=TWO_PI * 0.001,
                        bias=omega, omega_d=omega)
    rates = dynamical_rates(filter_weights(floquet_solve_extended(tl)),
                            model_ref)
    assert FLAG_T1_LIMITED in rates.flags


def test_dephasing_envelope_shape(tl_gate, model_ref):
    w = filter_weights(floquet_solve_extended(tl_gate))
    assert dephasing_envelope(0.0, w, model_ref) == 1.0
    ts = np.linspace(0.0, 40.0, 9)
    env = dephasing_envelope(ts, w, model_ref)
    assert np.all(np.diff(env) <= 0)
    assert np.all(env > 0)
    assert np.all(env <= 1.0)


def test_filter_function_total_weight(tl_gate):
    w = filter_weights(floquet_solve_extended(tl_gate))
    t = 60.0
    grid = np.linspace(-16.0, 16.0, 64001)
    for channel, weight in (("+", w.weight_plus), ("-", w.weight_minus),
                            ("phi", w.weight_phi)):
        integral = np.trapezoid(filter_function(grid, t, w, channel), grid)
        assert integral == pytest.approx(weight, rel=5e-3)
    with pytest.raises(ValueError):
        filter_function(grid, 0.0, w, "+")
    with pytest.raises(ValueError):
        filter_function(grid, t, w, "bogus")
