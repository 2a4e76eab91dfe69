"""Noise spectra, Floquet filter weights, decoherence rates, and the
dephasing envelope.

Spectra are one-sided-in-convention rate densities evaluated at angular
frequencies (rad/ns): ``S_f(w) = a_f^2 |w/2pi|^-1`` for 1/f flux noise and
``S_d(w) = alpha(w, T) a_d (w/2pi)^2`` for dielectric loss, where
``alpha(w, T) = |coth(w / 2 k_B T) + 1| / 2``.  Positive frequencies drive
emission (relaxation), negative frequencies absorption (excitation).

The filter weights ``g_{k mu}`` are Fourier coefficients of the qubit
coupling operator expressed in the Floquet-state basis; ``|g_{k mu}|^2`` is
the weight with which channel ``mu`` samples the spectrum at its filter
frequency.  Rates are reported in 1/us and times in us.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .circuit import TWO_PI
from .floquet import (SIGMA_Z, DegenerateSolutionError, FloquetSolution,
                      static_eigenstates)

# Boltzmann constant over hbar, rad/ns per kelvin.
KB_RADNS_PER_K = 1.380649e-23 / 1.0545718176461565e-34 * 1e-9

# Loss parameters quoted with the coherence-time tables: dielectric loss
# tangent, 1/f flux noise strength, and temperature.
TAN_DELTA_C = 1.1e-6
DELTA_F = 1.8e-6
TEMPERATURE_K = 0.015

# Depolarization filter frequencies closer to zero than this margin have
# their 1/f contribution clamped to the margin value (rad/ns).
LOW_FREQ_MARGIN = TWO_PI * 1e-3

FLAG_T1_LIMITED = "1/f-limited T1"


@dataclasses.dataclass(frozen=True)
class NoiseModel:
    """Noise channel amplitudes and conventions.

    Attributes
    ----------
    a_f:
        1/f flux-noise amplitude (rad/ns).
    a_d:
        Dielectric-loss amplitude (ns).
    temperature:
        Bath temperature in kelvin.
    omega_ir:
        Infrared cutoff of the 1/f regularization (rad/s); informational,
        the regularized dephasing uses ``ln_factor`` directly.
    ln_factor:
        The value of sqrt(|ln(omega_ir t_m)|) used in the regularized
        first-order 1/f dephasing rate.
    """

    a_f: float
    a_d: float
    temperature: float = TEMPERATURE_K
    omega_ir: float = TWO_PI * 1.0
    ln_factor: float = 4.0

    def __post_init__(self):
        if self.a_f < 0 or self.a_d < 0:
            raise ValueError("noise amplitudes must be non-negative")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.ln_factor <= 0:
            raise ValueError("ln_factor must be positive")

    @property
    def thermal_freq(self) -> float:
        """k_B T in rad/ns."""
        return KB_RADNS_PER_K * self.temperature

    @classmethod
    def from_loss_tangents(cls, phi_ge: float, e_c: float, e_l: float,
                           tan_delta_c: float = TAN_DELTA_C,
                           delta_f: float = DELTA_F,
                           temperature: float = TEMPERATURE_K,
                           **kwargs) -> "NoiseModel":
        """Build amplitudes from loss tangents and the circuit coupling.

        ``a_d = pi^2 tan_delta_c phi_ge^2 / E_C`` and
        ``a_f = 2 pi delta_f E_L phi_ge`` with E_C, E_L the circuit energies
        in GHz (converted internally to angular units) and ``phi_ge`` the
        phase matrix element at half flux.
        """
        e_c_ang = TWO_PI * e_c
        e_l_ang = TWO_PI * e_l
        a_d = math.pi ** 2 * tan_delta_c * phi_ge ** 2 / e_c_ang
        a_f = TWO_PI * delta_f * e_l_ang * phi_ge
        return cls(a_f=a_f, a_d=a_d, temperature=temperature, **kwargs)


@dataclasses.dataclass(frozen=True)
class FilterWeights:
    """Filter weights of the three decoherence channels.

    ``g_plus``, ``g_minus``, ``g_phi`` are complex arrays indexed by the
    harmonic k from -K to K.  Channel ``-`` (relaxation) samples the
    spectrum at ``k omega_d + eps01``, channel ``+`` (excitation) at
    ``k omega_d - eps01``, and the dephasing channel at ``k omega_d``.
    """

    omega_d: float
    eps01: float
    g_plus: np.ndarray
    g_minus: np.ndarray
    g_phi: np.ndarray

    @property
    def k_values(self) -> np.ndarray:
        k = (len(self.g_phi) - 1) // 2
        return np.arange(-k, k + 1)

    @property
    def freqs_plus(self) -> np.ndarray:
        return self.k_values * self.omega_d - self.eps01

    @property
    def freqs_minus(self) -> np.ndarray:
        return self.k_values * self.omega_d + self.eps01

    @property
    def freqs_phi(self) -> np.ndarray:
        return self.k_values * self.omega_d

    @property
    def weight_plus(self) -> float:
        return float(np.sum(np.abs(self.g_plus) ** 2))

    @property
    def weight_minus(self) -> float:
        return float(np.sum(np.abs(self.g_minus) ** 2))

    @property
    def weight_phi(self) -> float:
        return 2.0 * float(np.sum(np.abs(self.g_phi) ** 2))

    @property
    def conservation_sum(self) -> float:
        """W_+ + W_- + W_phi; equals 2 for any drive parameters."""
        return self.weight_plus + self.weight_minus + self.weight_phi

    def g_phi_0(self) -> complex:
        k = (len(self.g_phi) - 1) // 2
        return complex(self.g_phi[k])


@dataclasses.dataclass(frozen=True)
class Rates:
    """Decoherence rates (1/us) with a per-term breakdown.

    ``breakdown`` rows are dicts with keys (k, channel, freq_ghz, weight,
    spectrum, contribution); contribution is in 1/us.  ``flags`` carries
    validity warnings such as a clamped near-zero 1/f sample.
    """

    gamma_plus: float
    gamma_minus: float
    gamma_phi: float
    breakdown: tuple
    flags: tuple = ()

    @property
    def t1(self) -> float:
        """Depolarization time (gamma_+ + gamma_-)^-1 in us."""
        total = self.gamma_plus + self.gamma_minus
        return math.inf if total == 0 else 1.0 / total

    @property
    def t_phi(self) -> float:
        """Pure-dephasing time gamma_phi^-1 in us."""
        return math.inf if self.gamma_phi == 0 else 1.0 / self.gamma_phi


def spectrum_1f(omega, model: NoiseModel):
    """1/f flux-noise spectrum a_f^2 |w/2pi|^-1; singular at w = 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0.0):
        raise ValueError("1/f spectrum is singular at zero frequency; "
                         "use the regularized dephasing path")
    out = model.a_f ** 2 / np.abs(omega / TWO_PI)
    return out if out.ndim else float(out)

def spectrum_dielectric(omega, model: NoiseModel):
    """Dielectric-loss spectrum alpha(w, T) a_d (w/2pi)^2; zero at w = 0."""
    omega = np.asarray(omega, dtype=float)
    safe = np.where(omega == 0.0, 1.0, omega)
    alpha = np.abs(1.0 / np.tanh(safe / (2.0 * model.thermal_freq)) + 1.0) / 2.0
    out = np.where(omega == 0.0, 0.0,
                   alpha * model.a_d * (safe / TWO_PI) ** 2)
    return out if out.ndim else float(out)


def spectrum_total(omega, model: NoiseModel):
    """Sum of the 1/f and dielectric spectra (w != 0)."""
    return spectrum_1f(omega, model) + spectrum_dielectric(omega, model)


def _mode_convolution(u_a: np.ndarray, u_b: np.ndarray,
                      operator: np.ndarray) -> np.ndarray:
    """Fourier coefficients C_m of <w_a(t)|O|w_b(t)> for m in [-2K, 2K].

    ``C_m = sum_{s s'} O_{s s'} sum_k conj(u_a[s, k]) u_b[s', k + m]``.  The
    full correlation support is kept so that the weight-conservation sum is
    exact up to the orthonormality error of the modes.
    """
    va = operator.T @ np.conj(u_a)  # va[s', k] = sum_s conj(u_a[s, k]) O[s, s']
    out = np.zeros(2 * u_a.shape[1] - 1, dtype=complex)
    for s in range(u_a.shape[0]):
        out += np.correlate(u_b[s], np.conj(va[s]), mode="full")
    return out


def filter_weights(sol: FloquetSolution,
                   operator: np.ndarray | None = None) -> FilterWeights:
    """Filter weights of the coupling operator in the Floquet basis.

    By default the coupling is sz (flux noise).  The weights are discrete
    convolutions of the Fourier-mode coefficients, equivalent to the
    one-period integrals of the Floquet-frame matrix elements:
    ``g_{k+}`` is the k-th coefficient of <w_1(t)|O|w_0(t)>, ``g_{k-}`` of
    <w_0(t)|O|w_1(t)>, and ``g_{k phi}`` of half the population-difference
    element.

    Raises
    ------
    DegenerateSolutionError
        If the solution is flagged degenerate (the rotating-wave rate
        formulas assume a resolvable quasi-energy splitting).
    """
    if sol.degenerate:
        raise DegenerateSolutionError(
            "quasi-energies are degenerate within tolerance; filter weights "
            "and rate formulas are not valid at a closing gap")
    op = SIGMA_Z if operator is None else np.asarray(operator)
    u0, u1 = sol.fourier_modes[0], sol.fourier_modes[1]
    g_plus = _mode_convolution(u1, u0, op)
    g_minus = _mode_convolution(u0, u1, op)
    g_phi = 0.5 * (_mode_convolution(u1, u1, op) - _mode_convolution(u0, u0, op))
    return FilterWeights(omega_d=sol.omega_d, eps01=sol.eps01,
                         g_plus=g_plus, g_minus=g_minus, g_phi=g_phi)


def _depolarization_terms(ks, weights, freqs, model, channel, margin):
    """Per-harmonic contributions for one depolarization channel."""
    rows = []
    clamped = False
    total = 0.0
    for k, w2, f in zip(ks, weights, freqs):
        if w2 == 0.0:
            continue
        s_d = spectrum_dielectric(f, model)
        if abs(f) < margin:
            s_f = spectrum_1f(math.copysign(margin, f if f != 0 else 1.0),
                              model)
            clamped = True
        else:
            s_f = spectrum_1f(f, model)
        s = s_f + s_d
        contrib = w2 * s * 1e3  # 1/ns -> 1/us
        total += contrib
        rows.append({"k": int(k), "channel": channel,
                     "freq_ghz": f / TWO_PI, "weight": w2,
                     "spectrum": s, "contribution": contrib})
    return total, rows, clamped


def dynamical_rates(w: FilterWeights, model: NoiseModel,
                    margin: float = LOW_FREQ_MARGIN) -> Rates:
    """Decoherence rates of the driven qubit from its filter weights.

    ``gamma_-+ = sum_k |g_{k-+}|^2 S(k omega_d +- eps01)`` and
    ``gamma_phi = a_f |2 g_{0 phi}| ln_factor
    + sum_{k != 0} 2 |g_{k phi}|^2 S(k omega_d)``.  Filter frequencies of
    the depolarization channels that fall within ``margin`` of zero have
    the 1/f factor sampled at the margin and the result is flagged.
    """
    ks = w.k_values
    g_minus, rows_minus, clamp_m = _depolarization_terms(
        ks, np.abs(w.g_minus) ** 2, w.freqs_minus, model, "-", margin)
    g_plus, rows_plus, clamp_p = _depolarization_terms(
        ks, np.abs(w.g_plus) ** 2, w.freqs_plus, model, "+", margin)
    k0 = (len(w.g_phi) - 1) // 2
    gamma_phi = model.a_f * 2.0 * abs(w.g_phi[k0]) * model.ln_factor * 1e3
    rows_phi = [{"k": 0, "channel": "phi", "freq_ghz": 0.0,
                 "weight": abs(w.g_phi[k0]) ** 2,
                 "spectrum": math.nan, "contribution": gamma_phi}]
    for k in ks:
        if k == 0:
            continue
        w2 = abs(w.g_phi[k + k0]) ** 2
        if w2 == 0.0:
            continue
        f = k * w.omega_d
        s = spectrum_total(f, model)
        contrib = 2.0 * w2 * s * 1e3
        gamma_phi += contrib
        rows_phi.append({"k": int(k), "channel": "phi",
                         "freq_ghz": f / TWO_PI, "weight": w2,
                         "spectrum": s, "contribution": contrib})
    flags = (FLAG_T1_LIMITED,) if (clamp_m or clamp_p) else ()
    breakdown = tuple(sorted(rows_minus + rows_plus + rows_phi,
                             key=lambda r: (r["channel"], r["k"])))
    return Rates(gamma_plus=g_plus, gamma_minus=g_minus,
                 gamma_phi=gamma_phi, breakdown=breakdown, flags=flags)


def _two_level_angles(source):
    """(sin theta, cos theta, omega_ge) of a static two-level source."""
    from .circuit import StaticSpectrum, TwoLevelParams, diagonalize_fluxonium
    if isinstance(source, TwoLevelParams):
        delta, bias = source.delta, source.bias
    elif isinstance(source, StaticSpectrum):
        # Angles in the half-flux two-level frame: fixed splitting and
        # matrix element from the flux-symmetric point, flux entering only
        # through the bias.  Consistent with the zero-amplitude limit of the
        # driven treatment.
        ref = source
        if source.phi_dc != math.pi:
            ref = diagonalize_fluxonium(source.params, math.pi)
        delta = TWO_PI * ref.omega_ge
        e_l_ang = TWO_PI * source.params.e_l
        bias = 2.0 * e_l_ang * (source.phi_dc - math.pi) * ref.phi_ge
    else:
        raise TypeError("expected TwoLevelParams or StaticSpectrum")
    omega_ge = math.hypot(delta, bias)
    if omega_ge == 0:
        raise ValueError("two-level splitting vanishes")
    return delta / omega_ge, bias / omega_ge, omega_ge


def static_rates(source, model: NoiseModel) -> Rates:
    """Undriven decoherence rates of the static qubit.

    ``gamma_-+ = sin^2(theta) S(+- omega_ge)`` and the regularized
    first-order 1/f dephasing ``gamma_phi = a_f |2 cos theta| ln_factor``
    (the dielectric spectrum vanishes at zero frequency).  Matches
    :func:`dynamical_rates` evaluated at zero drive amplitude.
    """
    sin_t, cos_t, omega_ge = _two_level_angles(source)
    w2 = sin_t ** 2
    gamma_minus = w2 * spectrum_total(omega_ge, model) * 1e3
    gamma_plus = w2 * spectrum_total(-omega_ge, model) * 1e3
    gamma_phi = model.a_f * 2.0 * abs(cos_t) * model.ln_factor * 1e3
    breakdown = (
        {"k": 0, "channel": "+", "freq_ghz": -omega_ge / TWO_PI, "weight": w2,
         "spectrum": spectrum_total(-omega_ge, model),
         "contribution": gamma_plus},
        {"k": 0, "channel": "-", "freq_ghz": omega_ge / TWO_PI, "weight": w2,
         "spectrum": spectrum_total(omega_ge, model),
         "contribution": gamma_minus},
        {"k": 0, "channel": "phi", "freq_ghz": 0.0, "weight": cos_t ** 2,
         "spectrum": math.nan, "contribution": gamma_phi},
    )
    return Rates(gamma_plus=gamma_plus, gamma_minus=gamma_minus,
                 gamma_phi=gamma_phi, breakdown=breakdown)


def dephasing_envelope(t, w: FilterWeights, model: NoiseModel):
    """Off-diagonal coherence factor at time t (us).

    ``exp[-4 a_f^2 |g_{0 phi}|^2 t^2 |ln(omega_ir t)|
    - sum_{k != 0} 2 |g_{k phi}|^2 S(k omega_d) t]`` -- a Gaussian-times-
    exponential decay; the Gaussian factor carries the infrared-regularized
    1/f contribution.
    """
    t = np.asarray(t, dtype=float)
    t_ns = t * 1e3
    omega_ir_ns = model.omega_ir * 1e-9
    k0 = (len(w.g_phi) - 1) // 2
    g0 = abs(w.g_phi[k0])
    rate_exp = 0.0  # 1/ns
    for k, g in zip(w.k_values, w.g_phi):
        if k == 0:
            continue
        rate_exp += 2.0 * abs(g) ** 2 * spectrum_total(k * w.omega_d, model)
    safe_t = np.where(t_ns > 0, t_ns, 1.0)
    log_term = np.abs(np.log(omega_ir_ns * safe_t))
    gauss = 4.0 * model.a_f ** 2 * g0 ** 2 * safe_t ** 2 * log_term
    out = np.where(t_ns > 0, np.exp(-gauss - rate_exp * safe_t), 1.0)
    return out if out.ndim else float(out)


def filter_function(omega, t: float, w: FilterWeights, channel: str):
    """Finite-time filter function of one channel at frequency omega (rad/ns).

    ``F_mu(w, t) = zeta_mu^-1 sum_k (t/pi) sinc[(w - wbar_{k mu}) t]
    |g_{k mu}|^2`` with zeta_+- = 1 and zeta_phi = 1/2; the sinc is
    unnormalized, sin(x)/x.  Integrated over omega and summed over channels
    the filter functions carry total weight 2.
    """
    if t <= 0:
        raise ValueError("filter functions require t > 0")
    if channel == "+":
        freqs, g, zeta = w.freqs_plus, w.g_plus, 1.0
    elif channel == "-":
        freqs, g, zeta = w.freqs_minus, w.g_minus, 1.0
    elif channel == "phi":
        freqs, g, zeta = w.freqs_phi, w.g_phi, 0.5
    else:
        raise ValueError("channel must be '+', '-', or 'phi'")
    omega = np.asarray(omega, dtype=float)
    x = (omega[..., None] - freqs) * t
    kernel = t / math.pi * np.sinc(x / math.pi)
    out = np.sum(kernel * np.abs(g) ** 2, axis=-1) / zeta
    return out if out.ndim else float(out)


def static_weights(tl) -> FilterWeights:
    """Filter weights of the undriven qubit (single k = 0 entries)."""
    _, evecs = static_eigenstates(tl)
    g, e = evecs[:, 0], evecs[:, 1]
    g_plus = np.array([np.conj(e) @ SIGMA_Z @ g], dtype=complex)
    g_minus = np.array([np.conj(g) @ SIGMA_Z @ e], dtype=complex)
    g_phi = np.array([0.5 * (np.conj(e) @ SIGMA_Z @ e -
                             np.conj(g) @ SIGMA_Z @ g)], dtype=complex)
    return FilterWeights(omega_d=tl.omega_d, eps01=tl.omega_ge,
                         g_plus=g_plus, g_minus=g_minus, g_phi=g_phi)
