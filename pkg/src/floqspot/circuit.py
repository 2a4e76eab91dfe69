"""Static fluxonium circuit: Hamiltonian construction, diagonalization, and
reduction to the effective driven two-level model.

Conventions
-----------
Circuit energies are specified as ordinary frequencies in GHz (E/h); fluxes
are in radians.  The reduced two-level parameters are returned in angular
frequency units (rad/ns) with hbar = 1, so a GHz energy maps to 2*pi rad/ns.

The static Hamiltonian is ``4 E_C n^2 + E_L/2 (phi + phi_dc)^2 - E_J cos(phi)``
built in the harmonic-oscillator basis of the inductive-capacitive part,
expressed in the shifted coordinate ``x = phi + phi_dc`` so that the
quadratic term is centered.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.linalg import eigh_tridiagonal

TWO_PI = 2.0 * math.pi

# Relative change of the lowest eigenenergies required between successive
# basis doublings before the spectrum is accepted.
CONVERGENCE_RTOL = 1e-9
# Number of lowest levels monitored by the convergence gate.
CONVERGENCE_LEVELS = 4
# Hard cap on the oscillator basis size.
MAX_BASIS_DIM = 12800


class ConvergenceError(RuntimeError):
    """Eigenenergies failed to converge at the maximum basis size."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclasses.dataclass(frozen=True)
class FluxoniumParams:
    """Circuit energies (GHz, E/h) and oscillator basis size."""

    e_c: float
    e_j: float
    e_l: float
    basis_dim: int = 100

    def __post_init__(self):
        if not (self.e_c > 0 and self.e_j > 0 and self.e_l > 0):
            raise ValueError("circuit energies e_c, e_j, e_l must be positive")
        if self.basis_dim < 20:
            raise ValueError("basis_dim must be at least 20")


@dataclasses.dataclass(frozen=True)
class ReductionRecord:
    """Inputs used to form the effective drive amplitude and bias."""

    phi_ac: float
    phi_dc: float
    phi_ge: float
    e_l: float  # GHz


@dataclasses.dataclass(frozen=True)
class StaticSpectrum:
    """Converged low-lying spectrum of the static circuit at fixed dc flux.

    Attributes
    ----------
    phi_dc:
        Reduced dc flux in radians (pi at half flux quantum).
    energies:
        Lowest eigenenergies in GHz, strictly increasing.  Only differences
        are physically meaningful.
    phi_matrix:
        Matrix elements <l|phi|l'> of the phase operator between the lowest
        levels (dimensionless), with eigenvector phases fixed so the
        largest-magnitude amplitude of each state is real positive.
    parity_labels:
        Per-level parity of the shifted coordinate (+1/-1), defined only at
        phi_dc = pi; ``None`` elsewhere.
    params:
        The circuit parameters that produced the spectrum.
    basis_dim_used:
        Oscillator basis size at which convergence was reached.
    """

    phi_dc: float
    energies: np.ndarray
    phi_matrix: np.ndarray
    parity_labels: tuple | None
    params: FluxoniumParams
    basis_dim_used: int

    @property
    def omega_ge(self) -> float:
        """g-e transition frequency in GHz."""
        return float(self.energies[1] - self.energies[0])

    @property
    def phi_ge(self) -> float:
        """Magnitude of the g-e phase matrix element."""
        return float(abs(self.phi_matrix[0, 1]))


@dataclasses.dataclass(frozen=True)
class TwoLevelParams:
    """Effective driven two-level model in angular units (rad/ns).

    The Hamiltonian is ``(delta/2) sx + (amp cos(omega_d t) + bias/2) sz``
    where sx is diagonal in the qubit energy basis and sz flips it.
    """

    delta: float
    amp: float
    bias: float
    omega_d: float
    provenance: ReductionRecord | None = None
    warnings: tuple = ()

    @property
    def omega_ge(self) -> float:
        """Static splitting sqrt(delta^2 + bias^2) in rad/ns."""
        return math.hypot(self.delta, self.bias)

    @property
    def mixing_angle(self) -> float:
        """theta = atan2(delta, bias); pi/2 at the static sweet spot."""
        return math.atan2(self.delta, self.bias)

    def replace(self, **changes) -> "TwoLevelParams":
        return dataclasses.replace(self, **changes)


def _oscillator_operators(params: FluxoniumParams, dim: int):
    """Shifted-coordinate operator (tridiagonal bands) and LC level spacing."""
    x_zpf = (2.0 * params.e_c / params.e_l) ** 0.25
    omega_osc = math.sqrt(8.0 * params.e_c * params.e_l)
    off = x_zpf * np.sqrt(np.arange(1, dim))
    return omega_osc, off


def _diagonalize_once(params: FluxoniumParams, phi_dc: float, dim: int,
                      n_levels: int):
    omega_osc, off = _oscillator_operators(params, dim)
    # cos(phi) = cos(x - phi_dc) evaluated through the eigenbasis of x.
    xi, v = eigh_tridiagonal(np.zeros(dim), off)
    cos_phi = (v * np.cos(xi - phi_dc)) @ v.T
    h = np.diag(omega_osc * (np.arange(dim) + 0.5)) - params.e_j * cos_phi
    evals, evecs = np.linalg.eigh(h)
    evals = evals[:n_levels]
    evecs = evecs[:, :n_levels]
    # Deterministic eigenvector phases: largest amplitude real positive.
    for i in range(n_levels):
        j = int(np.argmax(np.abs(evecs[:, i])))
        if evecs[j, i] < 0:
            evecs[:, i] = -evecs[:, i]
    x_mat = np.zeros((dim, dim))
    idx = np.arange(dim - 1)
    x_mat[idx, idx + 1] = off
    x_mat[idx + 1, idx] = off
    phi_mat = evecs.T @ x_mat @ evecs - phi_dc * np.eye(n_levels)
    parity = evecs.T @ (((-1.0) ** np.arange(dim))[:, None] * evecs)
    return evals, phi_mat, np.diag(parity)


def diagonalize_fluxonium(params: FluxoniumParams, phi_dc: float,
                          n_levels: int = 6) -> StaticSpectrum:
    """Diagonalize the static circuit at fixed dc flux.

    The oscillator basis is doubled until the lowest eigenenergies change by
    less than ``CONVERGENCE_RTOL`` relative, then the converged spectrum and
    phase matrix elements are returned.

    Raises
    ------
    ConvergenceError
        If the convergence gate is not met at ``MAX_BASIS_DIM``; the error
        carries the last residual.
    """
    if not math.isfinite(phi_dc):
        raise ValueError("phi_dc must be finite")
    n_levels = max(n_levels, CONVERGENCE_LEVELS)
    dim = params.basis_dim
    evals, phi_mat, parity = _diagonalize_once(params, phi_dc, dim, n_levels)
    residual = math.inf
    while dim <= MAX_BASIS_DIM:
        dim2 = 2 * dim
        evals2, phi_mat2, parity2 = _diagonalize_once(
            params, phi_dc, dim2, n_levels)
        lo, lo2 = evals[:CONVERGENCE_LEVELS], evals2[:CONVERGENCE_LEVELS]
        residual = float(np.max(np.abs(lo2 - lo) / np.maximum(np.abs(lo2), 1.0)))
        if residual < CONVERGENCE_RTOL:
            evals, phi_mat, parity = evals2, phi_mat2, parity2
            dim = dim2
            break
        evals, phi_mat, parity = evals2, phi_mat2, parity2
        dim = dim2
    else:
        raise ConvergenceError(
            f"spectrum not converged at basis_dim={dim} "
            f"(residual {residual:.3e})", residual)
    if np.any(np.diff(evals) <= 0):
        raise ConvergenceError("eigenenergies not strictly increasing",
                               residual)
    labels = None
    if abs(phi_dc - math.pi) < 1e-9:
        labels = tuple(int(round(p)) for p in parity)
    return StaticSpectrum(phi_dc=phi_dc, energies=evals, phi_matrix=phi_mat,
                          parity_labels=labels, params=params,
                          basis_dim_used=dim)


def two_level_reduce(spec_at_pi: StaticSpectrum, phi_ac: float, phi_dc: float,
                     omega_d: float, guard_band: float = 0.2) -> TwoLevelParams:
    """Reduce the circuit to the driven two-level model.

    Parameters
    ----------
    spec_at_pi:
        Static spectrum evaluated at phi_dc = pi (the expansion point).
    phi_ac, phi_dc:
        Drive amplitude and dc offset of the external flux, in radians.
    omega_d:
        Drive angular frequency in rad/ns.
    guard_band:
        Fractional distance from the e-f transition below which a validity
        warning is attached.

    Returns
    -------
    TwoLevelParams with ``delta`` the bare splitting at half flux,
    ``amp = E_L phi_ac phi_ge`` and ``bias = 2 E_L (phi_dc - pi) phi_ge``
    in angular units.
    """
    if abs(spec_at_pi.phi_dc - math.pi) > 1e-9:
        raise ValueError("reduction requires the spectrum at phi_dc = pi")
    phi_ge = spec_at_pi.phi_ge
    e_l_ang = TWO_PI * spec_at_pi.params.e_l
    delta = TWO_PI * spec_at_pi.omega_ge
    amp = e_l_ang * phi_ac * phi_ge
    bias = 2.0 * e_l_ang * (phi_dc - math.pi) * phi_ge
    warnings = ()
    if len(spec_at_pi.energies) >= 3:
        omega_ef = TWO_PI * float(
            spec_at_pi.energies[2] - spec_at_pi.energies[1])
        if abs(omega_d - omega_ef) < guard_band * omega_ef:
            warnings = (
                f"drive frequency {omega_d / TWO_PI:.4f} GHz lies within "
                f"{guard_band:.0%} of the e-f transition "
                f"{omega_ef / TWO_PI:.4f} GHz",)
    record = ReductionRecord(phi_ac=phi_ac, phi_dc=phi_dc, phi_ge=phi_ge,
                             e_l=spec_at_pi.params.e_l)
    return TwoLevelParams(delta=delta, amp=amp, bias=bias, omega_d=omega_d,
                          provenance=record, warnings=warnings)
