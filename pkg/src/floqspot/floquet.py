"""Floquet solvers for the driven two-level model.

Two independent routes compute the quasi-energies and periodic modes: an
extended Fourier-space eigenproblem (banded, real symmetric) and a
time-domain monodromy integration.  Both return a :class:`FloquetSolution`
with the same folding, ordering, and phase conventions so they can be
cross-checked term by term.

Conventions
-----------
All frequencies are angular (rad/ns).  Two-component vectors are expressed
in the sz eigenbasis: index 0 is the sz = +1 state, index 1 the sz = -1
state.  In that basis sz = diag(1, -1) and sx = [[0, 1], [1, 0]], so the
two-level Hamiltonian reads::

    H(t) = [[B/2 + A cos(w t),  D/2               ],
            [D/2,               -(B/2 + A cos(w t))]]

A Floquet mode is expanded as ``|w_j(t)> = sum_k u_{jk} exp(-i k w t)`` and
the full state is ``exp(-i eps_j t) |w_j(t)>``.  Quasi-energies are folded
into the first Brillouin zone ``(-w/2, w/2]`` and reported in ascending
order; the ``labeling`` record notes which mode tracks which static
eigenstate.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eig_banded, schur

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])

# Hard cap on the Fourier truncation order.
MAX_TRUNCATION = 4096
# Outermost-harmonic amplitude below which the truncation is adequate.
TAIL_TOL = 1e-12
# eps01 below this fraction of omega_d (as a circle distance) marks the
# solution degenerate; rate formulas are invalid there.
DEGENERACY_FRACTION = 1e-8


class TruncationError(RuntimeError):
    """Fourier truncation still inadequate at the hard cap."""

    def __init__(self, message: str, tail: float):
        super().__init__(message)
        self.tail = tail


class IntegrationError(RuntimeError):
    """Time-domain integration failed its accuracy contract."""

    def __init__(self, message: str, defect: float):
        super().__init__(message)
        self.defect = defect


class DegenerateSolutionError(ValueError):
    """Operation requires a non-degenerate quasi-energy spectrum."""


@dataclasses.dataclass(frozen=True)
class FloquetSolution:
    """Quasi-energies and Fourier modes of the two Floquet states.

    Attributes
    ----------
    omega_d:
        Drive angular frequency (rad/ns).
    eps:
        The two quasi-energies, folded into ``(-omega_d/2, omega_d/2]`` and
        sorted ascending (rad/ns).
    eps01:
        ``eps[1] - eps[0]`` (rad/ns), in ``[0, omega_d)``.
    fourier_modes:
        Complex array of shape ``(2, 2, 2K+1)`` indexed by
        ``(state j, sz component, harmonic k)`` with k running from -K to K.
    truncation_k:
        The truncation order K.
    labeling:
        Human-readable record of how j = 0, 1 was assigned.
    static_assignment:
        ``static_assignment[j]`` is the static eigenstate index (0 = ground,
        1 = excited) whose time-averaged population in mode j is largest.
    degenerate:
        True when the folded quasi-energies coincide to within
        ``DEGENERACY_FRACTION * omega_d`` on the quasi-energy circle.
    method:
        Which solver produced the solution.
    """

    omega_d: float
    eps: np.ndarray
    eps01: float
    fourier_modes: np.ndarray
    truncation_k: int
    labeling: str
    static_assignment: tuple
    degenerate: bool
    method: str

    @property
    def k_values(self) -> np.ndarray:
        k = self.truncation_k
        return np.arange(-k, k + 1)

    def mode(self, j: int, t) -> np.ndarray:
        """Floquet mode |w_j(t)> in the sz basis; t may be an array."""
        t = np.asarray(t, dtype=float)
        phases = np.exp(-1j * np.multiply.outer(t, self.k_values * self.omega_d))
        return phases @ self.fourier_modes[j].T

    def gap_circle(self) -> float:
        """Distance between the quasi-energies on the circle of period omega_d."""
        return min(self.eps01, self.omega_d - self.eps01)


def hamiltonian(tl, t):
    """Driven two-level Hamiltonian at time t, in the sz basis."""
    z = tl.amp * np.cos(tl.omega_d * t) + 0.5 * tl.bias
    return np.array([[z, 0.5 * tl.delta], [0.5 * tl.delta, -z]])


def static_eigenstates(tl):
    """Eigenvalues and eigenvectors of the undriven Hamiltonian.

    Returns (energies ascending, column eigenvectors) in the sz basis, with
    the phase convention of the largest component real positive.
    """
    h0 = np.array([[0.5 * tl.bias, 0.5 * tl.delta],
                   [0.5 * tl.delta, -0.5 * tl.bias]])
    evals, evecs = np.linalg.eigh(h0)
    for i in range(2):
        j = int(np.argmax(np.abs(evecs[:, i])))
        if evecs[j, i].real < 0:
            evecs[:, i] = -evecs[:, i]
    return evals, evecs


def default_truncation(tl) -> int:
    """Default Fourier truncation order for the given drive parameters.

    Harmonic content of the modes dies off just beyond |k| ~ A/omega_d
    (Bessel-like decay with an Airy transition region of width
    ~(A/omega_d)^(1/3)); the bias and splitting add a few sidebands.
    """
    ratio = abs(tl.amp) / tl.omega_d
    return int(math.ceil(
        (abs(tl.amp) + 0.5 * abs(tl.bias) + abs(tl.delta)) / tl.omega_d
        + 9.0 * (ratio + 1.0) ** (1.0 / 3.0))) + 12


def fold_quasi_energy(eps, omega_d: float):
    """Fold quasi-energies into the first Brillouin zone (-omega_d/2, omega_d/2]."""
    eps = np.asarray(eps, dtype=float)
    folded = eps - omega_d * np.ceil(eps / omega_d - 0.5)
    return folded if folded.ndim else float(folded)


def _shift_harmonics(u: np.ndarray, n: int) -> np.ndarray:
    """Shift mode coefficients u[..., k] -> u[..., k - n], zero-filling edges."""
    if n == 0:
        return u
    out = np.zeros_like(u)
    if n > 0:
        out[..., n:] = u[..., :-n]
    else:
        out[..., :n] = u[..., -n:]
    return out


def _fix_mode_phase(u: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude coefficient real positive."""
    flat = u.reshape(-1)
    j = int(np.argmax(np.abs(flat)))
    pivot = flat[j]
    if pivot == 0:
        return u
    return u * (abs(pivot) / pivot)


def _extended_bands(tl, k_trunc: int):
    """Lower-form band storage of the extended-space Hamiltonian."""
    n = 2 * (2 * k_trunc + 1)
    ks = np.arange(-k_trunc, k_trunc + 1)
    bands = np.zeros((3, n))
    # Diagonal: sigma B/2 - k omega_d with sigma = +1 on even rows.
    bands[0, 0::2] = 0.5 * tl.bias - ks * tl.omega_d
    bands[0, 1::2] = -0.5 * tl.bias - ks * tl.omega_d
    # First subdiagonal: sx coupling inside each harmonic block.
    bands[1, 0:n - 1:2] = 0.5 * tl.delta
    # Second subdiagonal: drive coupling between adjacent harmonics.
    bands[2, 0:n - 2:2] = 0.5 * tl.amp
    bands[2, 1:n - 2:2] = -0.5 * tl.amp
    return bands


def _select_two_modes(evals, evecs, omega_d, k_trunc):
    """Pick two physically independent eigenpairs of the extended problem.

    Candidates are ordered by |eigenvalue| so the first-zone replicas are
    preferred; a second candidate is accepted only if it is not a
    harmonic-shifted copy of the first.
    """
    for window in (0.75, 1.5, 3.0):
        sel = np.where(np.abs(evals) <= window * omega_d)[0]
        if len(sel) < 2:
            continue
        order = sel[np.argsort(np.abs(evals[sel]), kind="stable")]
        first = order[0]
        u_first = evecs[:, first].reshape(-1, 2).T  # (sigma, k)
        shifted = [_shift_harmonics(u_first, n) for n in (-1, 0, 1)]
        for cand in order[1:]:
            u_cand = evecs[:, cand].reshape(-1, 2).T
            overlap = max(abs(np.vdot(s, u_cand)) for s in shifted)
            if overlap ** 2 < 0.5:
                return (first, cand)
    raise TruncationError(
        "could not isolate two independent Floquet modes; spectrum window "
        "exhausted", math.nan)


def _static_assignment(modes, tl):
    """Match modes to static eigenstates by time-averaged population."""
    _, evecs = static_eigenstates(tl)
    # pops[j, s]: period-averaged population of static state s in mode j.
    pops = np.empty((2, 2))
    for j in range(2):
        for s in range(2):
            amp = np.tensordot(np.conj(evecs[:, s]), modes[j], axes=(0, 0))
            pops[j, s] = float(np.sum(np.abs(amp) ** 2))
    if pops[0, 0] + pops[1, 1] >= pops[0, 1] + pops[1, 0]:
        return (0, 1)
    return (1, 0)


def _assemble_solution(omega_d, eps_raw, modes, k_trunc, tl, method):
    """Fold, order, phase-fix, label, and wrap a pair of raw solutions.

    ``eps_raw`` and ``modes`` are aligned; each mode is an array (2, 2K+1).
    """
    folded = np.array([fold_quasi_energy(e, omega_d) for e in eps_raw])
    canonical = []
    for e_raw, e_fold, u in zip(eps_raw, folded, modes):
        n = int(round((e_raw - e_fold) / omega_d))
        v = _shift_harmonics(u, -n)
        norm = np.linalg.norm(v)
        if norm > 0:
            v = v / norm
        canonical.append(_fix_mode_phase(v))
    order = np.argsort(folded, kind="stable")
    eps = folded[order]
    modes_sorted = np.array([canonical[i] for i in order])
    eps01 = float(eps[1] - eps[0])
    degenerate = min(eps01, omega_d - eps01) < DEGENERACY_FRACTION * omega_d
    if degenerate:
        assignment = _static_assignment(modes_sorted, tl)
        labeling = ("degenerate gap: ordering by folded quasi-energy, "
                    "Fourier-weight similarity to static states recorded")
    else:
        assignment = _static_assignment(modes_sorted, tl)
        names = {0: "ground", 1: "excited"}
        labeling = (f"sorted by folded quasi-energy; static overlap: "
                    f"j0->{names[assignment[0]]}, j1->{names[assignment[1]]}")
    return FloquetSolution(
        omega_d=omega_d, eps=eps, eps01=eps01,
        fourier_modes=modes_sorted, truncation_k=k_trunc,
        labeling=labeling, static_assignment=assignment,
        degenerate=bool(degenerate), method=method)


def _tail_magnitude(modes) -> float:
    """Largest coefficient magnitude on the two outermost harmonics."""
    edge = np.abs(np.concatenate([m[:, :2].ravel() for m in modes] +
                                 [m[:, -2:].ravel() for m in modes]))
    return float(edge.max())


def floquet_solve_extended(tl, k_hint: int | None = None,
                           k_max: int = MAX_TRUNCATION) -> FloquetSolution:
    """Solve the Floquet problem via the extended Fourier eigenproblem.

    The extended Hamiltonian is real symmetric banded; eigenpairs near the
    first Brillouin zone are extracted, folded, and labeled.  The truncation
    order doubles until the outermost-harmonic amplitudes fall below
    ``TAIL_TOL``.

    Raises
    ------
    TruncationError
        If the tail criterion is still violated at ``k_max``.
    """
    if tl.omega_d <= 0:
        raise ValueError("omega_d must be positive")
    k_trunc = k_hint if k_hint is not None else default_truncation(tl)
    k_trunc = max(int(k_trunc), 3)
    while True:
        bands = _extended_bands(tl, k_trunc)
        try:
            evals, evecs = eig_banded(
                bands, lower=True, select="v",
                select_range=(-3.2 * tl.omega_d, 3.2 * tl.omega_d))
        except Exception:
            evals, evecs = eig_banded(bands, lower=True)
        if len(evals) < 2:
            evals, evecs = eig_banded(bands, lower=True)
        ia, ib = _select_two_modes(evals, evecs, tl.omega_d, k_trunc)
        eps_raw = [float(evals[ia]), float(evals[ib])]
        modes = [evecs[:, i].reshape(-1, 2).T.astype(complex) for i in (ia, ib)]
        tail = _tail_magnitude(modes)
        if tail < TAIL_TOL:
            return _assemble_solution(tl.omega_d, eps_raw, modes, k_trunc,
                                      tl, "extended")
        if 2 * k_trunc > k_max:
            raise TruncationError(
                f"Fourier tail {tail:.2e} above {TAIL_TOL} at the truncation "
                f"cap K={k_trunc}", tail)
        k_trunc *= 2


def _propagator_rhs(h_func):
    """RHS of dU/dt = -i H(t) U for a real-embedded 2x2 propagator."""

    def rhs(t, y):
        h = np.asarray(h_func(t), dtype=complex)
        u = (y[:4] + 1j * y[4:]).reshape(2, 2)
        du = -1j * (h @ u)
        return np.concatenate([du.real.ravel(), du.imag.ravel()])

    return rhs


def integrate_propagators(h_func, omega_d: float, times,
                          rtol: float = 1e-12, atol: float = 1e-14):
    """Propagators U(t, 0) of a periodic 2x2 Hamiltonian at requested times.

    ``h_func(t)`` must return a 2x2 Hermitian array.  Returns an array of
    shape (len(times), 2, 2); the last requested time should be the period
    for monodromy use.

    Raises
    ------
    IntegrationError
        If the integrator reports failure or the final propagator departs
        from unitarity by more than 1e-9.
    """
    y0 = np.concatenate([np.eye(2).ravel(), np.zeros(4)])
    t_end = float(times[-1])
    sol = solve_ivp(_propagator_rhs(h_func), (0.0, t_end), y0,
                    method="DOP853", t_eval=times, rtol=rtol, atol=atol,
                    dense_output=False)
    if not sol.success:
        raise IntegrationError(f"propagator integration failed: {sol.message}",
                               math.nan)
    us = (sol.y[:4] + 1j * sol.y[4:]).T.reshape(-1, 2, 2)
    defect = float(np.max(np.abs(us[-1].conj().T @ us[-1] - np.eye(2))))
    if defect > 1e-9:
        raise IntegrationError(
            f"monodromy unitarity defect {defect:.2e} exceeds 1e-9 "
            f"({len(sol.t)} accepted steps)", defect)
    return us


def monodromy_modes(h_func, omega_d: float, n_samples: int = 256,
                    rtol: float = 1e-12, atol: float = 1e-14):
    """Quasi-energies and time-sampled Floquet modes of a generic 2x2 model.

    Returns ``(eps, times, w)`` where ``eps`` is the folded, ascending pair,
    ``times`` has ``n_samples`` points spanning one period (endpoint
    excluded), and ``w[i, j]`` is mode j at ``times[i]`` (phase fixed at
    t = 0 so the largest component is real positive).
    """
    period = 2.0 * math.pi / omega_d
    times = np.linspace(0.0, period, n_samples + 1)
    us = integrate_propagators(h_func, omega_d, times, rtol=rtol, atol=atol)
    monodromy = us[-1]
    t_schur, q = schur(monodromy, output="complex")
    lam = np.diag(t_schur)
    eps_raw = fold_quasi_energy(-np.angle(lam) / period, omega_d)
    order = np.argsort(eps_raw, kind="stable")
    eps = eps_raw[order]
    q = q[:, order]
    phases = np.exp(1j * np.outer(times[:-1], eps))
    w = np.einsum("tab,bj,tj->tja", us[:-1], q, phases)
    for j in range(2):
        w[:, j] = _fix_mode_phase(w[:, j])
    return eps, times[:-1], w


def floquet_solve_monodromy(tl, k_hint: int | None = None,
                            k_max: int = MAX_TRUNCATION,
                            rtol: float = 1e-12,
                            atol: float = 1e-14) -> FloquetSolution:
    """Solve the Floquet problem by one-period monodromy integration.

    Quasi-energies come from the monodromy eigenphases; the periodic modes
    are reconstructed stroboscopically and Fourier transformed on a uniform
    grid.  Folding, ordering, and phase conventions match
    :func:`floquet_solve_extended`.
    """
    if tl.omega_d <= 0:
        raise ValueError("omega_d must be positive")
    k_trunc = k_hint if k_hint is not None else default_truncation(tl)
    k_trunc = max(int(k_trunc), 3)
    while True:
        n_samples = 4 * k_trunc + 16
        eps, times, w = monodromy_modes(
            lambda t: hamiltonian(tl, t), tl.omega_d, n_samples,
            rtol=rtol, atol=atol)
        ks = np.arange(-k_trunc, k_trunc + 1)
        # u_{j sigma k} = (1/N) sum_i w_{j sigma}(t_i) exp(+i k w t_i)
        dft = np.exp(1j * np.outer(ks, tl.omega_d * times)) / len(times)
        modes = [np.einsum("kt,ta->ak", dft, w[:, j]) for j in range(2)]
        tail = _tail_magnitude(modes)
        if tail < TAIL_TOL:
            return _assemble_solution(tl.omega_d, list(eps), modes, k_trunc,
                                      tl, "monodromy")
        if 2 * k_trunc > k_max:
            raise TruncationError(
                f"Fourier tail {tail:.2e} above {TAIL_TOL} at the truncation "
                f"cap K={k_trunc}", tail)
        k_trunc *= 2


def floquet_propagator(tl, t, sol: FloquetSolution | None = None) -> np.ndarray:
    """Evolution operator U(t, 0) assembled from the Floquet solution.

    ``U(t, 0) = sum_j exp(-i eps_j t) |w_j(t)><w_j(0)|``; unitary to 1e-10
    for an adequately truncated solution.
    """
    if sol is None:
        sol = floquet_solve_extended(tl)
    u = np.zeros((2, 2), dtype=complex)
    for j in range(2):
        u += np.exp(-1j * sol.eps[j] * t) * np.outer(
            sol.mode(j, t), np.conj(sol.mode(j, 0.0)))
    return u


def continued_eps(ref: FloquetSolution, sol: FloquetSolution,
                  max_shift: int = 2) -> np.ndarray:
    """Quasi-energies of ``sol`` continued onto the branches of ``ref``.

    Modes of ``sol`` are matched to those of ``ref`` by maximal overlap over
    harmonic shifts, and each matched quasi-energy is unfolded by the shift
    that realizes the overlap.  The result is ordered like ``ref.eps`` and
    lives on the same branch, so finite differences across Brillouin-zone
    folds are meaningful.
    """
    k = max(ref.truncation_k, sol.truncation_k)

    def pad(u, k_from):
        if k_from == k:
            return u
        out = np.zeros((2, 2 * k + 1), dtype=complex)
        out[:, k - k_from:k + k_from + 1] = u
        return out

    shifts = range(-max_shift, max_shift + 1)
    best = np.zeros((2, 2))
    best_n = np.zeros((2, 2), dtype=int)
    u_ref = [pad(ref.fourier_modes[i], ref.truncation_k) for i in range(2)]
    u_sol = [pad(sol.fourier_modes[j], sol.truncation_k) for j in range(2)]
    for i in range(2):
        for j in range(2):
            for n in shifts:
                o = abs(np.vdot(_shift_harmonics(u_ref[i], n), u_sol[j]))
                if o > best[i, j]:
                    best[i, j] = o
                    best_n[i, j] = n
    if best[0, 0] + best[1, 1] >= best[0, 1] + best[1, 0]:
        pairing = (0, 1)
    else:
        pairing = (1, 0)
    out = np.empty(2)
    for i in range(2):
        j = pairing[i]
        out[i] = sol.eps[j] + best_n[i, j] * sol.omega_d
    return out
