"""Quasi-energy dispersions, dynamical sweet-spot manifolds, avoided-crossing
gap asymptotics, and analytic limiting cases.

A dynamical sweet spot is a drive parameter point where the quasi-energy
difference is first-order insensitive to a noise parameter.  The dc (flux
offset) dispersion follows from the identity ``d eps01 / d B = g_{0 phi}``;
the ac (drive amplitude) analogue is ``d eps01 / d A = 2 Re g_{1 phi}``.
Both are cross-checkable against finite differences of the quasi-energy.

Frequencies handed to and returned from the manifold-tracing API are
ordinary frequencies in GHz; internal computation is angular (rad/ns).
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import brentq, minimize_scalar, root
from scipy.special import jv

from .circuit import TWO_PI, StaticSpectrum, TwoLevelParams, two_level_reduce
from .floquet import (DegenerateSolutionError, FloquetSolution,
                      floquet_solve_extended, fold_quasi_energy,
                      monodromy_modes)
from .noise import NoiseModel, Rates, dynamical_rates, filter_weights

# Normalized dispersion magnitude |d eps01 / d phi| / eps01 below which a
# point qualifies as a sweet spot.
ROOT_TOL = 1e-6
# Curve linking: a root extends an existing curve only within this many grid
# cells of the curve head, so manifold cuts are not bridged.
LINK_MAX_CELLS = 2
# Circle gap below this fraction of omega_d marks a sweet point as sitting
# close to a quasi-energy degeneracy.
GAP_FLAG_FRACTION = 1e-2


@dataclasses.dataclass(frozen=True)
class SweetPoint:
    """A located dynamical sweet spot.

    Fluxes are in radians, ``f_d`` and ``eps01`` in GHz.  ``disp_dc`` and
    ``disp_ac`` are the raw dispersions d eps01/d phi in rad/ns per radian.
    ``gap_flag`` marks proximity to a quasi-energy degeneracy; ``refined``
    is False when a 2-D refinement had to be abandoned (singular Jacobian).
    """

    phi_dc: float
    phi_ac: float
    f_d: float
    eps01: float
    kind: str
    disp_dc: float
    disp_ac: float
    gap_flag: bool = False
    rates: Rates | None = None
    refined: bool = True


@dataclasses.dataclass(frozen=True)
class SweetCurve:
    """A polyline of sweet points traced across drive-amplitude rows."""

    points: tuple

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def f_d(self) -> np.ndarray:
        return np.array([p.f_d for p in self.points])

    @property
    def phi_ac(self) -> np.ndarray:
        return np.array([p.phi_ac for p in self.points])


@dataclasses.dataclass(frozen=True)
class GapEstimate:
    """Closed-form avoided-crossing gap at resonance order m.

    ``gap`` and ``fwhm`` are in GHz; ``theta = atan2(delta, bias)`` is the
    static mixing angle.  ``warnings`` lists any regime-validity issues.
    """

    m: int
    regime: str
    gap: float
    theta: float
    fwhm: float
    warnings: tuple = ()


def _solution(tl, sol=None) -> FloquetSolution:
    return floquet_solve_extended(tl) if sol is None else sol


def dispersion_bias(tl: TwoLevelParams, sol: FloquetSolution | None = None
                    ) -> float:
    """d eps01 / d B = g_{0 phi} (rad/ns per rad/ns, dimensionless)."""
    w = filter_weights(_solution(tl, sol))
    return float(np.real(w.g_phi_0()))


def dispersion_amp(tl: TwoLevelParams, sol: FloquetSolution | None = None
                   ) -> float:
    """d eps01 / d A = 2 Re g_{1 phi} (dimensionless)."""
    w = filter_weights(_solution(tl, sol))
    k0 = (len(w.g_phi) - 1) // 2
    return float(2.0 * np.real(w.g_phi[k0 + 1]))


def _chain_factors(tl: TwoLevelParams):
    if tl.provenance is None:
        raise ValueError("flux-direction dispersions require reduction "
                         "provenance (E_L and phi_ge); use dispersion_bias "
                         "or dispersion_amp for the bare directions")
    e_l_ang = TWO_PI * tl.provenance.e_l
    return e_l_ang * tl.provenance.phi_ge


def dispersion_dc(tl: TwoLevelParams, sol: FloquetSolution | None = None
                  ) -> float:
    """d eps01 / d phi_dc = g_{0 phi} * 2 E_L phi_ge (rad/ns per radian)."""
    return dispersion_bias(tl, sol) * 2.0 * _chain_factors(tl)


def dispersion_ac(tl: TwoLevelParams, sol: FloquetSolution | None = None
                  ) -> float:
    """d eps01 / d phi_ac = 2 Re g_{1 phi} * E_L phi_ge (rad/ns per radian)."""
    return dispersion_amp(tl, sol) * _chain_factors(tl)


def _normalized_dispersions(tl: TwoLevelParams):
    """(disp_dc/eps01, disp_ac/eps01, disp_dc, disp_ac, sol); nan if degenerate."""
    sol = floquet_solve_extended(tl)
    if sol.degenerate or sol.eps01 == 0.0:
        return math.nan, math.nan, math.nan, math.nan, sol
    try:
        d_dc = dispersion_dc(tl, sol)
        d_ac = dispersion_ac(tl, sol)
    except DegenerateSolutionError:
        return math.nan, math.nan, math.nan, math.nan, sol
    return d_dc / sol.eps01, d_ac / sol.eps01, d_dc, d_ac, sol


def _map_maybe_parallel(func, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _reduce_at(spec_at_pi, phi_ac, phi_dc, f_d_ghz) -> TwoLevelParams:
    return two_level_reduce(spec_at_pi, phi_ac, phi_dc, TWO_PI * f_d_ghz)


def _row_roots(spec_at_pi, phi_ac, phi_dc, f_grid, tol):
    """Sweet-spot roots of the dc dispersion along one drive-amplitude row."""

    def disp_pair(f):
        tl = _reduce_at(spec_at_pi, phi_ac, phi_dc, f)
        d_norm, _, d_raw, _, _ = _normalized_dispersions(tl)
        return d_norm, d_raw

    pairs = [disp_pair(f) for f in f_grid]
    roots = []
    for i in range(len(f_grid) - 1):
        (norm_a, raw_a), (norm_b, raw_b) = pairs[i], pairs[i + 1]
        if (not (np.isfinite(norm_a) and np.isfinite(norm_b))
                or norm_a * norm_b > 0 or norm_a == 0):
            continue
        try:
            f_root = brentq(lambda f: disp_pair(f)[1],
                            f_grid[i], f_grid[i + 1], xtol=1e-13, rtol=1e-15)
        except (ValueError, DegenerateSolutionError):
            continue
        norm_res, raw_res = disp_pair(f_root)
        # Sign flips across a Brillouin-zone fold are discontinuities, not
        # sweet spots: there the dispersion magnitude stays at its plateau
        # value.  Genuine crossings can be arbitrarily sharp at small drive
        # amplitude, so accept on either the absolute normalized residual or
        # a relative collapse against the bracket endpoints.
        drop = abs(raw_res) <= 1e-3 * min(abs(raw_a), abs(raw_b))
        if np.isfinite(norm_res) and (abs(norm_res) < tol or drop):
            roots.append(float(f_root))
    return roots


def _make_point(spec_at_pi, phi_ac, phi_dc, f_d, kind, model, attach_rates,
                refined=True):
    tl = _reduce_at(spec_at_pi, phi_ac, phi_dc, f_d)
    _, _, d_dc, d_ac, sol = _normalized_dispersions(tl)
    rates = None
    if attach_rates and model is not None and not sol.degenerate:
        rates = dynamical_rates(filter_weights(sol), model)
    gap_flag = sol.gap_circle() < GAP_FLAG_FRACTION * sol.omega_d
    return SweetPoint(phi_dc=phi_dc, phi_ac=phi_ac, f_d=f_d,
                      eps01=sol.eps01 / TWO_PI, kind=kind,
                      disp_dc=d_dc, disp_ac=d_ac,
                      gap_flag=bool(gap_flag), rates=rates, refined=refined)


def trace_dc_manifold(spec_at_pi: StaticSpectrum, phi_dc: float,
                      f_d_ghz, phi_ac, n_f: int = 64, n_ac: int = 16,
                      model: NoiseModel | None = None,
                      attach_rates: bool = False,
                      tol: float = ROOT_TOL,
                      threads: int | None = None) -> list:
    """Trace dc sweet-spot curves over a (drive frequency, amplitude) window.

    For each drive-amplitude row the sign changes of the dc dispersion along
    the frequency axis are bracketed and refined by bisection; accepted
    roots are linked across rows into curves by nearest-neighbor
    continuation with a maximum jump of ``LINK_MAX_CELLS`` grid cells, so
    manifold cuts are preserved.

    Parameters
    ----------
    spec_at_pi:
        Static spectrum at half flux (reduction expansion point).
    phi_dc:
        Fixed dc flux in radians.
    f_d_ghz:
        (min, max) drive frequency window in GHz.
    phi_ac:
        (min, max) drive amplitude window in radians.
    n_f, n_ac:
        Grid resolution along each axis.

    Returns
    -------
    list of SweetCurve ordered by first appearance.
    """
    f_grid = np.linspace(f_d_ghz[0], f_d_ghz[1], n_f)
    ac_grid = np.linspace(phi_ac[0], phi_ac[1], n_ac)
    df = (f_d_ghz[1] - f_d_ghz[0]) / max(n_f - 1, 1)

    row_roots = _map_maybe_parallel(
        lambda ac: _row_roots(spec_at_pi, ac, phi_dc, f_grid, tol),
        list(ac_grid), threads)

    # Link roots row by row; curves are dicts until finalized.
    open_curves: list[dict] = []
    for row, (ac, roots) in enumerate(zip(ac_grid, row_roots)):
        for f_root in sorted(roots):
            best = None
            best_dist = math.inf
            for curve in open_curves:
                if row - curve["last_row"] > LINK_MAX_CELLS:
                    continue
                if curve["last_row"] == row:
                    continue
                dist = abs(f_root - curve["last_f"])
                if dist <= LINK_MAX_CELLS * df and dist < best_dist:
                    best, best_dist = curve, dist
            if best is None:
                open_curves.append({"rows": [row], "fs": [f_root],
                                    "acs": [ac], "last_row": row,
                                    "last_f": f_root})
            else:
                best["rows"].append(row)
                best["fs"].append(f_root)
                best["acs"].append(ac)
                best["last_row"] = row
                best["last_f"] = f_root

    curves = []
    for curve in open_curves:
        jobs = list(zip(curve["acs"], curve["fs"]))
        points = _map_maybe_parallel(
            lambda job: _make_point(spec_at_pi, job[0], phi_dc, job[1], "dc",
                                    model, attach_rates),
            jobs, threads)
        curves.append(SweetCurve(points=tuple(points)))
    return curves


def find_doubly_sweet(spec_at_pi: StaticSpectrum, curves,
                      model: NoiseModel | None = None,
                      attach_rates: bool = False,
                      tol: float = ROOT_TOL) -> list:
    """Doubly sweet points: zeros of the ac dispersion along traced dc curves.

    Sign changes of the ac dispersion along each curve seed a 2-D root
    solve on (frequency, amplitude) for both normalized dispersions.  A
    refinement that leaves the seeding segment's neighborhood (the solver
    escaping to a different basin) or fails (singular Jacobian) is
    reported at the seed with ``refined=False``.  Points that coincide
    after refinement are returned once.
    """
    points = []
    for curve in curves:
        pts = curve.points
        for i in range(len(pts) - 1):
            a, b = pts[i].disp_ac, pts[i + 1].disp_ac
            if not (np.isfinite(a) and np.isfinite(b)) or a * b > 0:
                continue
            phi_dc = pts[i].phi_dc

            def both(x):
                tl = _reduce_at(spec_at_pi, x[1], phi_dc, x[0])
                n_dc, n_ac, _, _, _ = _normalized_dispersions(tl)
                if not (np.isfinite(n_dc) and np.isfinite(n_ac)):
                    return [1.0, 1.0]
                return [n_dc, n_ac]

            x0 = [0.5 * (pts[i].f_d + pts[i + 1].f_d),
                  0.5 * (pts[i].phi_ac + pts[i + 1].phi_ac)]
            seg_f = abs(pts[i + 1].f_d - pts[i].f_d)
            seg_ac = abs(pts[i + 1].phi_ac - pts[i].phi_ac)
            sol = root(both, x0, method="hybr", tol=1e-12)
            converged = sol.success and max(abs(v) for v in both(sol.x)) < tol
            in_basin = converged and (
                abs(float(sol.x[0]) - x0[0]) <= 3.0 * seg_f + 1e-9 and
                abs(float(sol.x[1]) - x0[1]) <= 3.0 * seg_ac + 1e-9)
            if in_basin:
                points.append(_make_point(
                    spec_at_pi, float(sol.x[1]), phi_dc, float(sol.x[0]),
                    "doubly", model, attach_rates))
            else:
                points.append(_make_point(
                    spec_at_pi, x0[1], phi_dc, x0[0], "doubly", model,
                    attach_rates, refined=False))
    unique = []
    for p in points:
        if not any(p.refined == q.refined and
                   abs(p.f_d - q.f_d) <= 1e-5 * max(abs(q.f_d), 1e-9) and
                   abs(p.phi_ac - q.phi_ac) <= 1e-5 * max(abs(q.phi_ac), 1e-9)
                   for q in unique):
            unique.append(p)
    return unique


def gap_weak(m: int, tl: TwoLevelParams) -> GapEstimate:
    """Leading-order avoided-crossing gap in the weak-drive regime.

    ``gap_m = A^m |sin(theta) cos(theta)^(m-1)| / ((m-1)! omega_d^(m-1))``
    near the resonance ``m omega_d = omega_ge``.
    """
    if m < 1:
        raise ValueError("resonance order m must be >= 1")
    theta = tl.mixing_angle
    gap = (abs(tl.amp) ** m *
           abs(math.sin(theta) * math.cos(theta) ** (m - 1)) /
           (math.factorial(m - 1) * tl.omega_d ** (m - 1)))
    warnings = []
    if abs(tl.amp) > 0.3 * tl.omega_ge:
        warnings.append("drive amplitude outside the weak-drive regime")
    if abs(m * tl.omega_d - tl.omega_ge) > 0.25 * tl.omega_ge:
        warnings.append("drive frequency far from the m-th subharmonic "
                        "resonance")
    return GapEstimate(m=m, regime="weak", gap=gap / TWO_PI, theta=theta,
                       fwhm=fwhm_width(m, gap / TWO_PI),
                       warnings=tuple(warnings))


def gap_strong(m: int, tl: TwoLevelParams) -> GapEstimate:
    """Avoided-crossing gap in the strong-drive regime.

    ``gap_m = delta |J_m(2A/omega_d)|`` near the resonance
    ``m omega_d = B``; the gap closes at the Bessel zeros (manifold cuts).
    """
    if m < 1:
        raise ValueError("resonance order m must be >= 1")
    gap = abs(tl.delta) * abs(jv(m, 2.0 * tl.amp / tl.omega_d))
    warnings = []
    if abs(tl.delta) > 0.1 * tl.omega_d:
        warnings.append("splitting not small against the drive frequency")
    if abs(tl.amp) < tl.omega_ge:
        warnings.append("drive amplitude below the strong-drive regime")
    return GapEstimate(m=m, regime="strong", gap=gap / TWO_PI,
                       theta=tl.mixing_angle,
                       fwhm=fwhm_width(m, gap / TWO_PI),
                       warnings=tuple(warnings))


def fwhm_width(m: int, gap0_ghz: float) -> float:
    """Full width at half minimum of the dispersion dip, 2 gap0 / (sqrt(3) m)."""
    return 2.0 * gap0_ghz / (math.sqrt(3.0) * m)


def measure_gap(tl: TwoLevelParams, f_window_ghz, n_scan: int = 41):
    """Numerically extracted avoided-crossing gap within a frequency window.

    Minimizes the circle distance between the quasi-energies over the drive
    frequency.  Returns ``(gap_ghz, f_d_ghz)`` at the minimum.
    """

    def gap_of(f):
        sol = floquet_solve_extended(tl.replace(omega_d=TWO_PI * f))
        return sol.gap_circle()

    fs = np.linspace(f_window_ghz[0], f_window_ghz[1], n_scan)
    vals = np.array([gap_of(f) for f in fs])
    i = int(np.argmin(vals))
    lo = fs[max(i - 1, 0)]
    hi = fs[min(i + 1, n_scan - 1)]
    res = minimize_scalar(gap_of, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.fun) / TWO_PI, float(res.x)


def measure_fwhm(tl: TwoLevelParams, f_window_ghz, n_scan: int = 201):
    """Numeric full width at half minimum of |d eps01/d B| vs drive frequency.

    Scans the window, locates the dispersion zero, and measures the distance
    between the points where the magnitude recovers to half its maximum
    within the window on either side.  Returns ``(width_ghz, f_root_ghz)``.
    """

    def disp_of(f):
        sol = floquet_solve_extended(tl.replace(omega_d=TWO_PI * f))
        if sol.degenerate:
            return math.nan
        return dispersion_bias(tl.replace(omega_d=TWO_PI * f), sol)

    fs = np.linspace(f_window_ghz[0], f_window_ghz[1], n_scan)
    vals = np.array([disp_of(f) for f in fs])
    finite = np.isfinite(vals)
    sign_change = np.where(finite[:-1] & finite[1:] &
                           (vals[:-1] * vals[1:] < 0))[0]
    if len(sign_change) == 0:
        raise ValueError("no dispersion zero inside the window")
    i = int(sign_change[len(sign_change) // 2])
    f_root = brentq(disp_of, fs[i], fs[i + 1], xtol=1e-13)
    mags = np.abs(vals)
    half = 0.5 * np.nanmax(mags)

    def crossing(side):
        idx = np.arange(len(fs))
        mask = idx < i if side < 0 else idx > i + 1
        cand = idx[mask & finite]
        ordered = cand[::-1] if side < 0 else cand
        prev = None
        for j in ordered:
            if mags[j] >= half:
                if prev is None:
                    return fs[j]
                # Linear interpolation between the half-crossing neighbors.
                f0, f1 = fs[prev], fs[j]
                m0, m1 = mags[prev], mags[j]
                return f0 + (half - m0) * (f1 - f0) / (m1 - m0)
            prev = j
        raise ValueError("dispersion does not recover to half maximum "
                         "inside the window")

    width = abs(crossing(+1) - crossing(-1))
    return float(width), float(f_root)


def limit_frequency_modulation(coeffs, lam0: float, omega_d: float,
                               d_lam: float = 1e-6,
                               n_samples: int = 256) -> dict:
    """Purely longitudinal modulation: analytic values vs generic solver.

    ``coeffs(lam)`` returns the Fourier coefficients of the modulated
    splitting, ``Omega(t) = sum_k Omega_k exp(-i k omega_d t)``, as an array
    over k = -K..K with ``Omega_{-k} = conj(Omega_k)``.  For this model the
    quasi-energy difference equals the time-averaged splitting and the
    dephasing weights are half the coefficient slopes:
    ``g_{k phi} = (1/2) d Omega_k / d lam``.

    Returns a dict with analytic ``eps01`` and ``g_phi`` alongside
    ``eps01_numeric`` and ``g_phi_numeric`` from the monodromy machinery.
    """
    c0 = np.asarray(coeffs(lam0), dtype=complex)
    k_trunc = (len(c0) - 1) // 2
    if not np.allclose(c0, np.conj(c0[::-1]), atol=1e-12):
        raise ValueError("coefficients must satisfy the reality condition "
                         "Omega_{-k} = conj(Omega_k)")
    ks = np.arange(-k_trunc, k_trunc + 1)
    eps01 = float(np.real(c0[k_trunc]))
    dc = (np.asarray(coeffs(lam0 + d_lam), dtype=complex) -
          np.asarray(coeffs(lam0 - d_lam), dtype=complex)) / (2.0 * d_lam)
    g_phi = 0.5 * dc

    sx = np.array([[0.0, 1.0], [1.0, 0.0]])

    def splitting(t):
        return float(np.real(np.sum(c0 * np.exp(-1j * ks * omega_d * t))))

    def h_func(t):
        return 0.5 * splitting(t) * sx

    eps, times, w = monodromy_modes(h_func, omega_d, n_samples)
    # The modes are the fixed sx eigenstates; orient by overlap so that the
    # excited branch is the +1 eigenstate (positive average splitting).
    x_plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    j_up = int(np.argmax(np.abs(w[0] @ x_plus)))
    diff = eps[j_up] - eps[1 - j_up]
    n_wind = int(abs(eps01) / omega_d) + 2
    candidates = diff + omega_d * np.arange(-n_wind, n_wind + 1)
    eps01_numeric = float(candidates[np.argmin(np.abs(candidates - eps01))])

    # Generic dephasing weights of the lambda direction.
    cp = np.asarray(coeffs(lam0 + d_lam), dtype=complex)
    cm = np.asarray(coeffs(lam0 - d_lam), dtype=complex)

    def d_split(t):
        return float(np.real(np.sum((cp - cm) / (2 * d_lam) *
                                    np.exp(-1j * ks * omega_d * t))))

    sig = np.array([0.5 * d_split(t) * sx for t in times])
    diag = np.einsum("tja,tab,tjb->tj", np.conj(w), sig, w)
    f_t = 0.5 * (diag[:, j_up] - diag[:, 1 - j_up])
    phase = np.exp(1j * np.outer(ks, omega_d * times))
    g_phi_numeric = phase @ f_t / len(times)
    return {"eps01": eps01, "g_phi": g_phi,
            "eps01_numeric": eps01_numeric,
            "g_phi_numeric": g_phi_numeric}


def limit_spin_locking(delta_omega: float, d: float, slope: float,
                       spectrum, omega_d: float | None = None,
                       n_samples: int = 128) -> dict:
    """Resonantly driven (spin-locking) limit: analytic rates vs generic.

    In the rotating frame the Hamiltonian is static,
    ``H = (delta_omega/2) sx + (d/2) sz`` with Rabi splitting
    ``Omega_R = sqrt(delta_omega^2 + d^2)``; low-frequency noise enters
    through the splitting with the given slope.  Analytic rates:
    ``gamma_phi = (1/2) [slope cos(theta)]^2 S(0)`` and
    ``gamma_-+ = (1/4) [slope sin(theta)]^2 S(+-Omega_R)`` with
    ``theta = atan2(d, delta_omega)``.

    The numeric values re-derive the same quantities from the generic
    Floquet machinery applied to the rotating-frame Hamiltonian.
    """
    omega_r = math.hypot(delta_omega, d)
    theta = math.atan2(d, delta_omega)
    analytic = {
        "eps01": omega_r,
        "gamma_phi": 0.5 * (slope * math.cos(theta)) ** 2 * spectrum(0.0),
        "gamma_minus": 0.25 * (slope * math.sin(theta)) ** 2
                       * spectrum(omega_r),
        "gamma_plus": 0.25 * (slope * math.sin(theta)) ** 2
                      * spectrum(-omega_r),
    }
    if omega_d is None:
        omega_d = max(4.0 * omega_r, 1.0)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    h = 0.5 * delta_omega * sx + 0.5 * d * sz

    eps, times, w = monodromy_modes(lambda t: h, omega_d, n_samples)
    eps01_numeric = float(eps[1] - eps[0])
    sig = 0.5 * slope * sx
    diag = np.einsum("tja,ab,tjb->tj", np.conj(w), sig, w)
    g0_phi = float(np.real(np.mean(0.5 * (diag[:, 1] - diag[:, 0]))))
    cross = np.einsum("ta,ab,tb->t", np.conj(w[:, 1]), sig, w[:, 0])
    g0_plus = complex(np.mean(cross))
    numeric = {
        "eps01": eps01_numeric,
        "gamma_phi": 2.0 * g0_phi ** 2 * spectrum(0.0),
        "gamma_minus": abs(g0_plus) ** 2 * spectrum(eps01_numeric),
        "gamma_plus": abs(g0_plus) ** 2 * spectrum(-eps01_numeric),
    }
    return {"analytic": analytic, "numeric": numeric}


def general_sweet_condition(h_family, lam0: float, omega_d: float,
                            d_lam: float = 1e-6, n_samples: int = 512,
                            rtol: float = 1e-12, atol: float = 1e-14) -> dict:
    """Dephasing weight vs quasi-energy slope for a generic driven family.

    ``h_family(lam, t)`` must return a 2x2 Hermitian array, periodic in t
    with angular frequency ``omega_d``.  Computes independently

    - ``g_phi_0``: the period-averaged half-difference of the diagonal
      matrix elements of dH/d lam in the Floquet basis, and
    - ``eps01_slope``: the central finite difference of the quasi-energy
      difference over lam (branch-matched across Brillouin folds),

    which are related by ``g_phi_0 = eps01_slope / 2``.  Note the flux-bias
    special case: with lam = B one has dH/dB = sz/2, so ``2 g_phi_0``
    equals the sz-convention weight g_{0 phi} and the slope equals it.
    """
    period = TWO_PI / omega_d

    eps_c, times, w_c = monodromy_modes(
        lambda t: h_family(lam0, t), omega_d, n_samples, rtol, atol)

    sig = np.array([(np.asarray(h_family(lam0 + d_lam, t), dtype=complex) -
                     np.asarray(h_family(lam0 - d_lam, t), dtype=complex))
                    / (2.0 * d_lam) for t in times])
    diag = np.einsum("tja,tab,tjb->tj", np.conj(w_c), sig, w_c)
    g_phi_0 = complex(np.mean(0.5 * (diag[:, 1] - diag[:, 0])))

    def matched_eps(lam):
        eps_p, _, w_p = monodromy_modes(
            lambda t: h_family(lam, t), omega_d, n_samples, rtol, atol)
        o = np.abs(np.einsum("ja,ia->ji", np.conj(w_p[0]), w_c[0]))
        perm = (0, 1) if o[0, 0] + o[1, 1] >= o[0, 1] + o[1, 0] else (1, 0)
        out = np.empty(2)
        for i in range(2):
            e = eps_p[perm[i]]
            out[i] = eps_c[i] + math.remainder((e - eps_c[i]) * period,
                                               TWO_PI) / period
        return out

    e_plus = matched_eps(lam0 + d_lam)
    e_minus = matched_eps(lam0 - d_lam)
    slope = float((e_plus[1] - e_plus[0] - e_minus[1] + e_minus[0])
                  / (2.0 * d_lam))
    return {"g_phi_0": g_phi_0, "eps01_slope": slope}
