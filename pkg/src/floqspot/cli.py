"""Command-line interface: JSON config ingestion, subcommand dispatch,
parallel sweep execution, and deterministic serialization.

Subcommands: ``spectrum``, ``rates``, ``sweet-scan``, ``sweet-trace``,
``gap-check``, ``gate``, ``two-qubit``, ``limits``.  Common flags:
``--config <path>``, ``--out <path>``, ``--threads <n>``, ``--seed <n>``,
``--strict``.

Exit codes: 2 for config/schema violations (with the offending field path),
3 for module validity errors (ValueError family), 4 for numerical failures
(RuntimeError family).

Every run produces a result envelope (JSON) with a config echo, provenance
(code version and seed, deliberately no timestamp so reruns are
byte-identical), an inline payload or a CSV reference, and all module
warnings.  Tabular payloads are written next to the envelope with a
``.csv`` extension: header row, 17 significant digits, UTF-8, LF line
endings.  All files are written atomically (temp file plus rename).
Fluxes in configs are in units of 2 pi (``*_over_2pi``), frequencies in
GHz, durations in ns.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .circuit import FluxoniumParams, TwoLevelParams, TWO_PI, \
    diagonalize_fluxonium, two_level_reduce
from .dynamics import (OpenSystemConfig, QubitSpec, TwoQubitSystem,
                       adiabatic_map, calibrate_gate, manifold_point,
                       phase_gate, plan_resonant_gate_point, rabi_transfer,
                       two_qubit_fidelity_map, two_qubit_gate,
                       two_qubit_interaction_picture, two_qubit_open_report)
from .floquet import floquet_solve_extended
from .noise import NoiseModel, dynamical_rates, filter_weights, static_rates
from .sweetspot import (find_doubly_sweet, gap_strong, gap_weak,
                        general_sweet_condition, limit_frequency_modulation,
                        limit_spin_locking, measure_fwhm, measure_gap,
                        trace_dc_manifold)

SCHEMA_VERSION = 1
CODE_VERSION = "0.1.0"


class ConfigError(Exception):
    """Schema violation; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _node(cfg: dict, path: str, required: bool = True):
    cur = cfg
    walked = []
    for part in path.split("."):
        walked.append(part)
        if not isinstance(cur, dict) or part not in cur:
            if required:
                raise ConfigError(".".join(walked), "missing required field")
            return None
        cur = cur[part]
    return cur


def _number(cfg: dict, path: str, required: bool = True,
            default: float | None = None, minimum: float | None = None):
    val = _node(cfg, path, required)
    if val is None:
        return default
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(path, f"expected a number, got {type(val).__name__}")
    if minimum is not None and val < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return float(val)


def _integer(cfg: dict, path: str, required: bool = True,
             default: int | None = None, minimum: int | None = None):
    val = _node(cfg, path, required)
    if val is None:
        return default
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(path, "expected an integer")
    if minimum is not None and val < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return int(val)


def _axis(cfg: dict, path: str, required: bool = True):
    """A sweep axis: either a scalar or {min, max, n} -> ndarray."""
    val = _node(cfg, path, required)
    if val is None:
        return None
    if isinstance(val, (int, float)) and not isinstance(val, bool):
        return np.array([float(val)])
    if isinstance(val, dict):
        lo = _number(val, "min")
        hi = _number(val, "max")
        n = _integer(val, "n")
        if n < 2:
            raise ConfigError(f"{path}.n", "grids need n >= 2")
        if not lo < hi:
            raise ConfigError(f"{path}.min", "grids need min < max")
        return np.linspace(lo, hi, n)
    raise ConfigError(path, "expected a number or {min, max, n}")


def _circuit(cfg: dict, path: str = "circuit") -> FluxoniumParams:
    node = _node(cfg, path)
    if not isinstance(node, dict):
        raise ConfigError(path, "expected an object")
    kwargs = {}
    basis = _integer(node, "basis_dim", required=False)
    if basis is not None:
        kwargs["basis_dim"] = basis
    return FluxoniumParams(e_c=_number(node, "e_c"),
                           e_j=_number(node, "e_j"),
                           e_l=_number(node, "e_l"), **kwargs)


def _noise_model(cfg: dict, phi_ge: float, params: FluxoniumParams,
                 path: str = "noise") -> NoiseModel | None:
    node = _node(cfg, path, required=False)
    if node is None:
        return None
    if not isinstance(node, dict):
        raise ConfigError(path, "expected an object")
    kwargs = {}
    temp = _number(node, "temperature_k", required=False)
    if temp is not None:
        kwargs["temperature"] = temp
    lnf = _number(node, "ln_factor", required=False)
    if lnf is not None:
        kwargs["ln_factor"] = lnf
    if "a_f" in node or "a_d" in node:
        return NoiseModel(a_f=_number(node, "a_f"),
                          a_d=_number(node, "a_d"), **kwargs)
    return NoiseModel.from_loss_tangents(
        phi_ge, params.e_c, params.e_l,
        tan_delta_c=_number(node, "tan_delta_c", required=False,
                            default=1.1e-6),
        delta_f=_number(node, "delta_f", required=False, default=1.8e-6),
        **kwargs)


def _drive(cfg: dict, path: str = "drive"):
    node = _node(cfg, path)
    if not isinstance(node, dict):
        raise ConfigError(path, "expected an object")
    phi_dc = _number(node, "phi_dc_over_2pi") * TWO_PI
    phi_ac_axis = _axis(node, "phi_ac_over_2pi", required=False)
    if phi_ac_axis is None:
        phi_ac_axis = np.array([0.0])
    f_axis = _axis(node, "f_d_ghz", required=False)
    return phi_dc, phi_ac_axis * TWO_PI, f_axis


def _jsonable(obj):
    """Recursively convert payload values to JSON-serializable types."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _atomic_write(path: str, data: bytes):
    tmp = path + ".tmp"
    with open(tmp, "wb") as handle:
        handle.write(data)
    os.replace(tmp, path)


def _csv_bytes(header, rows) -> bytes:
    def cell(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return f"{float(v):.17g}"

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return ("\n".join(lines) + "\n").encode("utf-8")


def sweep_execute(items, task, threads: int, strict: bool):
    """Evaluate task over items; results stay in item order.

    Returns a list of (status, value) with status "ok" or the exception
    class name (non-strict mode); in strict mode exceptions propagate.
    """

    def safe(item):
        if strict:
            return ("ok", task(item))
        try:
            return ("ok", task(item))
        except Exception as exc:  # noqa: BLE001 - marker rows by contract
            return (type(exc).__name__, None)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(safe, items))
    return [safe(item) for item in items]


def _reduce_point(spec_pi, phi_ac, phi_dc, f_ghz) -> TwoLevelParams:
    return two_level_reduce(spec_pi, phi_ac, phi_dc, TWO_PI * f_ghz)


def _rates_payload(rates):
    return {
        "t1_us": rates.t1,
        "t_phi_us": rates.t_phi,
        "gamma_plus_per_us": rates.gamma_plus,
        "gamma_minus_per_us": rates.gamma_minus,
        "gamma_phi_per_us": rates.gamma_phi,
        "breakdown": list(rates.breakdown),
        "flags": list(rates.flags),
    }


def cmd_spectrum(config, args):
    params = _circuit(config)
    phi_dc, phi_ac_axis, f_axis = _drive(config)
    spec_pi = diagonalize_fluxonium(params, math.pi)
    spec_here = diagonalize_fluxonium(params, phi_dc)
    payload = {
        "static": {
            "energies_ghz": spec_pi.energies,
            "phi_ge": spec_pi.phi_ge,
            "omega_ge_ghz": spec_pi.omega_ge,
            "parity_labels": list(spec_pi.parity_labels),
            "basis_dim_used": spec_pi.basis_dim_used,
        },
        "energies_at_phi_dc_ghz": spec_here.energies,
    }
    warnings = []
    if f_axis is not None:
        tl = _reduce_point(spec_pi, float(phi_ac_axis[0]), phi_dc,
                           float(f_axis[0]))
        warnings.extend(tl.warnings)
        sol = floquet_solve_extended(tl)
        payload["two_level"] = {
            "delta_rad_ns": tl.delta, "amp_rad_ns": tl.amp,
            "bias_rad_ns": tl.bias, "omega_d_rad_ns": tl.omega_d,
            "omega_ge_rad_ns": tl.omega_ge,
        }
        payload["floquet"] = {
            "eps_rad_ns": sol.eps, "eps01_rad_ns": sol.eps01,
            "eps01_ghz": sol.eps01 / TWO_PI,
            "truncation_k": sol.truncation_k, "labeling": sol.labeling,
            "static_assignment": list(sol.static_assignment),
            "degenerate": sol.degenerate, "method": sol.method,
        }
    return payload, None, warnings


def cmd_rates(config, args):
    params = _circuit(config)
    phi_dc, phi_ac_axis, f_axis = _drive(config)
    spec_pi = diagonalize_fluxonium(params, math.pi)
    model = _noise_model(config, spec_pi.phi_ge, params)
    if model is None:
        raise ConfigError("noise", "missing required field")
    warnings = []
    if f_axis is None:
        spec_here = diagonalize_fluxonium(params, phi_dc)
        rates = static_rates(spec_here, model)
        payload = {"mode": "static", **_rates_payload(rates)}
    else:
        tl = _reduce_point(spec_pi, float(phi_ac_axis[0]), phi_dc,
                           float(f_axis[0]))
        warnings.extend(tl.warnings)
        sol = floquet_solve_extended(tl)
        w = filter_weights(sol)
        rates = dynamical_rates(w, model)
        payload = {
            "mode": "dynamical",
            "eps01_ghz": sol.eps01 / TWO_PI,
            **_rates_payload(rates),
            "weights": {
                "w_plus": w.weight_plus, "w_minus": w.weight_minus,
                "w_phi": w.weight_phi,
                "conservation_sum": w.conservation_sum,
                "g_phi_0": complex(w.g_phi_0()),
            },
        }
    warnings.extend(rates.flags)
    return payload, None, warnings


def cmd_sweet_scan(config, args):
    params = _circuit(config)
    phi_dc, phi_ac_axis, f_axis = _drive(config)
    if f_axis is None or len(f_axis) < 2:
        raise ConfigError("drive.f_d_ghz", "sweet-scan needs a frequency grid")
    if len(phi_ac_axis) < 2:
        raise ConfigError("drive.phi_ac_over_2pi",
                          "sweet-scan needs an amplitude grid")
    spec_pi = diagonalize_fluxonium(params, math.pi)
    model = _noise_model(config, spec_pi.phi_ge, params)
    if model is None:
        raise ConfigError("noise", "missing required field")

    items = [(float(ac), float(f)) for ac in phi_ac_axis for f in f_axis]

    def task(item):
        ac, f = item
        tl = _reduce_point(spec_pi, ac, phi_dc, f)
        sol = floquet_solve_extended(tl)
        rates = dynamical_rates(filter_weights(sol), model)
        return rates.t_phi, rates.t1

    results = sweep_execute(items, task, args.threads, args.strict)
    rows = []
    failed = {}
    for (ac, f), (status, value) in zip(items, results):
        if status == "ok":
            rows.append([f, ac / TWO_PI, value[0], value[1]])
        else:
            marker = f"error:{status}"
            rows.append([f, ac / TWO_PI, marker, marker])
            failed[status] = failed.get(status, 0) + 1
    warnings = [f"{n} grid points failed: {name}"
                for name, n in sorted(failed.items())]
    header = ["f_d_ghz", "phi_ac_over_2pi", "t_phi_us", "t1_us"]
    payload = {"rows": len(rows),
               "grid": {"f_d_ghz": len(f_axis),
                        "phi_ac_over_2pi": len(phi_ac_axis)}}
    return payload, (header, rows), warnings


def cmd_sweet_trace(config, args):
    params = _circuit(config)
    phi_dc, phi_ac_axis, f_axis = _drive(config)
    if f_axis is None or len(f_axis) < 2 or len(phi_ac_axis) < 2:
        raise ConfigError("drive", "sweet-trace needs f_d_ghz and "
                                   "phi_ac_over_2pi grids")
    spec_pi = diagonalize_fluxonium(params, math.pi)
    model = _noise_model(config, spec_pi.phi_ge, params)
    curves = trace_dc_manifold(
        spec_pi, phi_dc, (float(f_axis[0]), float(f_axis[-1])),
        (float(phi_ac_axis[0]), float(phi_ac_axis[-1])),
        n_f=len(f_axis), n_ac=len(phi_ac_axis), model=model,
        attach_rates=model is not None, threads=args.threads)

    def point_dict(p):
        out = {"phi_dc_over_2pi": p.phi_dc / TWO_PI,
               "phi_ac_over_2pi": p.phi_ac / TWO_PI,
               "f_d_ghz": p.f_d, "eps01_ghz": p.eps01, "kind": p.kind,
               "disp_dc": p.disp_dc, "disp_ac": p.disp_ac,
               "gap_flag": p.gap_flag, "refined": p.refined}
        if p.rates is not None:
            out["t1_us"] = p.rates.t1
            out["t_phi_us"] = p.rates.t_phi
        return out

    payload = {"curves": [{"points": [point_dict(p) for p in c.points]}
                          for c in curves]}
    if _node(config, "doubly_sweet", required=False):
        doubly = find_doubly_sweet(spec_pi, curves, model=model,
                                   attach_rates=model is not None)
        payload["doubly_sweet"] = [point_dict(p) for p in doubly]
    return payload, None, []


def cmd_gap_check(config, args):
    params = _circuit(config)
    phi_dc, phi_ac_axis, f_axis = _drive(config)
    if f_axis is None:
        raise ConfigError("drive.f_d_ghz", "missing required field")
    m = _integer(config, "gap.m", minimum=1)
    regime = _node(config, "gap.regime")
    if regime not in ("weak", "strong"):
        raise ConfigError("gap.regime", "expected 'weak' or 'strong'")
    spec_pi = diagonalize_fluxonium(params, math.pi)
    tl = _reduce_point(spec_pi, float(phi_ac_axis[0]), phi_dc,
                       float(f_axis[0]))
    est = gap_weak(m, tl) if regime == "weak" else gap_strong(m, tl)
    center = (tl.omega_ge if regime == "weak" else abs(tl.bias)) / m / TWO_PI
    half = max(4.0 * est.gap, 0.02 * center)
    window = (_number(config, "gap.window_lo_ghz", required=False,
                      default=center - half),
              _number(config, "gap.window_hi_ghz", required=False,
                      default=center + half))
    gap_num, f_min = measure_gap(tl, window)
    payload = {
        "m": m, "regime": regime,
        "analytic": {"gap_ghz": est.gap, "fwhm_ghz": est.fwhm,
                     "theta": est.theta},
        "numeric": {"gap_ghz": gap_num, "f_d_ghz": f_min},
        "rel_error": abs(gap_num - est.gap) / est.gap if est.gap > 0
        else math.nan,
    }
    if _node(config, "gap.measure_fwhm", required=False):
        width, f_root = measure_fwhm(tl, window)
        payload["numeric"]["fwhm_ghz"] = width
        payload["numeric"]["f_root_ghz"] = f_root
    return payload, None, list(est.warnings)


def _tl_from_config(config):
    params = _circuit(config)
    phi_dc, phi_ac_axis, f_axis = _drive(config)
    if f_axis is None:
        raise ConfigError("drive.f_d_ghz", "missing required field")
    spec_pi = diagonalize_fluxonium(params, math.pi)
    tl = _reduce_point(spec_pi, float(phi_ac_axis[0]), phi_dc,
                       float(f_axis[0]))
    return spec_pi, tl


def _gate_result_payload(res):
    return {"fidelity": res.fidelity, "target": res.target,
            "defect": res.defect,
            "unitary": [[complex(v) for v in row] for row in res.unitary],
            "metadata": res.metadata}


def cmd_gate(config, args):
    protocol = args.protocol or _node(config, "gate.protocol")
    if protocol not in ("rabi", "x", "sqrt-x", "s", "t", "ramp"):
        raise ConfigError("gate.protocol",
                          "expected one of rabi, x, sqrt-x, s, t, ramp")
    spec_pi, tl = _tl_from_config(config)
    warnings = list(tl.warnings)
    gate_cfg = _node(config, "gate", required=False) or {}

    def secondary_amp(required=True):
        d = _number(gate_cfg, "d_rabi_rad_ns", required=False)
        if d is None:
            d_phi = _number(gate_cfg, "d_phi_ac_over_2pi", required=required)
            if d_phi is None:
                return None
            chain = TWO_PI * tl.provenance.e_l * tl.provenance.phi_ge
            d = d_phi * TWO_PI * chain
        return d

    if protocol == "rabi":
        d_rabi = secondary_amp()
        duration = _number(gate_cfg, "duration_ns", minimum=0.0)
        sol = floquet_solve_extended(tl)
        freq_axis = _axis(gate_cfg, "tone_freq_ghz", required=False)
        if freq_axis is not None and len(freq_axis) > 1:
            def task(f):
                res = rabi_transfer(tl, d_rabi, TWO_PI * float(f), duration,
                                    n_report=257)
                return float(np.max(res.populations[:, 1])), \
                    float(res.populations[-1, 1])

            results = sweep_execute(list(freq_axis), task, args.threads,
                                    args.strict)
            rows = []
            for f, (status, val) in zip(freq_axis, results):
                if status == "ok":
                    rows.append([float(f), val[0], val[1]])
                else:
                    rows.append([float(f), f"error:{status}",
                                 f"error:{status}"])
            header = ["tone_freq_ghz", "max_transfer", "final_transfer"]
            payload = {"eps01_ghz": sol.eps01 / TWO_PI, "d_rabi": d_rabi,
                       "duration_ns": duration}
            return payload, (header, rows), warnings
        freq = (TWO_PI * float(freq_axis[0]) if freq_axis is not None
                else sol.eps01)
        res = rabi_transfer(tl, d_rabi, freq, duration, n_report=257)
        header = ["t_ns", "pop_w0", "pop_w1"]
        rows = [[t, p0, p1] for t, (p0, p1)
                in zip(res.times, res.populations)]
        payload = {"eps01_ghz": sol.eps01 / TWO_PI, "d_rabi": d_rabi,
                   "tone_freq_rad_ns": freq,
                   "max_transfer": float(np.max(res.populations[:, 1]))}
        return payload, (header, rows), warnings

    if protocol in ("x", "sqrt-x"):
        res = calibrate_gate(tl, protocol, d_rabi=secondary_amp(False))
        return _gate_result_payload(res), None, warnings

    if protocol in ("s", "t"):
        delta_a = _number(gate_cfg, "delta_a_rad_ns", required=False)
        if delta_a is None:
            d_phi = _number(gate_cfg, "delta_phi_ac_over_2pi")
            chain = TWO_PI * tl.provenance.e_l * tl.provenance.phi_ge
            delta_a = d_phi * TWO_PI * chain
        t_ramp = _number(gate_cfg, "t_ramp_ns", required=False, default=5.0)
        res = phase_gate(tl, protocol, delta_a, t_ramp=t_ramp)
        return _gate_result_payload(res), None, warnings

    # ramp protocol
    ramp_axis = _axis(gate_cfg, "t_ramp_ns")
    if len(ramp_axis) > 1:
        def task(t_ramp):
            return adiabatic_map(tl, float(t_ramp)).fidelity

        results = sweep_execute(list(ramp_axis), task, args.threads,
                                args.strict)
        rows = []
        for t_ramp, (status, val) in zip(ramp_axis, results):
            rows.append([float(t_ramp),
                         val if status == "ok" else f"error:{status}"])
        payload = {"n": len(rows)}
        return payload, (["t_ramp_ns", "fidelity"], rows), warnings
    res = adiabatic_map(tl, float(ramp_axis[0]))
    return _gate_result_payload(res), None, warnings


def _qubit_spec(config, path) -> QubitSpec:
    node = _node(config, path)
    if not isinstance(node, dict):
        raise ConfigError(path, "expected an object")
    params = _circuit(node, "circuit")
    return QubitSpec(params=params,
                     phi_dc=_number(node, "phi_dc_over_2pi") * TWO_PI,
                     phi_ac=_number(node, "phi_ac_over_2pi") * TWO_PI,
                     f_d=_number(node, "f_d_ghz"))


def cmd_two_qubit(config, args):
    left = _qubit_spec(config, "two_qubit.left")
    right = _qubit_spec(config, "two_qubit.right")
    j = _number(config, "two_qubit.j_coupling_ghz", minimum=0.0)
    sys = TwoQubitSystem(left=left, right=right, j_coupling=j)
    warnings = []

    plan_node = _node(config, "two_qubit.plan_resonance", required=False)
    if plan_node is not None:
        sys = plan_resonant_gate_point(
            sys, _number(plan_node, "phi_ac_lo_over_2pi") * TWO_PI,
            _number(plan_node, "phi_ac_hi_over_2pi") * TWO_PI)

    info = two_qubit_interaction_picture(sys)
    payload = {
        "gate_point": {
            "left": {"phi_ac_over_2pi": sys.left.phi_ac / TWO_PI,
                     "f_d_ghz": sys.left.f_d},
            "right": {"phi_ac_over_2pi": sys.right.phi_ac / TWO_PI,
                      "f_d_ghz": sys.right.f_d},
        },
        "interaction": info,
    }

    idle_node = _node(config, "two_qubit.idle", required=False)
    table = None
    if idle_node is not None:
        idle = manifold_point(
            left.params, left.phi_dc,
            _number(idle_node, "phi_ac_over_2pi") * TWO_PI,
            _number(idle_node, "f_d_ghz"))
        payload["idle_point"] = {"phi_ac_over_2pi": idle.phi_ac / TWO_PI,
                                 "f_d_ghz": idle.f_d}
        tau_axis = _axis(config, "two_qubit.tau_wait_ns")
        ramp_axis = _axis(config, "two_qubit.t_ramp_ns")
        if len(tau_axis) > 1 or len(ramp_axis) > 1:
            fmap = two_qubit_fidelity_map(sys, idle, tau_axis, ramp_axis,
                                          threads=args.threads)
            rows = [[float(tw), float(tr), float(fmap[i, k])]
                    for i, tw in enumerate(tau_axis)
                    for k, tr in enumerate(ramp_axis)]
            table = (["tau_wait_ns", "t_ramp_ns", "fidelity"], rows)
            best = int(np.argmax(fmap))
            payload["best"] = {
                "fidelity": float(fmap.ravel()[best]),
                "tau_wait_ns": float(tau_axis[best // len(ramp_axis)]),
                "t_ramp_ns": float(ramp_axis[best % len(ramp_axis)]),
            }
        else:
            res = two_qubit_gate(sys, idle, float(ramp_axis[0]),
                                 float(tau_axis[0]))
            payload["gate"] = _gate_result_payload(res)

        open_node = _node(config, "two_qubit.open_system", required=False)
        if open_node is not None:
            def side_model(side_spec):
                spec = diagonalize_fluxonium(side_spec.params, math.pi)
                return _noise_model(
                    {"noise": dict(open_node.get("noise", {}))},
                    spec.phi_ge, side_spec.params)

            noise_l = side_model(sys.left)
            noise_r = side_model(sys.right)
            if noise_l is None or noise_r is None:
                raise ConfigError("two_qubit.open_system.noise",
                                  "missing required field")
            cfg = OpenSystemConfig(
                noise_left=noise_l, noise_right=noise_r,
                n_samples=_integer(open_node, "n_samples", required=False,
                                   default=64, minimum=1),
                seed=args.seed)
            report = two_qubit_open_report(
                sys, idle,
                _number(open_node, "t_ramp_ns"),
                _number(open_node, "tau_wait_ns"), cfg,
                threads=args.threads)
            payload["open_system"] = report
    return payload, table, warnings


def cmd_limits(config, args):
    payload = {}
    ran = False

    fm = _node(config, "limits.frequency_modulation", required=False)
    if fm is not None:
        coeffs = fm.get("coeffs")
        d_coeffs = fm.get("d_coeffs")
        if not isinstance(coeffs, list) or not isinstance(d_coeffs, list) \
                or len(coeffs) != len(d_coeffs) or len(coeffs) % 2 == 0:
            raise ConfigError(
                "limits.frequency_modulation.coeffs",
                "expected odd-length [re, im] lists of equal size")
        c0 = np.array([complex(v[0], v[1]) for v in coeffs])
        dc = np.array([complex(v[0], v[1]) for v in d_coeffs])
        omega_d = TWO_PI * _number(fm, "f_d_ghz")
        out = limit_frequency_modulation(lambda lam: c0 + lam * dc, 0.0,
                                         omega_d)
        payload["frequency_modulation"] = {
            "eps01": out["eps01"], "eps01_numeric": out["eps01_numeric"],
            "eps01_error": abs(out["eps01"] - out["eps01_numeric"]),
            "g_phi": out["g_phi"], "g_phi_numeric": out["g_phi_numeric"],
            "g_phi_max_error": float(np.max(np.abs(
                out["g_phi"] - out["g_phi_numeric"]))),
        }
        ran = True

    sl = _node(config, "limits.spin_locking", required=False)
    if sl is not None:
        s0 = _number(sl, "s0")
        out = limit_spin_locking(_number(sl, "delta_omega_rad_ns"),
                                 _number(sl, "d_rad_ns"),
                                 _number(sl, "slope"),
                                 lambda w: s0)
        payload["spin_locking"] = out
        ran = True

    gen = _node(config, "limits.general", required=False)
    if gen is not None:
        _, tl = _tl_from_config(config)

        def h_family(bias, t):
            z = 0.5 * bias + tl.amp * math.cos(tl.omega_d * t)
            return np.array([[z, 0.5 * tl.delta], [0.5 * tl.delta, -z]])

        out = general_sweet_condition(h_family, tl.bias, tl.omega_d)
        sol = floquet_solve_extended(tl)
        w = filter_weights(sol)
        payload["general"] = {
            "g_phi_0_half_convention": out["g_phi_0"],
            "eps01_slope": out["eps01_slope"],
            "g_phi_0_sz_convention": complex(w.g_phi_0()),
            "note": "dH/dB = sz/2, so the sz-convention weight equals "
                    "2x the half-convention one and equals the slope",
        }
        ran = True

    if not ran:
        raise ConfigError("limits", "no limit block configured")
    return payload, None, []


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "rates": cmd_rates,
    "sweet-scan": cmd_sweet_scan,
    "sweet-trace": cmd_sweet_trace,
    "gap-check": cmd_gap_check,
    "gate": cmd_gate,
    "two-qubit": cmd_two_qubit,
    "limits": cmd_limits,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floqspot",
        description="Floquet qubit quasi-energies, noise filter weights, "
                    "dynamical sweet spots, and gate simulation.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _DISPATCH:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="JSON configuration file")
        p.add_argument("--out", default=None,
                       help="result envelope path (.json); tabular output "
                            "goes next to it with a .csv extension")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--strict", action="store_true",
                       help="fail the run on any grid-point error")
        if name == "gate":
            p.add_argument("--protocol",
                           choices=["rabi", "x", "sqrt-x", "s", "t", "ramp"],
                           default=None)
    return parser


def run(config: dict, args) -> tuple[dict, bytes | None]:
    """Dispatch a parsed config; returns (envelope, csv bytes or None)."""
    payload, table, warnings = _DISPATCH[args.subcommand](config, args)
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": args.subcommand,
        "config": config,
        "provenance": {"code_version": CODE_VERSION, "seed": args.seed},
        "warnings": [str(w) for w in warnings],
    }
    csv_data = None
    if table is not None:
        header, rows = table
        csv_data = _csv_bytes(header, rows)
        payload = dict(payload)
        payload["csv_columns"] = header
    envelope["payload"] = _jsonable(payload)
    return envelope, csv_data


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                config = json.load(handle)
        except OSError as exc:
            raise ConfigError("config", f"cannot read file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"malformed JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise ConfigError("config", "top level must be an object")
        if args.seed is None:
            args.seed = _integer(config, "seed", required=False, default=0)
        if args.threads is None:
            args.threads = _integer(config, "threads", required=False,
                                    default=1, minimum=1)
        envelope, csv_data = run(config, args)
        if csv_data is not None and args.out is None:
            raise ConfigError("out", "--out is required for tabular output")
        body = json.dumps(envelope, indent=2).encode("utf-8") + b"\n"
        if args.out is None:
            print(body.decode("utf-8"), end="")
        else:
            root, ext = os.path.splitext(args.out)
            if ext == ".csv":
                raise ConfigError("out", "give the envelope path (.json); "
                                         "the CSV is derived from it")
            if csv_data is not None:
                csv_path = root + ".csv"
                envelope["payload"]["csv_path"] = os.path.basename(csv_path)
                body = json.dumps(envelope, indent=2).encode("utf-8") + b"\n"
                _atomic_write(csv_path, csv_data)
            _atomic_write(args.out, body)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
