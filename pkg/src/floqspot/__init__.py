"""Floquet sweet-spot engineering for driven fluxonium qubits.

Quasi-energies and Floquet modes of periodically driven two-level systems,
noise filter weights and coherence times under 1/f flux and dielectric
noise, dynamical sweet-spot manifolds, and Floquet-frame gate simulation.
"""

from .circuit import (ConvergenceError, FluxoniumParams, ReductionRecord,
                      StaticSpectrum, TwoLevelParams, TWO_PI,
                      diagonalize_fluxonium, two_level_reduce)
from .floquet import (DegenerateSolutionError, FloquetSolution,
                      IntegrationError, TruncationError,
                      floquet_propagator, floquet_solve_extended,
                      floquet_solve_monodromy, fold_quasi_energy,
                      hamiltonian, monodromy_modes, static_eigenstates)
from .noise import (FilterWeights, NoiseModel, Rates, dephasing_envelope,
                    dynamical_rates, filter_function, filter_weights,
                    spectrum_1f, spectrum_dielectric, static_rates,
                    static_weights)
from .sweetspot import (GapEstimate, SweetCurve, SweetPoint, dispersion_ac,
                        dispersion_amp, dispersion_bias, dispersion_dc,
                        find_doubly_sweet, fwhm_width, gap_strong, gap_weak,
                        general_sweet_condition, limit_frequency_modulation,
                        limit_spin_locking, measure_fwhm, measure_gap,
                        trace_dc_manifold)
from .dynamics import (GapClosureError, GateResult, OpenSystemConfig,
                       PathInvalidError, PulseSchedule, QubitSpec, Segment,
                       SecondaryTone, TwoQubitSystem, adiabatic_map,
                       calibrate_gate, evolve_closed, gate_fidelity,
                       manifold_point, measure_swap_period, phase_gate,
                       plan_resonant_gate_point, rabi_rate, rabi_transfer,
                       two_qubit_fidelity_map, two_qubit_gate,
                       two_qubit_interaction_picture, two_qubit_open_report)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "FluxoniumParams", "ReductionRecord",
    "StaticSpectrum", "TwoLevelParams", "TWO_PI",
    "diagonalize_fluxonium", "two_level_reduce",
    "DegenerateSolutionError", "FloquetSolution", "IntegrationError",
    "TruncationError", "floquet_propagator", "floquet_solve_extended",
    "floquet_solve_monodromy", "fold_quasi_energy", "hamiltonian",
    "monodromy_modes", "static_eigenstates",
    "FilterWeights", "NoiseModel", "Rates",
    "dephasing_envelope", "dynamical_rates", "filter_function",
    "filter_weights", "spectrum_1f", "spectrum_dielectric", "static_rates",
    "static_weights",
    "GapEstimate", "SweetCurve", "SweetPoint", "dispersion_ac",
    "dispersion_amp", "dispersion_bias", "dispersion_dc",
    "find_doubly_sweet", "fwhm_width", "gap_strong", "gap_weak",
    "general_sweet_condition", "limit_frequency_modulation",
    "limit_spin_locking", "measure_fwhm", "measure_gap",
    "trace_dc_manifold",
    "GapClosureError", "GateResult", "OpenSystemConfig", "PathInvalidError",
    "PulseSchedule", "QubitSpec", "Segment", "SecondaryTone",
    "TwoQubitSystem", "adiabatic_map", "calibrate_gate", "evolve_closed",
    "gate_fidelity", "manifold_point", "measure_swap_period", "phase_gate",
    "plan_resonant_gate_point", "rabi_rate", "rabi_transfer",
    "two_qubit_fidelity_map", "two_qubit_gate",
    "two_qubit_interaction_picture", "two_qubit_open_report",
]
