"""Shared fixtures: the reference circuit and objects derived from it.

Expensive artifacts (static diagonalization, manifold roots) are session
scoped so the suite pays for them once.
"""

import math

import pytest

from floqspot.circuit import (TWO_PI, FluxoniumParams, diagonalize_fluxonium,
                              two_level_reduce)
from floqspot.noise import NoiseModel

# Reference circuit energies in GHz, used throughout the suite.
E_C, E_J, E_L = 0.5, 4.0, 1.3


@pytest.fixture(scope="session")
def params_ref():
    return FluxoniumParams(e_c=E_C, e_j=E_J, e_l=E_L)


@pytest.fixture(scope="session")
def spec_pi(params_ref):
    """Static spectrum at half flux (the reduction expansion point)."""
    return diagonalize_fluxonium(params_ref, math.pi)


@pytest.fixture(scope="session")
def spec_away(params_ref):
    """Static spectrum at the biased point delta phi / 2 pi = 0.02."""
    return diagonalize_fluxonium(params_ref, TWO_PI * 0.52)


@pytest.fixture(scope="session")
def model_ref(spec_pi):
    """Noise model built from the default loss tangents of the circuit."""
    return NoiseModel.from_loss_tangents(spec_pi.phi_ge, E_C, E_L)


@pytest.fixture(scope="session")
def tl_gate(spec_pi):
    """m = 2 dynamical sweet spot at delta phi / 2 pi = 0.02, used for
    single-qubit gate protocols."""
    from floqspot.dynamics import manifold_root
    phi_ac = 0.02 * TWO_PI
    phi_dc = 0.52 * TWO_PI
    f_star = manifold_root(spec_pi, phi_ac, phi_dc, 0.3564)
    return two_level_reduce(spec_pi, phi_ac, phi_dc, TWO_PI * f_star)
