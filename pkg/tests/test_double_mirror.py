import math

import numpy as np
import pytest
from scipy.special import airy as sp_airy

from gravbounce import double_mirror as dm, gravity_states as gs, quadrature as q
from gravbounce.airy import airy_all
from gravbounce.errors import DomainError

from conftest import trapezoid_grid

S = gs.DEFAULT_SCALES
L = 28.0


@pytest.fixture(scope="module")
def modes():
    return dm.solve_modes(S, L, 6)


def _profile_integral(f, mode):
    x, w = q.oscillation_panels(0.0, mode.L, 2.0 * math.sqrt(mode.z_bar / S.z0) / S.z0 + 1.0,
                                per_unit=0.5 / S.z0)
    return float(np.sum(w * f(x)))


def test_turning_heights_match_oracle(oracles, modes):
    assert len(oracles["slit_L28"]) >= 6, "regenerate tests/data/oracles.json"
    for (m, zb, eb), mode in zip(oracles["slit_L28"], modes):
        assert mode.m == m
        assert mode.z_bar == pytest.approx(zb, abs=1e-9)
        assert mode.E_bar == pytest.approx(eb, abs=1e-10)


def test_published_table_reproduced_with_g_981():
    ms = dm.solve_modes(gs.make_scales(g=9.81), L, 6)
    assert ms[0].E_bar == pytest.approx(1.40821, abs=1e-3)
    assert ms[0].z_bar == pytest.approx(13.73133, abs=1e-3)
    assert ms[5].E_bar == pytest.approx(10.8441, abs=1e-3)


def test_mode_invariants(modes):
    for mode in modes:
        assert mode.E_bar == pytest.approx(mode.z_bar * S.mg_peV_per_um, rel=1e-10)
        a, _, b, _ = (float(v) for v in airy_all(np.array(-mode.z_bar / S.z0)))
        assert (mode.a_m, mode.b_m) == (a, b)
        assert mode.N_m > 0.0
        assert mode.N_m ** 2 == pytest.approx(mode.N2_bracket, rel=1e-6)
        assert abs(dm.boundary_determinant(S, L, mode.z_bar)) < 1e-10
    assert np.all(np.diff([mode.E_bar for mode in modes]) > 0.0)


def test_modes_vanish_at_both_mirrors(modes):
    z = np.linspace(0.0, L, 2001)
    for mode in modes:
        psi = np.abs(dm.mode_wavefunction(mode, np.array([0.0, L]), 1e-3))
        peak = np.max(np.abs(dm.mode_profile(mode, z)))
        assert np.all(psi <= 1e-8 * peak)
    assert np.all(dm.mode_profile(modes[0], np.array([-1.0, L + 1.0])) == 0.0)


def test_positive_slope_at_lower_mirror(modes):
    for mode in modes:
        assert dm.mode_profile_derivative(mode, np.array([0.0]))[0] > 0.0


def test_stationary_modulus(modes):
    z = np.linspace(0.0, L, 57)
    mode = modes[2]
    a = np.abs(dm.mode_wavefunction(mode, z, 0.0))
    for t in (1e-4, 3.3e-3, 0.02):
        assert np.allclose(np.abs(dm.mode_wavefunction(mode, z, t)), a, atol=1e-15)


def test_orthonormality(modes):
    for i, a in enumerate(modes):
        for b in modes[i:]:
            val = _profile_integral(lambda z: dm.mode_profile(a, z) * dm.mode_profile(b, z), b)
            assert val == pytest.approx(1.0 if a is b else 0.0, abs=1e-7 if a is b else 1e-6)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_momentum_normalization(modes, m):
    mode = modes[m - 1]
    K = dm.K_MAX * 4
    k, w = q.oscillation_panels(-K, K, L, per_unit=0.5)
    inner = float(np.sum(w * dm.mode_spectral_function(mode, k)))
    assert inner + dm.spectral_tail(mode, K) == pytest.approx(1.0, abs=1e-6)


def test_spectral_function_even(modes):
    k = np.linspace(0.0, 3.0, 31)
    for mode in modes[:3]:
        assert np.allclose(dm.mode_spectral_function(mode, k), dm.mode_spectral_function(mode, -k),
                           rtol=1e-12, atol=1e-16)


def test_amplitude_matches_grid_transform(modes):
    mode = modes[0]
    z, w = trapezoid_grid(0.0, L, 200_001)
    ai, _, bi, _ = sp_airy((z - mode.z_bar) / S.z0)
    psi = -mode.C_bar * (mode.b_m * ai - mode.a_m * bi)
    k = np.array([-2.5, -0.4, 0.0, 0.3, 1.0, 3.0])
    F = np.exp(-1j * np.outer(k, z)) @ (w * psi) / math.sqrt(2.0 * math.pi)
    assert np.allclose(dm.mode_momentum_amplitude(mode, k), F, atol=1e-6, rtol=0.0)


def test_spectral_function_time_independent(modes):
    k = np.linspace(-2.0, 2.0, 9)
    mode = modes[1]
    for t in (0.0, 2e-3):
        assert np.allclose(np.abs(dm.mode_momentum_amplitude(mode, k, t)) ** 2,
                           dm.mode_spectral_function(mode, k), atol=1e-15)


def test_large_slit_limit():
    wide = dm.solve_modes(S, 200.0, 3)
    for mode in wide:
        assert mode.E_bar == pytest.approx(gs.level(S, mode.m).E_n, abs=1e-4)


@pytest.mark.parametrize("L_bad,m_max", [(0.0, 3), (-2.0, 3), (math.inf, 3), (28.0, 0), (28.0, 21)])
def test_solver_domain(L_bad, m_max):
    with pytest.raises(DomainError):
        dm.solve_modes(S, L_bad, m_max)
