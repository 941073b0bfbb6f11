import numpy as np
import pytest

from gravbounce import double_mirror as dm, free_fall as ff, gravity_states as gs, wigner as wg
from gravbounce.errors import DomainError

S = gs.DEFAULT_SCALES
L1 = gs.level(S, 1)


@pytest.fixture(scope="module")
def slit_modes():
    return dm.solve_modes(S, 28.0, 2)


# ---------------------------------------------------------------------------
# single-mirror eigenstates


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_symmetric_in_k(n):
    lvl = gs.level(S, n)
    k = np.linspace(0.0, 6.0, 13)
    for zeta in (0.3, 1.7, 4.2):
        assert np.allclose(wg.wigner_single(lvl, zeta, k), wg.wigner_single(lvl, zeta, -k), atol=1e-14)


def test_single_zero_below_mirror():
    assert np.all(wg.wigner_single(L1, np.array([-1.0, 0.0]), np.array([0.5, 0.5])) == 0.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_position_marginal(n):
    lvl = gs.level(S, n)
    state = wg.single_state(lvl, normalized=True)
    zeta = np.array([0.2, 0.9, 1.6, 2.8, 4.5, 7.0])
    assert np.allclose(wg.k_marginal(state, zeta), gs.eigenfunction(lvl, zeta, True) ** 2, atol=1e-6, rtol=0.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_momentum_marginal(n):
    lvl = gs.level(S, n)
    k = np.array([-4.0, -1.0, 0.0, 0.5, 2.5])
    got = wg.z_marginal(wg.single_state(lvl, normalized=True), k)
    assert np.allclose(got, gs.momentum_spectrum(lvl, k, normalized=True), atol=1e-6, rtol=0.0)


def test_grid_integral_and_purity():
    z = np.linspace(0.0, 12.0, 241)
    k = np.linspace(-8.0, 8.0, 241)
    grid = wg.wigner_grid(wg.single_state(L1, normalized=True), z, k, workers=4)
    assert abs(grid.integral() - 1.0) < 2e-3
    assert abs(grid.purity() - 1.0) < 2e-3


def test_threaded_grid_matches_serial():
    z = np.linspace(0.0, 6.0, 13)
    k = np.linspace(-3.0, 3.0, 7)
    state = wg.single_state(gs.level(S, 2))
    assert np.array_equal(wg.wigner_grid(state, z, k, workers=3).W, wg.wigner_grid(state, z, k).W)


def test_grid_validation():
    with pytest.raises(DomainError):
        wg.PhaseSpaceGrid(np.array([0.0, 0.0]), np.array([1.0]), np.zeros((2, 1)), wg.SCALED)
    with pytest.raises(DomainError):
        wg.PhaseSpaceGrid(np.array([0.0, 1.0]), np.array([1.0]), np.zeros((2, 1), complex), wg.SCALED)
    with pytest.raises(DomainError):
        wg.PhaseSpaceGrid(np.array([0.0, 1.0]), np.array([1.0]), np.zeros((1, 2)), wg.SCALED)


# ---------------------------------------------------------------------------
# two-level superposition


def test_superposition_pure_limit():
    sup = gs.superposition(1.0, 0.0)
    zeta, k = np.meshgrid([0.5, 2.0], [-1.0, 0.0, 2.0], indexing="ij")
    assert np.allclose(wg.wigner_superposition(sup, zeta, k, 1.3e-3), wg.wigner_single(L1, zeta, k), atol=1e-14)


def test_superposition_period_average():
    sup = gs.superposition(0.7, 0.3)
    zeta, k = np.meshgrid([0.4, 1.5, 3.0], [-2.0, 0.0, 1.0], indexing="ij")
    ts = np.arange(32) / 32.0 * sup.period
    avg = np.mean([wg.wigner_superposition(sup, zeta, k, t) for t in ts], axis=0)
    assert np.allclose(avg, wg.wigner_superposition_average(sup, zeta, k), atol=1e-6)


@pytest.mark.parametrize("t", [0.0, 0.9e-3, 1.6e-3])
def test_superposition_marginals(t):
    sup = gs.superposition(0.7, 0.3)
    state = wg.superposition_state(sup, t, normalized=True)
    zeta = np.array([0.3, 1.2, 2.5, 4.0])
    assert np.allclose(wg.k_marginal(state, zeta), gs.superposition_density(sup, zeta, t, True),
                       atol=1e-5, rtol=0.0)
    k = np.array([-2.0, -0.5, 0.7, 1.5])
    assert np.allclose(wg.z_marginal(state, k), gs.superposition_momentum_density(sup, k, t, True),
                       atol=1e-5, rtol=0.0)


# ---------------------------------------------------------------------------
# slit modes


def test_mode_vanishes_at_mirrors(slit_modes):
    k = np.linspace(-3.0, 3.0, 11)
    for mode in slit_modes:
        assert np.all(wg.wigner_double_mirror(mode, np.zeros_like(k), k) == 0.0)
        assert np.all(wg.wigner_double_mirror(mode, np.full_like(k, mode.L), k) == 0.0)


def _mode_grid(mode, n=101):
    return wg.wigner_grid(wg.mode_state(mode), np.linspace(0.0, mode.L, n), np.linspace(-3.0, 3.0, n), workers=4)


def test_ground_mode_near_positive(slit_modes):
    W = _mode_grid(slit_modes[0]).W
    assert W.min() >= -0.01 * W.max(), f"min/max = {W.min() / W.max():.4f}"


def test_first_excited_mode_negative(slit_modes):
    W = _mode_grid(slit_modes[1]).W
    assert W.min() < -0.05 * W.max()


@pytest.mark.parametrize("m", [1, 2])
def test_mode_marginals(slit_modes, m):
    mode = slit_modes[m - 1]
    state = wg.mode_state(mode)
    z = np.array([2.0, 9.0, 14.0, 20.5, 26.0])
    assert np.allclose(wg.k_marginal(state, z), dm.mode_profile(mode, z) ** 2, atol=1e-6, rtol=0.0)
    k = np.array([-1.2, 0.0, 0.4, 2.0])
    assert np.allclose(wg.z_marginal(state, k), dm.mode_spectral_function(mode, k), atol=1e-6, rtol=0.0)


# ---------------------------------------------------------------------------
# released packet


def test_release_support(expansion_m1):
    z = np.linspace(0.0, 80.0, 161)
    k = np.linspace(-1.5, 1.5, 61)
    W = wg.wigner_grid(wg.region2_state(expansion_m1, 0.0), z, k, workers=4).W
    peak = np.max(np.abs(W))
    outside = (z < 27.0) | (z > 55.0)
    assert np.max(np.abs(W[outside])) < 0.01 * peak


def test_release_reduces_to_cosine_form(expansion_m1):
    state = wg.region2_state(expansion_m1, 0.0)
    assert state.real
    full = wg.WaveState(state.psi, state.dpsi, state.lo, state.hi, state.kappa, state.scale, state.unit_tag, False)
    k = np.linspace(-1.0, 1.0, 9)
    for z in (30.0, 40.0):
        assert np.allclose(wg.wigner_row(full, z, k), wg.wigner_row(state, z, k), atol=1e-14)


@pytest.mark.parametrize("t", [0.0, 3e-3])
def test_release_marginals(expansion_m1, t):
    state = wg.region2_state(expansion_m1, t)
    z = np.array([5.0, 20.0, 33.0, 41.0, 50.0])
    assert np.allclose(wg.k_marginal(state, z), ff.spatial_density(expansion_m1, z, t), atol=1e-4, rtol=0.0)
    k = np.array([-0.6, -0.1, 0.0, 0.3])
    assert np.allclose(wg.z_marginal(state, k), ff.momentum_density(expansion_m1, k, t), atol=1e-4, rtol=0.0)


def test_release_wigner_real(expansion_m1):
    z, k = np.meshgrid([10.0, 30.0], [-0.5, 0.5], indexing="ij")
    W = wg.wigner_region2(expansion_m1, z, k, 3e-3)
    assert W.dtype == float and W.shape == (2, 2)
