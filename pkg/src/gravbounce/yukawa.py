"""First-order treatment of a short-range Yukawa-type potential below the slit.

The extra potential ``W(z) = W0 exp(-z / delta)`` is treated to first order in
the single-mirror basis ``psi_n`` normalized in micrometres:

* ``eps_n = E_n + J_nn`` with ``J_{n',n} = <psi_n'| W |psi_n>``;
* ``Psi_n = sum_n' psi_n' T_{n',n}``, ``T = 1 + J_{n',n} / (E_n - E_n')`` off the diagonal.

The released packet keeps its unperturbed coefficients at ``t = 0`` and evolves
as ``psi(z, t) = C_bar sum psi_n'(z) [T diag(exp(-i eps t/hbar)) T^-1]_{n',n''} D_bar_n''``
with ``D_bar_n = D_n sqrt(z0) Ai'(a_n)``.

Internally the propagator is written in the Airy basis used by
:mod:`gravbounce.free_fall`, ``Ai((z - z_n)/z0) = sqrt(z0) Ai'(a_n) psi_n``, so the
same field and transform routines serve both the perturbed and the unperturbed
packet; with ``W0 = 0`` the two give bit-identical numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import free_fall as ff
from . import quadrature
from .airy import ai
from .errors import DomainError, QuadratureError
from .gravity_states import DEFAULT_SCALES, EnergyLevel, ScaleSystem, levels as make_levels

DEFAULT_W0 = -1.0  # peV
DEFAULT_DELTA = 10.0  # um
MAX_BASIS = 30
MIN_SPACING = 1e-6  # peV


@dataclass(frozen=True)
class YukawaModel:
    """Perturbation data for ``W(z) = W0 exp(-z/delta)`` in a basis of ``N`` levels.

    Attributes
    ----------
    W0 : float
        Strength in peV (negative is attractive).
    delta : float
        Range in micrometres.
    N : int
        Basis size.
    levels : tuple of EnergyLevel
        Unperturbed levels ``1..N``.
    J : ndarray
        ``(N, N)`` matrix elements in peV.
    T, T_inv : ndarray
        Mixing matrix and its inverse.
    eps : ndarray
        First-order energies in peV.
    """

    W0: float
    delta: float
    N: int
    levels: tuple = field(repr=False)
    J: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)
    T_inv: np.ndarray = field(repr=False)
    eps: np.ndarray = field(repr=False)

    @property
    def scales(self) -> ScaleSystem:
        return self.levels[0].scales

    @property
    def E(self):
        return np.array([lv.E_n for lv in self.levels])


def _check_params(W0, delta):
    if not math.isfinite(W0):
        raise DomainError(f"W0 must be finite, got {W0}")
    if not (math.isfinite(delta) and delta > 0.0):
        raise DomainError(f"delta must be positive, got {delta}")


def yukawa_potential(model, z):
    """``W0 exp(-z / delta)`` in peV at heights ``z`` (um); ``model`` needs ``W0`` and ``delta``."""
    z = np.asarray(z, dtype=float)
    return model.W0 * np.exp(-z / model.delta)


def _normalized(lv: EnergyLevel, z):
    z0 = lv.scales.z0
    return ai((z - lv.z_n) / z0) / (math.sqrt(z0) * lv.ai_prime)


def matrix_elements(W0, delta, lv, spec=None):
    """``J_{n',n} = int_0^inf psi_n' W psi_n dz`` for the levels ``lv`` (peV).

    Raises
    ------
    QuadratureError
        If an element does not converge; the message names the pair.
    """
    _check_params(W0, delta)
    lv = tuple(lv)
    if not 1 <= len(lv) <= MAX_BASIS:
        raise DomainError(f"basis size must be in [1, {MAX_BASIS}], got {len(lv)}")
    spec = spec or quadrature.QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11)
    n = len(lv)
    J = np.zeros((n, n))
    if W0 == 0.0:
        return J
    z0 = lv[0].scales.z0
    for i in range(n):
        for j in range(i, n):
            top = max(lv[i].z_n, lv[j].z_n) + spec.tail_pad * z0
            li, lj = lv[i], lv[j]

            def f(z, li=li, lj=lj):
                return _normalized(li, z) * _normalized(lj, z) * np.exp(-z / delta)

            try:
                res = quadrature.integrate(f, 0.0, top, spec, points=[min(li.z_n, lj.z_n)])
            except QuadratureError as exc:
                raise QuadratureError(
                    f"matrix element J[{li.n},{lj.n}] did not converge: {exc}", exc.value, exc.error
                ) from exc
            J[i, j] = J[j, i] = W0 * res.value
    return J


def mixing_matrix(J, E):
    """``T`` with unit diagonal and ``J_{n',n} / (E_n - E_n')`` off the diagonal."""
    E = np.asarray(E, dtype=float)
    diff = E[None, :] - E[:, None]  # E_n - E_n' at [n', n]
    off = ~np.eye(len(E), dtype=bool)
    if np.any(np.abs(diff[off]) <= MIN_SPACING):
        raise DomainError("degenerate unperturbed levels in the basis")
    T = np.eye(len(E))
    T[off] = J[off] / diff[off]
    return T


def yukawa_model(W0=DEFAULT_W0, delta=DEFAULT_DELTA, N=ff.DEFAULT_N, scales=None, spec=None) -> YukawaModel:
    """Build the perturbation data for ``N`` single-mirror levels."""
    if isinstance(N, bool) or int(N) != N or not 1 <= N <= MAX_BASIS:
        raise DomainError(f"N must be an integer in [1, {MAX_BASIS}], got {N!r}")
    W0, delta = float(W0), float(delta)
    _check_params(W0, delta)
    lv = tuple(make_levels(scales or DEFAULT_SCALES, int(N)))
    J = matrix_elements(W0, delta, lv, spec)
    E = np.array([l.E_n for l in lv])
    T = mixing_matrix(J, E)
    T_inv = np.linalg.solve(T, np.eye(len(lv)))
    eps = E + np.diag(J)
    for arr in (J, T, T_inv, eps):
        arr.setflags(write=False)
    return YukawaModel(W0, delta, int(N), lv, J, T, T_inv, eps)


def perturbed_levels(model: YukawaModel):
    """First-order energies ``eps_n = E_n + J_nn`` (peV)."""
    return np.array(model.eps)


def perturbed_wavefunction(model: YukawaModel, n, z):
    """``Psi_n(z) = sum_n' psi_n'(z) T_{n',n}`` (um^-1/2) for ``1 <= n <= N``."""
    if not 1 <= n <= model.N:
        raise DomainError(f"level index must be in [1, {model.N}], got {n}")
    z = np.asarray(z, dtype=float)
    basis = np.stack([np.where(z >= 0.0, _normalized(lv, z), 0.0) for lv in model.levels], axis=-1)
    return basis @ model.T[:, n - 1]


@dataclass(frozen=True)
class PerturbedExpansion:
    """A released slit mode evolving under the perturbed spectrum."""

    base: ff.Region2Expansion
    model: YukawaModel
    D_bar: np.ndarray = field(repr=False)
    # propagator matrices in the Airy basis of ``base``
    _T_ai: np.ndarray = field(repr=False)
    _T_ai_inv: np.ndarray = field(repr=False)

    @property
    def omega(self):
        """Perturbed angular frequencies ``eps_n / hbar`` (rad/s)."""
        return self.model.eps / self.model.scales.hbar_peV_s


def perturb(base: ff.Region2Expansion, model: YukawaModel) -> PerturbedExpansion:
    """Attach a Yukawa model to an unperturbed expansion with the same basis."""
    if base.N != model.N or base.scales != model.scales:
        raise DomainError("expansion and model must share the same basis")
    z0 = base.scales.z0
    ap = np.array([lv.ai_prime for lv in base.levels])
    d_bar = base.D * math.sqrt(z0) * ap
    # Ai_n = s_n^-1 psi_n with s_n = 1 / (sqrt(z0) Ai'(a_n)); conjugating by s
    # moves T into the Airy basis while keeping its diagonal exactly one
    s = 1.0 / (math.sqrt(z0) * ap)
    t_ai = model.T * s[:, None] / s[None, :]
    t_ai_inv = model.T_inv * s[:, None] / s[None, :]
    return PerturbedExpansion(base, model, d_bar, t_ai, t_ai_inv)


def perturbed_amplitudes(pexp: PerturbedExpansion, t):
    """Airy-basis amplitudes of the perturbed packet, shape ``t.shape + (N,)``."""
    t = np.asarray(t, dtype=float)
    inner = pexp._T_ai_inv @ pexp.base.coefficients
    phase = np.exp(-1j * (t[..., None] * pexp.omega))
    return (phase * inner) @ pexp._T_ai.T


def perturbed_components(pexp: PerturbedExpansion, z, t):
    """``(Re psi, Im psi)`` of the perturbed packet; ``z`` and ``t`` broadcast."""
    z, t = np.broadcast_arrays(np.asarray(z, float), np.asarray(t, float))
    re, minus_im = ff.field_components(pexp.base, z, perturbed_amplitudes(pexp, t))
    return re, -minus_im


def evolve_perturbed(pexp: PerturbedExpansion, z, t):
    """Complex perturbed wave function (um^-1/2)."""
    re, im = perturbed_components(pexp, z, t)
    return re + 1j * im


def perturbed_density(pexp: PerturbedExpansion, z, t):
    """``Re^2 + Im^2`` of the perturbed packet (1/um)."""
    re, im = perturbed_components(pexp, z, t)
    return re * re + im * im


def perturbed_norm(pexp: PerturbedExpansion, t):
    """``int_0^inf |psi|^2 dz`` from orthogonality of the truncated basis."""
    ap = np.array([lv.ai_prime for lv in pexp.base.levels])
    amp = perturbed_amplitudes(pexp, t)
    return np.sum(np.abs(amp) ** 2 * pexp.base.scales.z0 * ap ** 2, axis=-1)


def delta_space(pexp: PerturbedExpansion, z, t):
    """Perturbed minus unperturbed position density."""
    z, t = np.broadcast_arrays(np.asarray(z, float), np.asarray(t, float))
    return perturbed_density(pexp, z, t) - ff.spatial_density(pexp.base, z, t)


def perturbed_momentum_components(pexp: PerturbedExpansion, k, t):
    """Real and imaginary parts of the perturbed momentum amplitude.

    ``k`` and ``t`` broadcast, with ``t`` carrying the leading axes (as in
    :func:`gravbounce.free_fall.momentum_components`).
    """
    return ff.field_momentum(pexp.base, k, perturbed_amplitudes(pexp, t))


def perturbed_momentum_density(pexp: PerturbedExpansion, k, t):
    """``|F^Yu(k, t)|^2`` (um)."""
    re, im = perturbed_momentum_components(pexp, k, t)
    return re * re + im * im


def delta_momentum(pexp: PerturbedExpansion, k, t):
    """Perturbed minus unperturbed momentum density."""
    return perturbed_momentum_density(pexp, k, t) - ff.momentum_density(pexp.base, k, t)


def perturbed_momentum_norm(pexp: PerturbedExpansion, t, K=8.0):
    """``int |F^Yu|^2 dk`` on ``[-K, K]`` plus the large-k tail."""
    base = pexp.base
    extent = float(np.max(base.z_n)) + quadrature.DEFAULT_SPEC.tail_pad * base.scales.z0
    k, w = quadrature.gauss_legendre_panels(-K, K, int(math.ceil(2.0 * K * extent / math.pi)))
    amp = perturbed_amplitudes(pexp, t)
    d0 = ff.field_derivative(base, np.array(0.0), amp)
    tail = float(np.abs(d0) ** 2) * 2.0 * K ** -3 / 3.0 / (2.0 * math.pi)
    return float(np.sum(w * perturbed_momentum_density(pexp, k, t))) + tail
