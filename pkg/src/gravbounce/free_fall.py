"""Free fall of a slit mode onto a lower mirror.

A mode prepared between two mirrors (heights ``h`` and ``h + L`` after the
coordinate shift) is released at ``t = 0`` above a single mirror at ``z = 0``.
Below the slit the packet is expanded in single-mirror eigenstates,

    psi_II(z, t) = C_bar * sum_n D_n Ai((z - z_n)/z0) exp(-i E_n t / hbar),

and evolves by the phases of its components.  Writing
``G^c = C_bar sum D_n Ai cos(E_n t/hbar)`` and ``G^s = C_bar sum D_n Ai sin(E_n t/hbar)``
gives ``psi_II = G^c - i G^s``.

Heights in micrometres, times in seconds, wavenumbers in 1/um.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import quadrature
from .airy import ai, airy_all
from .double_mirror import DoubleMirrorMode, mode_profile, solve_modes
from .errors import DomainError
from .gravity_states import DEFAULT_SCALES, EnergyLevel, ScaleSystem, levels as make_levels

DEFAULT_H = 27.0
DEFAULT_L = 28.0
DEFAULT_N = 15
DEGENERACY_TOL = 1e-6  # in units of z0


@dataclass(frozen=True)
class Region2State:
    """A state below the slit given by its eigenbasis coefficients.

    Attributes
    ----------
    coefficients : ndarray
        ``c_n`` multiplying ``Ai((z - z_n)/z0) exp(-i E_n t/hbar)``, in um^-1/2.
    levels : tuple of EnergyLevel
        Single-mirror levels ``1..N``.
    """

    coefficients: np.ndarray = field(repr=False)
    levels: tuple = field(repr=False)

    @property
    def scales(self) -> ScaleSystem:
        return self.levels[0].scales

    @property
    def N(self):
        return len(self.levels)

    @property
    def z_n(self):
        return np.array([lv.z_n for lv in self.levels])

    @property
    def omega_n(self):
        """``E_n / hbar`` in rad/s."""
        return np.array([lv.E_n for lv in self.levels]) / self.scales.hbar_peV_s

    def norm(self):
        """``int_0^inf |psi_II|^2 dz`` from orthogonality of the truncated basis."""
        ap = np.array([lv.ai_prime for lv in self.levels])
        return float(np.sum(self.coefficients ** 2 * self.scales.z0 * ap ** 2))


@dataclass(frozen=True)
class Region2Expansion(Region2State):
    """Truncated expansion of a released slit mode.

    Attributes
    ----------
    m : int
        Index of the source slit mode.
    h : float
        Step height in micrometres.
    L : float
        Slit width in micrometres.
    D : ndarray
        Dimensionless coefficients ``D_{n,m}``, ``n = 1..N``.
    mode : DoubleMirrorMode
        The released mode.
    """

    m: int = 1
    h: float = DEFAULT_H
    L: float = DEFAULT_L
    D: np.ndarray = field(default=None, repr=False)
    mode: DoubleMirrorMode = field(default=None, repr=False)

    @property
    def C_bar(self):
        return self.mode.C_bar

    def truncated(self, n):
        """The same expansion keeping only the first ``n`` terms."""
        if not 1 <= n <= self.N:
            raise DomainError(f"truncation must be in [1, {self.N}], got {n}")
        return replace(self, coefficients=self.coefficients[:n], levels=self.levels[:n], D=self.D[:n])


@dataclass(frozen=True)
class CoherentMixture(Region2State):
    """Coherent superposition ``sqrt(p1) psi_1 + sqrt(p2) psi_2`` of two expansions."""

    p1: float = 1.0
    p2: float = 0.0


def _check_probabilities(p1, p2):
    if p1 < 0.0 or p2 < 0.0 or abs(p1 + p2 - 1.0) > 1e-12:
        raise DomainError(f"probabilities must be non-negative and sum to 1, got {p1}, {p2}")


def region1_wavefunction(mode: DoubleMirrorMode, h, z, t=0.0):
    """Slit mode shifted up by ``h``; supported on ``[h, h + L]``."""
    z, t = np.broadcast_arrays(np.asarray(z, float), np.asarray(t, float))
    return mode_profile(mode, z - h) * np.exp(-1j * mode.omega * t)


def _closed_form_D(mode: DoubleMirrorMode, h, lv: EnergyLevel):
    z0 = mode.scales.z0
    a, b = mode.a_m, mode.b_m
    x1 = -mode.z_bar / z0
    x2 = (mode.L - mode.z_bar) / z0
    args = np.array([x1, x2, (mode.L + h - lv.z_n) / z0, (h - lv.z_n) / z0])
    ai_v, aip_v, _, bip_v = airy_all(args)
    slope_low = b * aip_v[0] - a * bip_v[0]
    slope_high = b * aip_v[1] - a * bip_v[1]
    bracket = (slope_high * (ai_v[2] - ai_v[1])
               - slope_low * (ai_v[3] - a))
    return bracket * z0 / (lv.z_n - mode.z_bar - h) / lv.ai_prime ** 2


def overlap_coefficient(mode: DoubleMirrorMode, h, lv: EnergyLevel, spec=None):
    """``D_{n,m}`` by projecting the shifted slit mode onto ``Ai((z - z_n)/z0)``.

    ``D = int Ai((z - z_n)/z0) psi_I(z, 0) dz / (C_bar z0 Ai'(a_n)^2)``.
    """
    spec = spec or quadrature.QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12)
    z0 = mode.scales.z0

    def f(z):
        return ai((z - lv.z_n) / z0) * mode_profile(mode, z - h)

    res = quadrature.integrate(f, h, h + mode.L, spec)
    return res.value / (mode.C_bar * z0 * lv.ai_prime ** 2)


def expansion_coefficients(mode: DoubleMirrorMode, h=DEFAULT_H, N=DEFAULT_N, spec=None) -> Region2Expansion:
    """Expand the released mode over the first ``N`` single-mirror eigenstates.

    The coefficients come from the closed form obtained by Green's identity for
    two Airy solutions.  When ``z_n - zbar_m - h`` is within ``1e-6 z0`` of zero
    that form is singular and the overlap integral is used instead (with a
    warning).
    """
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError(f"truncation N must be a positive integer, got {N!r}")
    if not h >= 0.0:
        raise DomainError(f"step height h must be non-negative, got {h}")
    lv = tuple(make_levels(mode.scales, int(N)))
    z0 = mode.scales.z0
    D = np.empty(len(lv))
    for i, level in enumerate(lv):
        if abs(level.z_n - mode.z_bar - h) < DEGENERACY_TOL * z0:
            warnings.warn(
                f"near-degenerate closed form for n={level.n}; using the overlap integral",
                RuntimeWarning,
                stacklevel=2,
            )
            D[i] = overlap_coefficient(mode, h, level, spec)
        else:
            D[i] = mode.sign * _closed_form_D(mode, h, level)
    return Region2Expansion(mode.C_bar * D, lv, mode.m, float(h), mode.L, D, mode)


def default_expansion(m=1, scales=None, h=DEFAULT_H, L=DEFAULT_L, N=DEFAULT_N):
    """Expansion of slit mode ``m`` with the default geometry."""
    scales = scales or DEFAULT_SCALES
    mode = solve_modes(scales, L, m)[m - 1]
    return expansion_coefficients(mode, h, N)


def coherent_mixture(exp1: Region2State, exp2: Region2State, p1, p2) -> CoherentMixture:
    """Combine two expansions coherently with weights ``sqrt(p1)``, ``sqrt(p2)``."""
    _check_probabilities(p1, p2)
    if exp1.N != exp2.N or exp1.scales != exp2.scales:
        raise DomainError("mixture components must share the same basis")
    c = math.sqrt(p1) * exp1.coefficients + math.sqrt(p2) * exp2.coefficients
    return CoherentMixture(c, exp1.levels, float(p1), float(p2))


def _basis(state: Region2State, z):
    z = np.asarray(z, dtype=float)
    x = (z[..., None] - state.z_n) / state.scales.z0
    a, ap, _, _ = airy_all(x)
    mask = (z >= 0.0)[..., None]
    return np.where(mask, a, 0.0), np.where(mask, ap / state.scales.z0, 0.0)


def amplitudes(state: Region2State, t):
    """Complex basis amplitudes ``c_n exp(-i E_n t / hbar)``, shape ``t.shape + (N,)``."""
    wt = np.asarray(t, dtype=float)[..., None] * state.omega_n
    return state.coefficients * np.exp(-1j * wt)


def field_components(state: Region2State, z, amp):
    """``(Re psi, -Im psi)`` of ``psi = sum_n amp_n Ai((z - z_n)/z0)``; ``z`` broadcasts with ``amp[..., 0]``."""
    a, _ = _basis(state, z)
    return np.sum(a * amp.real, axis=-1), -np.sum(a * amp.imag, axis=-1)


def field_derivative(state: Region2State, z, amp):
    """``d psi / dz`` of ``psi = sum_n amp_n Ai((z - z_n)/z0)``."""
    _, ap = _basis(state, z)
    return np.sum(ap * amp, axis=-1)


def region2_components(state: Region2State, z, t):
    """``(G^c, G^s)`` at heights ``z`` and times ``t`` (broadcast), zero for ``z < 0``."""
    return field_components(state, z, amplitudes(state, t))


def region2_wavefunction(state: Region2State, z, t=0.0):
    """``psi_II(z, t) = G^c - i G^s``."""
    gc, gs = region2_components(state, z, t)
    return gc - 1j * gs


def region2_derivative(state: Region2State, z, t=0.0):
    """``d psi_II / dz`` at heights ``z`` and times ``t``."""
    return field_derivative(state, z, amplitudes(state, t))


def spatial_density(state: Region2State, z, t=0.0):
    """``|psi_II(z, t)|^2 = (G^c)^2 + (G^s)^2``."""
    gc, gs = region2_components(state, z, t)
    return gc * gc + gs * gs


def _default_pair(expansions):
    if expansions is None:
        return default_expansion(1), default_expansion(2)
    return expansions


def coherent_mixture_density(p1, p2, z, t=0.0, expansions=None):
    """Density of the coherent mixture of slit modes 1 and 2 below the slit."""
    e1, e2 = _default_pair(expansions)
    return spatial_density(coherent_mixture(e1, e2, p1, p2), z, t)


def incoherent_mixture_density(p1, p2, z, t=0.0, expansions=None):
    """``p1 |psi_1,II|^2 + p2 |psi_2,II|^2``."""
    _check_probabilities(p1, p2)
    e1, e2 = _default_pair(expansions)
    return p1 * spatial_density(e1, z, t) + p2 * spatial_density(e2, z, t)


def continuity_residual(expansion: Region2Expansion, spec=None):
    """L2 norm of ``psi_I(z, 0) - psi_II(z, 0)`` over ``[0, L + h + 3 z0]``."""
    spec = spec or quadrature.QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10)
    top = expansion.L + expansion.h + 3.0 * expansion.scales.z0

    def f(z):
        d = region1_wavefunction(expansion.mode, expansion.h, z).real - region2_components(expansion, z, 0.0)[0]
        return d * d

    res = quadrature.integrate(f, 0.0, top, spec, points=[expansion.h, expansion.h + expansion.L])
    return math.sqrt(res.value)


def density_norm(state: Region2State, t=0.0, spec=None):
    """``int_0^inf |psi_II(z, t)|^2 dz`` by quadrature."""
    spec = spec or quadrature.QuadratureSpec(abs_tol=1e-12, rel_tol=1e-11)
    top = float(np.max(state.z_n)) + spec.tail_pad * state.scales.z0
    return quadrature.integrate(lambda z: spatial_density(state, z, t), 0.0, top, spec).value


@lru_cache(maxsize=64)
def _transform_table(lv: tuple, k: tuple):
    scales = lv[0].scales
    z0 = scales.z0
    top = max(l.z_n for l in lv) + quadrature.DEFAULT_SPEC.tail_pad * z0
    local = math.sqrt(max(abs(l.a_n) for l in lv)) / z0
    kk = np.array(k)
    kmax = float(np.max(np.abs(kk))) if kk.size else 0.0
    x, w = quadrature.oscillation_panels(0.0, top, kmax + local, per_unit=0.5 / z0)
    vals = ai((x[None, :] - np.array([l.z_n for l in lv])[:, None]) / z0)
    fc, fs = quadrature.trig_transform(vals, x, w, kk, panel_order=quadrature.PANEL_ORDER)
    fc.setflags(write=False)
    fs.setflags(write=False)
    return fc, fs


def momentum_transforms(state: Region2State, k):
    """Per-level transforms ``f_c(k, n) = int_0^inf cos(k z) Ai((z - z_n)/z0) dz`` and ``f_s``.

    Returns arrays of shape ``(N,) + k.shape``.  Results are cached per basis
    and wavenumber grid, so sweeps over time reuse them.
    """
    k = np.asarray(k, dtype=float)
    fc, fs = _transform_table(tuple(state.levels), tuple(k.ravel().tolist()))
    return fc.reshape((state.N,) + k.shape), fs.reshape((state.N,) + k.shape)


def field_momentum(state: Region2State, k, amp):
    """Real and imaginary parts of the transform of ``sum_n amp_n Ai((z - z_n)/z0)``."""
    k = np.asarray(k, dtype=float)
    fc, fs = momentum_transforms(state, k)
    fc = np.moveaxis(fc, 0, -1)
    fs = np.moveaxis(fs, 0, -1)
    amp = amp / math.sqrt(2.0 * math.pi)
    re = np.sum(amp.real * fc + amp.imag * fs, axis=-1)
    im = np.sum(amp.imag * fc - amp.real * fs, axis=-1)
    return re, im


def momentum_components(state: Region2State, k, t=0.0):
    """Real and imaginary parts of ``F_II(k, t)``; ``k`` and ``t`` broadcast."""
    return field_momentum(state, k, amplitudes(state, t))


def momentum_density(state: Region2State, k, t=0.0):
    """``|F_II(k, t)|^2`` in um."""
    re, im = momentum_components(state, k, t)
    return re * re + im * im


def momentum_tail(state: Region2State, K, t=0.0):
    """``int_{|k|>K} |F_II(k, t)|^2 dk`` from the large-k expansion.

    Each basis function vanishes at the mirror, so ``F ~ -psi'(0) / (sqrt(2 pi) k^2)``.
    """
    d0 = region2_derivative(state, np.array(0.0), t)
    return float(np.abs(d0) ** 2) * 2.0 * K ** -3 / 3.0 / (2.0 * math.pi)


def momentum_norm(state: Region2State, t=0.0, K=8.0):
    """``int |F_II(k, t)|^2 dk`` over ``[-K, K]`` plus the analytic tail.

    ``F_II`` oscillates in ``k`` on the scale ``1 / extent`` of the packet, so the
    panel count follows the height range occupied by the basis functions.
    """
    extent = float(np.max(state.z_n)) + quadrature.DEFAULT_SPEC.tail_pad * state.scales.z0
    n_panels = int(math.ceil(2.0 * K * extent / math.pi))
    k, w = quadrature.gauss_legendre_panels(-K, K, n_panels)
    return float(np.sum(w * momentum_density(state, k, t))) + momentum_tail(state, K, t)
