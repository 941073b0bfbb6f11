"""Bound states between two horizontal mirrors at heights 0 and L.

Inside the slit the mode is a combination of Ai and Bi,

    psi_m(z) = s / (sqrt(z0) N_m) * [b_m Ai(x) - a_m Bi(x)],  x = (z - zbar_m) / z0,

with ``a_m = Ai(-zbar_m/z0)`` and ``b_m = Bi(-zbar_m/z0)`` so that the bracket
vanishes at ``z = 0`` for any ``zbar``.  The turning heights ``zbar_m`` are the
roots of the boundary determinant that also makes the bracket vanish at
``z = L``.  The overall sign ``s = -1`` makes the slope at the lower mirror
positive.

Heights are in micrometres, energies in peV and wavenumbers in 1/um.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .airy import airy_all
from .errors import DomainError, RootFindingError
from .gravity_states import MICRON, PEV, ScaleSystem

K_MAX = 3.0
"""Default largest wavenumber (1/um) for double-mirror momentum transforms."""

MAX_MODES = 20


@dataclass(frozen=True)
class DoubleMirrorMode:
    """A stationary mode of the two-mirror slit.

    Attributes
    ----------
    m : int
        Mode index (1 is the ground state).
    L : float
        Mirror separation in micrometres.
    E_bar : float
        Energy in peV, equal to ``zbar * m_N * g``.
    z_bar : float
        Turning height in micrometres.
    a_m, b_m : float
        ``Ai(-zbar/z0)`` and ``Bi(-zbar/z0)``.
    N_m : float
        Positive normalization constant.
    N2_bracket : float
        ``N_m^2`` evaluated literally as the difference of the squared boundary
        slopes; kept for diagnostics.
    sign : float
        Overall sign applied to the bracket (``-1``: positive slope at ``z = 0``).
    """

    m: int
    L: float
    E_bar: float
    z_bar: float
    a_m: float
    b_m: float
    N_m: float
    N2_bracket: float
    sign: float
    scales: ScaleSystem = field(repr=False)
    # coefficients actually used to evaluate the bracket; see _stable_coefficients
    _ca: float = field(repr=False, default=0.0)
    _cb: float = field(repr=False, default=0.0)

    @property
    def C_bar(self):
        """``1 / (sqrt(z0) N_m)`` in um^-1/2."""
        return 1.0 / (math.sqrt(self.scales.z0) * self.N_m)

    @property
    def omega(self):
        """``E_bar / hbar`` in rad/s."""
        return self.E_bar / self.scales.hbar_peV_s


def boundary_determinant(scales: ScaleSystem, L, z_bar):
    """``Ai(-zbar/z0) Bi((L-zbar)/z0) - Bi(-zbar/z0) Ai((L-zbar)/z0)``."""
    z_bar = np.asarray(z_bar, dtype=float)
    a1, _, b1, _ = airy_all(-z_bar / scales.z0)
    a2, _, b2, _ = airy_all((L - z_bar) / scales.z0)
    return a1 * b2 - b1 * a2


def _scaled_determinant(scales, L, z_bar):
    # dividing by the positive Bi at the upper mirror keeps the magnitude O(1)
    # without moving any sign change
    x2 = (L - z_bar) / scales.z0
    a1, _, b1, _ = airy_all(np.array([-z_bar / scales.z0]))
    a2, _, b2, _ = airy_all(np.array([x2]))
    d = float(a1[0] * b2[0] - b1[0] * a2[0])
    if x2 > 0.0:
        d /= float(b2[0])
    return d


def _stable_coefficients(a, b, x2):
    """Bracket coefficients that vanish at the upper mirror to rounding.

    At a root, ``a / b = Ai(x2) / Bi(x2)``.  Far above the turning point Bi is
    huge, and the rounding error in ``a`` would be amplified by ``Bi(x)``; the
    coefficient multiplying the larger of ``Ai(x2)``, ``Bi(x2)`` is therefore
    re-derived from that ratio.
    """
    ai2, _, bi2, _ = (float(v[0]) for v in airy_all(np.array([x2])))
    if abs(bi2) >= abs(ai2):
        return b * ai2 / bi2, b, bi2, "bi"
    return a, a * bi2 / ai2, ai2, "ai"


def _make_mode(scales, L, m, z_bar):
    z0 = scales.z0
    x1 = -z_bar / z0
    x2 = (L - z_bar) / z0
    a, ap1, b, bp1 = (float(v[0]) for v in airy_all(np.array([x1])))
    _, ap2, _, bp2 = (float(v[0]) for v in airy_all(np.array([x2])))
    slope1 = b * ap1 - a * bp1
    slope2 = b * ap2 - a * bp2
    n2_bracket = slope1 ** 2 - slope2 ** 2

    ca, cb, ref, which = _stable_coefficients(a, b, x2)
    # slope at the upper mirror from the Wronskian: y'(x2) = -c / (pi * ref)
    slope2_stable = -(b if which == "bi" else a) / (math.pi * ref)
    slope1_stable = -1.0 / math.pi
    n2 = slope1_stable ** 2 - slope2_stable ** 2
    if not n2 > 0.0:
        raise RootFindingError(
            f"mode m={m} at L={L} um gives a non-positive squared norm N^2 = {n2:.3g}"
        )
    e_bar = z_bar * scales.mg_peV_per_um
    return DoubleMirrorMode(m, float(L), e_bar, z_bar, a, b, math.sqrt(n2), n2_bracket,
                            -1.0, scales, ca, cb)


def solve_modes(scales: ScaleSystem, L, m_max):
    """First ``m_max`` modes of a slit of width ``L`` micrometres.

    Sign changes of the boundary determinant are located by scanning the turning
    height in steps of ``z0 / 4`` and then refined with Brent's method.

    Raises
    ------
    DomainError
        For ``L <= 0`` or ``m_max`` outside ``[1, 20]``.
    RootFindingError
        If a root cannot be bracketed; the message names the missing index.
    """
    L = float(L)
    if not (math.isfinite(L) and L > 0.0):
        raise DomainError(f"slit width L must be positive, got {L}")
    if isinstance(m_max, bool) or int(m_max) != m_max or not 1 <= m_max <= MAX_MODES:
        raise DomainError(f"m_max must be an integer in [1, {MAX_MODES}], got {m_max!r}")
    m_max = int(m_max)
    step = scales.z0 / 4.0
    # the m-th level cannot sit above the m-th level of an infinite well of width L
    # plus the largest potential energy inside it
    e_well = (math.pi * m_max * scales.hbar) ** 2 / (2.0 * scales.m_N * (L * MICRON) ** 2) / PEV
    z_limit = L + e_well / scales.mg_peV_per_um + 4.0 * step
    modes = []
    lo = 0.0
    f_lo = _scaled_determinant(scales, L, lo)
    while len(modes) < m_max:
        hi = lo + step
        if hi > z_limit:
            raise RootFindingError(f"could not bracket mode m={len(modes) + 1} for L={L} um")
        f_hi = _scaled_determinant(scales, L, hi)
        if f_lo == 0.0:
            root = lo
        elif f_lo * f_hi < 0.0:
            root = brentq(lambda zb: _scaled_determinant(scales, L, zb), lo, hi,
                          xtol=1e-13, rtol=1e-15, maxiter=200)
        else:
            root = None
        if root is not None and root > 0.0:
            modes.append(_make_mode(scales, L, len(modes) + 1, root))
        lo, f_lo = hi, f_hi
    return modes


def _bracket(mode, z):
    x = (np.asarray(z, dtype=float) - mode.z_bar) / mode.scales.z0
    a, ap, b, bp = airy_all(x)
    return mode._cb * a - mode._ca * b, (mode._cb * ap - mode._ca * bp) / mode.scales.z0


def mode_profile(mode: DoubleMirrorMode, z):
    """Real stationary profile ``psi_m(z)`` (um^-1/2), zero outside ``[0, L]``."""
    z = np.asarray(z, dtype=float)
    inside = (z >= 0.0) & (z <= mode.L)
    y, _ = _bracket(mode, np.clip(z, 0.0, mode.L))
    return np.where(inside, mode.sign * mode.C_bar * y, 0.0)


def mode_profile_derivative(mode: DoubleMirrorMode, z):
    """``d psi_m / dz`` (um^-3/2) inside ``[0, L]``, zero outside."""
    z = np.asarray(z, dtype=float)
    inside = (z >= 0.0) & (z <= mode.L)
    _, dy = _bracket(mode, np.clip(z, 0.0, mode.L))
    return np.where(inside, mode.sign * mode.C_bar * dy, 0.0)


def mode_wavefunction(mode: DoubleMirrorMode, z, t=0.0):
    """``psi_m(z) exp(-i E_bar t / hbar)``; ``z`` and ``t`` broadcast."""
    z, t = np.broadcast_arrays(np.asarray(z, float), np.asarray(t, float))
    return mode_profile(mode, z) * np.exp(-1j * mode.omega * t)


def _mode_rule(mode, k_abs_max):
    z0 = mode.scales.z0
    # local wavenumber of the mode below its turning point
    local = math.sqrt(max(mode.z_bar, 0.0) / z0) / z0
    return quadrature.oscillation_panels(0.0, mode.L, k_abs_max + local, per_unit=0.5 / z0)


def mode_alpha(mode: DoubleMirrorMode, k, spec=None):
    """Stationary transforms ``alpha_c(k, m)`` and ``alpha_s(k, m)`` (um^1/2).

    ``alpha_c - i alpha_s = int_0^L exp(-i k z) s [b_m Ai - a_m Bi] dz``.
    """
    spec = spec or quadrature.DEFAULT_SPEC
    k = np.asarray(k, dtype=float)
    kmax = float(np.max(np.abs(k))) if k.size else 0.0
    x, w = _mode_rule(mode, kmax)
    y, _ = _bracket(mode, x)
    return quadrature.trig_transform(mode.sign * y, x, w, k, panel_order=quadrature.PANEL_ORDER)


def mode_momentum_amplitude(mode: DoubleMirrorMode, k, t=0.0, spec=None):
    """``F_m(k, t) = C_m(t) [alpha_c - i alpha_s]`` with ``k`` in 1/um."""
    ac, as_ = mode_alpha(mode, k, spec)
    c = mode.C_bar / math.sqrt(2.0 * math.pi) * np.exp(-1j * mode.omega * np.asarray(t, float))
    return c * (ac - 1j * as_)


def mode_spectral_function(mode: DoubleMirrorMode, k, spec=None):
    """Stationary momentum distribution ``|C_m|^2 (alpha_c^2 + alpha_s^2)`` (um)."""
    ac, as_ = mode_alpha(mode, k, spec)
    c2 = mode.C_bar ** 2 / (2.0 * math.pi)
    return c2 * (ac * ac + as_ * as_)


def spectral_tail(mode: DoubleMirrorMode, K):
    """``int_{|k|>K} |F_m(k)|^2 dk`` from the large-k expansion.

    The profile vanishes at both mirrors, so ``F ~ (psi'(0) - exp(-ikL) psi'(L)) / (sqrt(2 pi) k^2)``.
    The neglected terms are ``O(K^-5)``.
    """
    d0, dl = (float(v) for v in mode_profile_derivative(mode, np.array([0.0, mode.L])))
    mean = (d0 * d0 + dl * dl) * K ** -3 / 3.0
    osc = -2.0 * d0 * dl * quadrature.trig_tail(K, mode.L, 4, "cosine")
    return 2.0 * (mean + osc) / (2.0 * math.pi)
