"""Wigner quasi-distributions of the pure states in this package.

For a state ``psi`` supported on ``[lo, hi]`` the Wigner function

    W(z, k) = 1/(2 pi) int exp(i k x) psi*(z + x/2) psi(z - x/2) dx

only receives contributions from ``|x| <= B(z) = 2 min(z - lo, hi - z)``.  With
``P(x) = psi*(z + x/2) psi(z - x/2)`` one has ``P(-x) = conj(P(x))``, so

    W(z, k) = 1/pi int_0^B [cos(k x) Re P(x) - sin(k x) Im P(x)] dx,

which is real by construction.  For real states the sine term vanishes.  Every
state family (single mirror, two-level superposition, slit mode, released
packet) is wrapped in a :class:`WaveState` and handled by the same evaluator.

Units follow the state: single-mirror states use the scaled height ``zeta``
and the scaled wavenumber; slit modes and released packets use micrometres and
1/um.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import quadrature
from .double_mirror import DoubleMirrorMode, mode_profile, mode_profile_derivative
from .errors import DomainError
from .free_fall import Region2State, region2_derivative, region2_wavefunction
from .gravity_states import (
    EnergyLevel,
    SuperpositionSpec,
    eigenfunction,
    eigenfunction_derivative,
)

SCALED = "scaled"
MICRON_UNITS = "micron"

DEFAULT_SINGLE_AXES = ((0.0, 10.0), (-6.0, 6.0))
DEFAULT_MODE_K = (-3.0, 3.0)
DEFAULT_REGION2_Z = (0.0, 80.0)


@dataclass(frozen=True)
class WaveState:
    """A pure state prepared for Wigner evaluation.

    Attributes
    ----------
    psi, dpsi : callable
        Wave function and its derivative on an array of heights.
    lo, hi : float
        Support; ``psi`` vanishes outside ``[lo, hi]`` (or is negligible beyond ``hi``).
    kappa : float
        Largest local wavenumber of ``psi``, used to size the quadrature rules.
    scale : float
        Natural length of the problem in the state's units (1 for scaled units, ``z0`` in um).
    unit_tag : str
        ``"scaled"`` or ``"micron"``.
    real : bool
        True when ``psi`` is real, which removes the sine term.
    """

    psi: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    dpsi: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    lo: float
    hi: float
    kappa: float
    scale: float
    unit_tag: str
    real: bool = True


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Wigner values on a rectangular grid.

    ``W[i, j]`` is the value at ``(z_axis[i], k_axis[j])``.
    """

    z_axis: np.ndarray
    k_axis: np.ndarray
    W: np.ndarray
    unit_tag: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("z_axis", "k_axis"):
            ax = np.asarray(getattr(self, name), dtype=float)
            if ax.ndim != 1 or ax.size < 1 or np.any(np.diff(ax) <= 0.0):
                raise DomainError(f"{name} must be a strictly increasing 1-D array")
        if np.shape(self.W) != (len(self.z_axis), len(self.k_axis)):
            raise DomainError("W must have shape (len(z_axis), len(k_axis))")
        if np.iscomplexobj(self.W):
            raise DomainError("W must be real")

    def integral(self):
        """``int int W dz dk`` by the trapezoid rule on the grid."""
        return float(np.trapezoid(np.trapezoid(self.W, self.k_axis, axis=1), self.z_axis))

    def purity(self):
        """``2 pi int int W^2 dz dk``; 1 for a normalized pure state."""
        inner = np.trapezoid(self.W * self.W, self.k_axis, axis=1)
        return float(2.0 * math.pi * np.trapezoid(inner, self.z_axis))

    def k_marginal(self):
        """Trapezoid integral over the sampled ``k`` range at every ``z``."""
        return np.trapezoid(self.W, self.k_axis, axis=1)

    def z_marginal(self):
        """Trapezoid integral over the sampled ``z`` range at every ``k``."""
        return np.trapezoid(self.W, self.z_axis, axis=0)


# ---------------------------------------------------------------------------
# state adapters


def single_state(lvl: EnergyLevel, normalized=False, spec=None) -> WaveState:
    """Single-mirror eigenstate ``Ai(zeta + a_n) Theta(zeta)`` in scaled units."""
    spec = spec or quadrature.DEFAULT_SPEC
    return WaveState(
        lambda x: eigenfunction(lvl, x, normalized),
        lambda x: eigenfunction_derivative(lvl, x, normalized),
        0.0,
        quadrature.airy_tail_limit(lvl, spec),
        math.sqrt(abs(lvl.a_n)),
        1.0,
        SCALED,
    )


def superposition_state(sup: SuperpositionSpec, t, normalized=False, spec=None) -> WaveState:
    """Two-level superposition at time ``t`` (s) in scaled units.

    Up to a global phase the state is ``sqrt(p1) psi_1 + sqrt(p2) psi_2 exp(i w t)``
    with ``w = (E1 - E2) / hbar``.
    """
    spec = spec or quadrature.DEFAULT_SPEC
    l1, l2 = sup.levels
    c1 = math.sqrt(sup.p1)
    c2 = math.sqrt(sup.p2) * np.exp(1j * sup.omega * float(t))

    def psi(x):
        return c1 * eigenfunction(l1, x, normalized) + c2 * eigenfunction(l2, x, normalized)

    def dpsi(x):
        return (c1 * eigenfunction_derivative(l1, x, normalized)
                + c2 * eigenfunction_derivative(l2, x, normalized))

    deepest = l1 if abs(l1.a_n) > abs(l2.a_n) else l2
    return WaveState(psi, dpsi, 0.0, quadrature.airy_tail_limit(deepest, spec),
                     math.sqrt(abs(deepest.a_n)), 1.0, SCALED, real=False)


def mode_state(mode: DoubleMirrorMode) -> WaveState:
    """Stationary slit mode on ``[0, L]`` in micrometres."""
    z0 = mode.scales.z0
    kappa = math.sqrt(max(mode.z_bar, 0.0) / z0) / z0
    return WaveState(
        lambda z: mode_profile(mode, z),
        lambda z: mode_profile_derivative(mode, z),
        0.0, mode.L, kappa, z0, MICRON_UNITS,
    )


def region2_state(state: Region2State, t, spec=None) -> WaveState:
    """Released packet at time ``t`` (s) in micrometres."""
    spec = spec or quadrature.DEFAULT_SPEC
    z0 = state.scales.z0
    hi = float(np.max(state.z_n)) + spec.tail_pad * z0
    kappa = math.sqrt(max(abs(lv.a_n) for lv in state.levels)) / z0
    t = float(t)
    real = t == 0.0
    return WaveState(
        lambda z: region2_wavefunction(state, z, t),
        lambda z: region2_derivative(state, z, t),
        0.0, hi, kappa, z0, MICRON_UNITS, real=real,
    )


# ---------------------------------------------------------------------------
# evaluation


def _half_width(state: WaveState, z):
    return 2.0 * min(z - state.lo, state.hi - z)


def _correlation(state: WaveState, z, x):
    u = z + 0.5 * x
    v = z - 0.5 * x
    p = np.conj(state.psi(u)) * state.psi(v)
    return np.asarray(p)


def wigner_row(state: WaveState, z: float, k) -> np.ndarray:
    """``W(z, k)`` for one height and an array of wavenumbers."""
    k = np.asarray(k, dtype=float)
    z = float(z)
    b = _half_width(state, z)
    if not b > 0.0:
        return np.zeros(k.shape)
    kmax = float(np.max(np.abs(k))) if k.size else 0.0
    x, w = quadrature.oscillation_panels(0.0, b, kmax + state.kappa, per_unit=0.5 / state.scale)
    p = _correlation(state, z, x)
    if state.real:
        c, _ = quadrature.trig_transform(np.real(p), x, w, k, panel_order=quadrature.PANEL_ORDER)
        return c / math.pi
    vals = np.stack([np.real(p), np.imag(p)])
    c, s = quadrature.trig_transform(vals, x, w, k, panel_order=quadrature.PANEL_ORDER)
    return (c[0] - s[1]) / math.pi


def wigner_values(state: WaveState, z, k) -> np.ndarray:
    """``W`` at broadcast arrays ``z`` and ``k``; zero outside the support."""
    z, k = np.broadcast_arrays(np.asarray(z, float), np.asarray(k, float))
    out = np.zeros(z.shape)
    zf, kf, of = z.ravel(), k.ravel(), out.reshape(-1)
    for zz in np.unique(zf):
        sel = zf == zz
        of[sel] = wigner_row(state, zz, kf[sel])
    return out if out.ndim else float(out)


def wigner_grid(state: WaveState, z_axis, k_axis, workers=1, metadata=None) -> PhaseSpaceGrid:
    """Fill a :class:`PhaseSpaceGrid`; rows are independent and may run on ``workers`` threads."""
    z_axis = np.asarray(z_axis, dtype=float)
    k_axis = np.asarray(k_axis, dtype=float)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            rows = list(pool.map(lambda zz: wigner_row(state, zz, k_axis), z_axis))
    else:
        rows = [wigner_row(state, zz, k_axis) for zz in z_axis]
    W = np.array(rows, dtype=float).reshape(z_axis.size, k_axis.size)
    return PhaseSpaceGrid(z_axis, k_axis, W, state.unit_tag, dict(metadata or {}))


def wigner_single(lvl: EnergyLevel, zeta, k, normalized=False):
    """Wigner function of a single-mirror eigenstate; zero for ``zeta < 0``."""
    return wigner_values(single_state(lvl, normalized), zeta, k)


def wigner_superposition(sup: SuperpositionSpec, zeta, k, t, normalized=False):
    """Time-resolved Wigner function of a two-level superposition at one time ``t``."""
    return wigner_values(superposition_state(sup, t, normalized), zeta, k)


def wigner_superposition_average(sup: SuperpositionSpec, zeta, k, normalized=False):
    """Beat-period average ``p1 W_1 + p2 W_2`` (the interference term averages to zero)."""
    l1, l2 = sup.levels
    return (sup.p1 * wigner_single(l1, zeta, k, normalized)
            + sup.p2 * wigner_single(l2, zeta, k, normalized))


def wigner_double_mirror(mode: DoubleMirrorMode, z, k):
    """Wigner function of a slit mode; ``z`` in um, ``k`` in 1/um, zero outside ``[0, L]``."""
    return wigner_values(mode_state(mode), z, k)


def wigner_region2(state: Region2State, z, k, t=0.0):
    """Wigner function of the released packet at one time ``t`` (s); zero for ``z < 0``."""
    return wigner_values(region2_state(state, t), z, k)


# ---------------------------------------------------------------------------
# marginals


K_TIMES_B = 128.0
"""Minimum ``K B`` for the large-k expansion; both rule sizes grow only with ``K B``."""


def default_k_cutoff(state: WaveState, b=None):
    """Wavenumber beyond which the large-k expansion of ``W`` is used.

    The expansion is in powers of ``1 / (k B)``, so the cutoff grows as the
    correlation window ``B`` shrinks near the edges of the support.
    """
    K = max(16.0 / state.scale, 4.0 * state.kappa)
    if b:
        K = max(K, K_TIMES_B / b)
    return K


def _k_tail(state: WaveState, z, b, K):
    # P(x) vanishes at x = B together with psi'' (psi'' is proportional to psi
    # wherever the potential is finite), which leaves
    #   W ~ [Re P'(B) cos(kB) / k^2 - Re P''(B) sin(kB) / k^3] / pi
    # for the k-even part; the k-odd sine part cancels between k and -k.
    u = np.array([z + 0.5 * b])
    v = np.array([z - 0.5 * b])
    pu, pv = np.conj(state.psi(u))[0], state.psi(v)[0]
    du, dv = np.conj(state.dpsi(u))[0], state.dpsi(v)[0]
    p1 = float(np.real(0.5 * (du * pv - pu * dv)))
    p2 = float(np.real(-0.5 * du * dv))
    cos_part = quadrature.trig_tail(K, b, 2, "cosine")
    sin_part = quadrature.trig_tail(K, b, 3, "sine")
    return 2.0 * (p1 * cos_part - p2 * sin_part) / math.pi


def k_marginal(state: WaveState, z, K=None):
    """``int W(z, k) dk`` over all ``k``: quadrature on ``[-K, K]`` plus the analytic tail."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.zeros(z.shape)
    for i, zz in enumerate(z):
        b = _half_width(state, float(zz))
        if not b > 0.0:
            continue
        kc = float(K) if K is not None else default_k_cutoff(state, b)
        kk, w = quadrature.oscillation_panels(-kc, kc, b + state.scale, per_unit=state.scale)
        out[i] = float(np.sum(w * wigner_row(state, zz, kk))) + _k_tail(state, float(zz), b, kc)
    return out


def z_marginal(state: WaveState, k, panels_per_unit=None):
    """``int W(z, k) dz`` over the support, split where ``B(z)`` changes branch."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    kmax = float(np.max(np.abs(k))) if k.size else 0.0
    mid = 0.5 * (state.lo + state.hi)
    total = np.zeros(k.shape)
    for a, b in ((state.lo, mid), (mid, state.hi)):
        if panels_per_unit is None:
            zz, w = quadrature.oscillation_panels(a, b, kmax + state.kappa,
                                                  per_unit=0.5 / state.scale)
        else:
            zz, w = quadrature.gauss_legendre_panels(a, b, max(1, int(math.ceil((b - a) * panels_per_unit))))
        for zi, wi in zip(zz, w):
            total += wi * wigner_row(state, zi, k)
    return total
