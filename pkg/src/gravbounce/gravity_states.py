"""Neutron eigenstates above a single horizontal mirror.

Lengths are in micrometres, energies in pico-electronvolts and times in
seconds.  Heights are usually handled in the scaled coordinate
``zeta = z / z0``, and momenta in the scaled wavenumber ``k = z0 k_p / hbar``.

The eigenfunctions are shifted Airy functions ``Ai(zeta + a_n)`` restricted to
``zeta >= 0``; ``a_n`` is the n-th zero of Ai and ``E_n = -a_n E0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .airy import ai, ai_prime, airy_zero
from .errors import DomainError

# CODATA 2018 values
NEUTRON_MASS = 1.67492749804e-27  # kg
HBAR = 1.054571817e-34  # J s
STANDARD_GRAVITY = 9.80665  # m s^-2
PEV = 1.602176634e-31  # J per peV
HBAR_PEV_S = HBAR / PEV  # hbar in peV s
MICRON = 1e-6

K_MAX = 8.0
"""Default largest scaled wavenumber for single-mirror momentum transforms."""


@dataclass(frozen=True)
class ScaleSystem:
    """Physical constants and the derived gravitational length/energy scales.

    Attributes
    ----------
    m_N : float
        Neutron mass in kg.
    g : float
        Gravitational acceleration in m/s^2.
    hbar : float
        Reduced Planck constant in J s.
    z0 : float
        ``(hbar^2 / (2 m_N^2 g))^(1/3)`` in micrometres.
    E0 : float
        ``(hbar^2 m_N g^2 / 2)^(1/3)`` in peV.
    """

    m_N: float
    g: float
    hbar: float
    z0: float
    E0: float

    @property
    def hbar_peV_s(self):
        """hbar expressed in peV s."""
        return self.hbar / PEV

    @property
    def mg_peV_per_um(self):
        """Gravitational energy gradient ``m_N g`` in peV per micrometre."""
        return self.m_N * self.g * MICRON / PEV

    def check(self, rtol=1e-12):
        """Recompute the scales from the constants and compare with the stored values."""
        z0, e0 = _derived_scales(self.m_N, self.g, self.hbar)
        return abs(z0 - self.z0) <= rtol * z0 and abs(e0 - self.E0) <= rtol * e0


def _derived_scales(m_N, g, hbar):
    z0 = (hbar ** 2 / (2.0 * m_N ** 2 * g)) ** (1.0 / 3.0) / MICRON
    e0 = (hbar ** 2 * m_N * g ** 2 / 2.0) ** (1.0 / 3.0) / PEV
    return z0, e0


def make_scales(constants=None, *, m_N=NEUTRON_MASS, g=STANDARD_GRAVITY, hbar=HBAR):
    """Build a :class:`ScaleSystem` from physical constants.

    Parameters
    ----------
    constants : mapping, optional
        May provide any of ``m_N``, ``g``, ``hbar``; keyword arguments are used
        for missing entries.
    m_N, g, hbar : float
        Neutron mass (kg), gravitational acceleration (m/s^2), hbar (J s).

    Examples
    --------
    >>> round(make_scales().z0, 3)
    5.868
    """
    if constants is not None:
        unknown = set(constants) - {"m_N", "g", "hbar"}
        if unknown:
            raise DomainError(f"unknown constants: {sorted(unknown)}")
        m_N = constants.get("m_N", m_N)
        g = constants.get("g", g)
        hbar = constants.get("hbar", hbar)
    for name, value in (("m_N", m_N), ("g", g), ("hbar", hbar)):
        if not (math.isfinite(value) and value > 0.0):
            raise DomainError(f"{name} must be positive and finite, got {value}")
    z0, e0 = _derived_scales(m_N, g, hbar)
    return ScaleSystem(float(m_N), float(g), float(hbar), z0, e0)


DEFAULT_SCALES = make_scales()


@dataclass(frozen=True)
class EnergyLevel:
    """Single-mirror level.

    Attributes
    ----------
    n : int
        Level index (1 is the ground state).
    a_n : float
        n-th zero of Ai.
    E_n : float
        Energy in peV, ``-a_n E0``.
    z_n : float
        Classical bounce height in micrometres, ``-a_n z0``.
    ai_prime : float
        ``Ai'(a_n)``, which fixes the normalization.
    scales : ScaleSystem
        Scales the level was built with.
    """

    n: int
    a_n: float
    E_n: float
    z_n: float
    ai_prime: float
    scales: ScaleSystem = field(repr=False)


def level(scales: ScaleSystem, n: int) -> EnergyLevel:
    """The single-mirror level with index ``n``."""
    zero = airy_zero(n)
    return EnergyLevel(n, zero.a_n, -zero.a_n * scales.E0, -zero.a_n * scales.z0, zero.ai_prime, scales)


def levels(scales: ScaleSystem, n_max: int) -> list[EnergyLevel]:
    """Levels ``1..n_max`` (``1 <= n_max <= 200``)."""
    if isinstance(n_max, bool) or int(n_max) != n_max or not 1 <= n_max <= 200:
        raise DomainError(f"n_max must be an integer in [1, 200], got {n_max!r}")
    return [level(scales, n) for n in range(1, int(n_max) + 1)]


def eigenfunction(lvl: EnergyLevel, zeta, normalized=False):
    """Eigenfunction at scaled height ``zeta``.

    Without normalization this is ``Ai(zeta + a_n)`` for ``zeta >= 0`` and 0
    below the mirror.  With ``normalized=True`` the result is divided by
    ``Ai'(a_n)`` so that ``int |psi|^2 d zeta = 1``.
    """
    zeta = np.asarray(zeta, dtype=float)
    val = np.where(zeta >= 0.0, ai(np.maximum(zeta, 0.0) + lvl.a_n), 0.0)
    if normalized:
        val = val / lvl.ai_prime
    return val if val.ndim else float(val)


def eigenfunction_derivative(lvl: EnergyLevel, zeta, normalized=False):
    """``d psi / d zeta``: ``Ai'(zeta + a_n)`` above the mirror, 0 below."""
    zeta = np.asarray(zeta, dtype=float)
    val = np.where(zeta >= 0.0, ai_prime(np.maximum(zeta, 0.0) + lvl.a_n), 0.0)
    if normalized:
        val = val / lvl.ai_prime
    return val if val.ndim else float(val)


def eigenfunction_z(lvl: EnergyLevel, z):
    """Eigenfunction at physical height ``z`` (um) normalized in micrometres (um^-1/2)."""
    zeta = np.asarray(z, dtype=float) / lvl.scales.z0
    return eigenfunction(lvl, zeta, normalized=True) / math.sqrt(lvl.scales.z0)


def _momentum_rule(lvl, k_abs_max, spec):
    b = quadrature.airy_tail_limit(lvl.n, spec)
    local = math.sqrt(abs(lvl.a_n))  # largest local wavenumber of Ai(zeta + a_n)
    return quadrature.oscillation_panels(0.0, b, k_abs_max + local, per_unit=0.5)


def momentum_components(lvl: EnergyLevel, k, normalized=False, spec=None, method="fixed"):
    """Cosine and sine transforms ``f_c(k, a_n)`` and ``f_s(k, a_n)``.

    ``f_c = (2 pi)^(-1/2) int_0^inf cos(k zeta) Ai(zeta + a_n) d zeta`` and
    ``f_s`` likewise with the sine.  With ``normalized=True`` both are divided
    by ``Ai'(a_n)``, the normalization of the eigenfunction in scaled units.

    Parameters
    ----------
    k : array_like
        Scaled wavenumbers with ``|k| <= spec.k_max``.
    method : {"fixed", "adaptive"}
        ``"fixed"`` reuses one composite Gauss-Legendre rule for all ``k``;
        ``"adaptive"`` integrates each wavenumber separately with error control.
    """
    spec = spec or quadrature.DEFAULT_SPEC
    k = np.asarray(k, dtype=float)
    kmax = float(np.max(np.abs(k))) if k.size else 0.0
    if kmax > spec.k_max:
        raise DomainError(f"|k| = {kmax} exceeds k_max = {spec.k_max}")
    if method == "fixed":
        x, w = _momentum_rule(lvl, kmax, spec)
        fc, fs = quadrature.trig_transform(ai(x + lvl.a_n), x, w, k, panel_order=quadrature.PANEL_ORDER)
    elif method == "adaptive":
        b = quadrature.airy_tail_limit(lvl.n, spec)
        f = lambda x: ai(x + lvl.a_n)  # noqa: E731
        fc = np.array([quadrature.oscillatory_integrate(f, kk, "cosine", 0.0, b, spec).value
                       for kk in k.ravel()]).reshape(k.shape)
        fs = np.array([quadrature.oscillatory_integrate(f, kk, "sine", 0.0, b, spec).value
                       for kk in k.ravel()]).reshape(k.shape)
    else:
        raise DomainError(f"unknown method {method!r}")
    scale = 1.0 / math.sqrt(2.0 * math.pi)
    if normalized:
        scale /= lvl.ai_prime
    return fc * scale, fs * scale


def momentum_amplitude(lvl: EnergyLevel, k, normalized=False, spec=None, method="fixed"):
    """Fourier amplitude ``F(k, a_n) = f_c - i f_s`` of the eigenfunction."""
    fc, fs = momentum_components(lvl, k, normalized, spec, method)
    return fc - 1j * fs


def momentum_spectrum(lvl: EnergyLevel, k, normalized=False, spec=None, method="fixed"):
    """Momentum spectrum ``|F(k, a_n)|^2 = f_c^2 + f_s^2``."""
    fc, fs = momentum_components(lvl, k, normalized, spec, method)
    return fc * fc + fs * fs


def physical_momentum(scales: ScaleSystem, k):
    """Physical momentum ``hbar k / z0`` (kg m/s) for scaled wavenumber ``k``."""
    return scales.hbar * np.asarray(k, dtype=float) / (scales.z0 * MICRON)


def scaled_wavenumber(scales: ScaleSystem, k_p):
    """Inverse of :func:`physical_momentum`."""
    return np.asarray(k_p, dtype=float) * scales.z0 * MICRON / scales.hbar


def wavenumber_per_um(scales: ScaleSystem, k):
    """Convert a scaled wavenumber to the dimensional one in 1/um (``k / z0``)."""
    return np.asarray(k, dtype=float) / scales.z0


@dataclass(frozen=True)
class SuperpositionSpec:
    """Coherent two-level superposition ``sqrt(p1) psi_1 + sqrt(p2) psi_2``.

    The relative phase of the two components is zero at ``t = 0``.
    """

    p1: float
    p2: float
    levels: tuple

    def __post_init__(self):
        if self.p1 < 0.0 or self.p2 < 0.0:
            raise DomainError("probabilities must be non-negative")
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise DomainError(f"probabilities must sum to 1, got {self.p1} + {self.p2}")
        if len(self.levels) != 2:
            raise DomainError("a superposition needs exactly two levels")

    @property
    def omega(self):
        """``(E1 - E2) / hbar`` in rad/s."""
        l1, l2 = self.levels
        return (l1.E_n - l2.E_n) / l1.scales.hbar_peV_s

    @property
    def period(self):
        """Beat period ``2 pi hbar / |E2 - E1|`` in seconds (infinite if degenerate)."""
        w = abs(self.omega)
        return math.inf if w == 0.0 else 2.0 * math.pi / w


def superposition(p1, p2, scales=DEFAULT_SCALES, n=(1, 2)):
    """Convenience constructor for a :class:`SuperpositionSpec`."""
    return SuperpositionSpec(p1, p2, (level(scales, n[0]), level(scales, n[1])))


def superposition_density(spec: SuperpositionSpec, zeta, t, normalized=False):
    """Time-dependent position density of a two-level superposition.

    ``p1 psi_1^2 + p2 psi_2^2 + 2 sqrt(p1 p2) psi_1 psi_2 cos((E1 - E2) t / hbar)``.
    ``zeta`` and ``t`` broadcast against each other.
    """
    l1, l2 = spec.levels
    zeta, t = np.broadcast_arrays(np.asarray(zeta, float), np.asarray(t, float))
    psi1 = np.asarray(eigenfunction(l1, zeta, normalized))
    psi2 = np.asarray(eigenfunction(l2, zeta, normalized))
    cross = 2.0 * math.sqrt(spec.p1 * spec.p2) * psi1 * psi2 * np.cos(spec.omega * t)
    return spec.p1 * psi1 ** 2 + spec.p2 * psi2 ** 2 + cross


def superposition_density_average(spec: SuperpositionSpec, zeta, normalized=False):
    """Position density averaged over one beat period (interference term dropped)."""
    l1, l2 = spec.levels
    psi1 = np.asarray(eigenfunction(l1, zeta, normalized))
    psi2 = np.asarray(eigenfunction(l2, zeta, normalized))
    return spec.p1 * psi1 ** 2 + spec.p2 * psi2 ** 2


def beat_frequency(l1: EnergyLevel, l2: EnergyLevel):
    """Angular beat frequency ``(E2 - E1) / hbar`` in rad/s."""
    return (l2.E_n - l1.E_n) / l1.scales.hbar_peV_s


def superposition_momentum_density(spec: SuperpositionSpec, k, t, normalized=False, qspec=None):
    """Time-dependent momentum density ``|F_s(k, t)|^2`` of a two-level superposition.

    ``p1|F_1|^2 + p2|F_2|^2 + 2 sqrt(p1 p2) {cos(w t)[fc1 fc2 + fs1 fs2] - sin(w t)[fs1 fc2 - fc1 fs2]}``
    with ``w = (E1 - E2) / hbar``.  ``k`` and ``t`` broadcast against each other.
    """
    l1, l2 = spec.levels
    k, t = np.broadcast_arrays(np.asarray(k, float), np.asarray(t, float))
    fc1, fs1 = momentum_components(l1, k, normalized, qspec)
    fc2, fs2 = momentum_components(l2, k, normalized, qspec)
    wt = spec.omega * t
    cross = np.cos(wt) * (fc1 * fc2 + fs1 * fs2) - np.sin(wt) * (fs1 * fc2 - fc1 * fs2)
    return (spec.p1 * (fc1 ** 2 + fs1 ** 2) + spec.p2 * (fc2 ** 2 + fs2 ** 2)
            + 2.0 * math.sqrt(spec.p1 * spec.p2) * cross)


def superposition_momentum_density_average(spec: SuperpositionSpec, k, normalized=False, qspec=None):
    """Momentum density averaged over one beat period."""
    l1, l2 = spec.levels
    return (spec.p1 * momentum_spectrum(l1, k, normalized, qspec)
            + spec.p2 * momentum_spectrum(l2, k, normalized, qspec))
