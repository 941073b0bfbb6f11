"""One-dimensional quadrature for Airy-damped and oscillatory integrands.

Two families of tools live here.

Adaptive routines (:func:`integrate`, :func:`integrate_airy_tail`,
:func:`oscillatory_integrate`) return a :class:`QuadResult` carrying the value
and an explicit error estimate.  Each interval is integrated with an
``ORDER``-point Gauss-Legendre rule and compared against the same rule on its
two halves; intervals whose disagreement exceeds their share of the tolerance
are bisected.  All intervals that need refinement in one sweep are evaluated
with a single vectorized call of the integrand.

Fixed composite rules (:func:`gauss_legendre_panels`, :func:`trig_transform`)
serve batched transforms, where one set of integrand samples is reused for many
wavenumbers.  Panel widths are chosen from the largest wavenumber so every panel
spans at most half an oscillation period.

Integrands must be side-effect free and accept a 1-D float array, returning an
array of the same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, QuadratureError

ORDER = 15
"""Gauss-Legendre order used on each adaptive interval."""

PANEL_ORDER = 16
"""Gauss-Legendre order used on each panel of the fixed composite rules."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits shared by the integration routines.

    Parameters
    ----------
    abs_tol, rel_tol : float
        Convergence is declared once the error estimate is below
        ``max(abs_tol, rel_tol * |estimate|)``.
    max_subdivisions : int
        Upper bound on the number of intervals the adaptive scheme may create.
    tail_cutoff : float
        Envelope value below which an Airy-damped integrand is treated as zero.
    tail_pad : float
        Distance (scaled units) beyond the classical turning point ``|a_n|`` at
        which semi-infinite Airy integrals are truncated.
    k_max : float
        Largest wavenumber accepted by :func:`oscillatory_integrate`.
    """

    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_subdivisions: int = 4000
    tail_cutoff: float = 1e-12
    tail_pad: float = 15.0
    k_max: float = 20.0

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0.0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")
        if not self.tail_cutoff > 0.0:
            raise DomainError(f"tail_cutoff must be positive, got {self.tail_cutoff}")
        if not self.tail_pad > 0.0:
            raise DomainError(f"tail_pad must be positive, got {self.tail_pad}")
        if not self.k_max > 0.0:
            raise DomainError(f"k_max must be positive, got {self.k_max}")

    def tolerance(self, value):
        """Error target for an estimate ``value``."""
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class QuadResult:
    """Integral estimate with its error bound and bookkeeping."""

    value: float
    error: float
    n_eval: int
    n_intervals: int

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=None)
def _legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _rule_on(a, b, order):
    """Nodes (n_int, order) and weights for a Gauss rule on each [a_i, b_i]."""
    x, w = _legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes, weights


def _eval_rule(f, a, b):
    nodes, weights = _rule_on(a, b, ORDER)
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return np.sum(vals * weights, axis=1)


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              spec: QuadratureSpec | None = None, points=None) -> QuadResult:
    """Adaptive integral of a vectorized integrand over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Vectorized integrand.
    a, b : float
        Finite limits with ``a <= b``.
    spec : QuadratureSpec, optional
        Tolerances; defaults to :data:`DEFAULT_SPEC`.
    points : sequence of float, optional
        Interior breakpoints (kinks, discontinuities) used as initial panel edges.

    Returns
    -------
    QuadResult

    Raises
    ------
    QuadratureError
        When ``spec.max_subdivisions`` is exhausted; the exception carries the
        best estimate and its error.
    """
    spec = spec or DEFAULT_SPEC
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integration limits must be finite")
    if a > b:
        raise DomainError(f"integration limits must satisfy a <= b, got [{a}, {b}]")
    if a == b:
        return QuadResult(0.0, 0.0, 0, 0)

    edges = [a]
    if points is not None:
        edges += sorted(float(p) for p in points if a < p < b)
    edges.append(b)
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])

    parent = _eval_rule(f, lo, hi)
    n_eval = ORDER * lo.size
    done_value = 0.0
    done_error = 0.0
    total_width = b - a

    while True:
        mid = 0.5 * (lo + hi)
        both_lo = np.concatenate([lo, mid])
        both_hi = np.concatenate([mid, hi])
        halves = _eval_rule(f, both_lo, both_hi)
        n_eval += ORDER * both_lo.size
        left, right = halves[: lo.size], halves[lo.size:]
        refined = left + right
        err = np.abs(refined - parent)

        value = done_value + float(np.sum(refined))
        error = done_error + float(np.sum(err))
        n_intervals = lo.size * 2
        target = spec.tolerance(value)
        if error <= target:
            return QuadResult(value, error, n_eval, n_intervals)

        # each interval may spend its width-proportional share of the budget
        share = 0.5 * target * (hi - lo) / total_width
        bad = err > share
        if not bad.any():  # pragma: no cover - only reachable through rounding
            return QuadResult(value, error, n_eval, n_intervals)
        done_value += float(np.sum(refined[~bad]))
        done_error += float(np.sum(err[~bad]))
        if n_intervals + 2 * int(bad.sum()) > spec.max_subdivisions:
            raise QuadratureError(
                f"adaptive quadrature on [{a}, {b}] did not converge within "
                f"{spec.max_subdivisions} subdivisions (error {error:.3g} > {target:.3g})",
                value=value,
                error=error,
            )
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        parent = np.concatenate([left[bad], right[bad]])


def _zero_magnitude(n_hint):
    if hasattr(n_hint, "a_n"):
        return abs(float(n_hint.a_n))
    from .airy import airy_zero

    return abs(airy_zero(int(n_hint)).a_n)


def airy_tail_limit(n_hint, spec: QuadratureSpec | None = None, a: float = 0.0):
    """Upper truncation point ``|a_n| + tail_pad`` for an Airy-damped integrand."""
    spec = spec or DEFAULT_SPEC
    return max(_zero_magnitude(n_hint) + spec.tail_pad, float(a) + spec.tail_pad)


def integrate_airy_tail(f, a: float, n_hint, spec: QuadratureSpec | None = None,
                        points=None) -> QuadResult:
    """Integrate an Airy-damped integrand from ``a`` to infinity.

    The domain is cut at ``|a_n| + tail_pad``.  Beyond that point the integrand
    decays at least like ``Ai``, whose logarithmic derivative exceeds
    ``sqrt(tail_pad)``, so the discarded tail is bounded by
    ``|f(cut)| / sqrt(tail_pad)``.  This bound is added to the reported error.

    Parameters
    ----------
    f : callable
        Vectorized integrand in scaled units.
    a : float
        Lower limit.
    n_hint : AiryZero or int
        Zero that shifts the dominating Airy envelope.
    """
    spec = spec or DEFAULT_SPEC
    b = airy_tail_limit(n_hint, spec, a)
    res = integrate(f, a, b, spec, points=points)
    tail = float(abs(np.asarray(f(np.array([b])))[0])) / math.sqrt(spec.tail_pad)
    if tail > spec.abs_tol:
        raise QuadratureError(
            f"integrand is not negligible at the truncation point {b:g} (|f| = {tail:.3g})",
            value=res.value,
            error=res.error + tail,
        )
    return QuadResult(res.value, res.error + tail, res.n_eval + 1, res.n_intervals)


def half_period_edges(a, b, k):
    """Panel edges on ``[a, b]`` such that each panel spans at most ``pi / |k|``."""
    k = abs(float(k))
    n = 1 if k == 0.0 else max(1, int(math.ceil((b - a) * k / math.pi)))
    return np.linspace(a, b, n + 1)


def oscillatory_integrate(f, k: float, kind: str, a: float, b: float,
                          spec: QuadratureSpec | None = None, points=None) -> QuadResult:
    """Integral of ``f(x) * trig(k x)`` over ``[a, b]`` with ``trig`` cosine or sine.

    The interval is first split into panels no longer than half an oscillation
    period, then refined adaptively.
    """
    spec = spec or DEFAULT_SPEC
    if kind not in ("cosine", "sine"):
        raise DomainError(f"kind must be 'cosine' or 'sine', got {kind!r}")
    k = float(k)
    if abs(k) > spec.k_max:
        raise DomainError(f"|k| = {abs(k)} exceeds k_max = {spec.k_max}")
    if kind == "sine" and k == 0.0:
        return QuadResult(0.0, 0.0, 0, 0)
    trig = np.cos if kind == "cosine" else np.sin
    edges = list(half_period_edges(a, b, k)[1:-1])
    if points is not None:
        edges += list(points)
    return integrate(lambda x: f(x) * trig(k * x), a, b, spec, points=edges)


def gauss_legendre_panels(a, b, n_panels, order=PANEL_ORDER):
    """Nodes and weights of a composite Gauss-Legendre rule with equal panels.

    Returns
    -------
    nodes, weights : ndarray
        Flat arrays of length ``n_panels * order``.
    """
    if n_panels < 1:
        raise DomainError("n_panels must be >= 1")
    edges = np.linspace(a, b, int(n_panels) + 1)
    nodes, weights = _rule_on(edges[:-1], edges[1:], order)
    return nodes.ravel(), weights.ravel()


def oscillation_panels(a, b, k_max, order=PANEL_ORDER, min_panels=1, per_unit=0.0):
    """Composite rule resolving ``trig(k x)`` for all ``|k| <= k_max`` on ``[a, b]``.

    ``per_unit`` sets a floor on the panel density (panels per unit length) for
    integrands that vary quickly on their own.
    """
    width = float(b) - float(a)
    n = max(min_panels, int(math.ceil(width * abs(k_max) / math.pi)),
            int(math.ceil(width * per_unit)))
    return gauss_legendre_panels(a, b, max(n, 1), order)


def trig_transform(values, nodes, weights, k, chunk=256, panel_order=None):
    """Cosine and sine transforms of sampled data for many wavenumbers.

    Computes ``C(k) = sum_j w_j f_j cos(k x_j)`` and ``S(k) = sum_j w_j f_j sin(k x_j)``.

    Parameters
    ----------
    values : ndarray
        Samples ``f_j``, shape ``(n_nodes,)`` or ``(n_funcs, n_nodes)``.
    nodes, weights : ndarray
        Quadrature rule, shape ``(n_nodes,)``.
    k : array_like
        Wavenumbers.
    chunk : int
        Number of wavenumbers processed per block to bound memory.
    panel_order : int, optional
        Set when the rule comes from :func:`gauss_legendre_panels` with this
        order.  Every node is then a panel centre plus one of ``panel_order``
        shared offsets, and the phases are assembled by angle addition, which
        needs ``(n_panels + panel_order)`` trigonometric evaluations per
        wavenumber instead of ``n_nodes``.

    Returns
    -------
    cos_part, sin_part : ndarray
        Shape ``k.shape`` for 1-D ``values``, otherwise ``(n_funcs,) + k.shape``.
    """
    k = np.asarray(k, dtype=float)
    kf = k.ravel()
    nodes = np.asarray(nodes, dtype=float)
    fw = np.asarray(values) * weights
    single = fw.ndim == 1
    fw2 = np.atleast_2d(fw)
    n_f = fw2.shape[0]
    c = np.empty((n_f, kf.size))
    s = np.empty((n_f, kf.size))
    if panel_order and nodes.size % panel_order == 0 and nodes.size > panel_order:
        n_p = nodes.size // panel_order
        grid = nodes.reshape(n_p, panel_order)
        centre = 0.5 * (grid[:, 0] + grid[:, -1])
        offset = grid[0] - centre[0]
        fw3 = fw2.reshape(n_f * n_p, panel_order)
        for start in range(0, kf.size, chunk):
            sl = slice(start, start + chunk)
            ks = kf[sl]
            centre_phase = np.exp(1j * np.outer(ks, centre))  # (n_k, n_p)
            offset_phase = np.exp(1j * np.outer(offset, ks))  # (order, n_k)
            # panel sums over the shared offsets, laid out as (n_k, n_f, n_p)
            g = (fw3 @ offset_phase).reshape(n_f, n_p, ks.size).transpose(2, 0, 1)
            total = np.matmul(g, centre_phase[:, :, None])[:, :, 0]  # (n_k, n_f)
            c[:, sl] = total.real.T
            s[:, sl] = total.imag.T
    else:
        for start in range(0, kf.size, chunk):
            sl = slice(start, start + chunk)
            phase = np.outer(kf[sl], nodes)
            c[:, sl] = fw2 @ np.cos(phase).T
            s[:, sl] = fw2 @ np.sin(phase).T
    if single:
        return c[0].reshape(k.shape), s[0].reshape(k.shape)
    return c.reshape((n_f,) + k.shape), s.reshape((n_f,) + k.shape)


def trig_power_tails(x, p_max):
    """Semi-infinite integrals ``C_p = int_x^inf cos(u) u^-p du`` and ``S_p`` (sine).

    Returns two arrays indexed by ``p = 1..p_max`` (index 0 unused).  Built by
    integration by parts from the sine and cosine integrals ``Si`` and ``Ci``.
    """
    from scipy.special import sici

    x = float(x)
    if x <= 0.0:
        raise DomainError("trig_power_tails needs x > 0")
    si, ci = sici(x)
    c = np.zeros(p_max + 1)
    s = np.zeros(p_max + 1)
    c[1] = -ci
    s[1] = 0.5 * math.pi - si
    for p in range(2, p_max + 1):
        xp = x ** (1 - p)
        c[p] = (math.cos(x) * xp - s[p - 1]) / (p - 1)
        s[p] = (math.sin(x) * xp + c[p - 1]) / (p - 1)
    return c, s


def trig_tail(K, B, p, kind):
    """``int_K^inf trig(B k) k^-p dk`` for ``K > 0``; ``trig`` cosine or sine.

    For ``B == 0`` the cosine case reduces to ``K^(1-p)/(p-1)`` and the sine case to 0.
    """
    if B == 0.0:
        if kind == "cosine":
            return K ** (1 - p) / (p - 1)
        return 0.0
    sign = 1.0
    if B < 0.0:
        B = -B
        sign = -1.0 if kind == "sine" else 1.0
    c, s = trig_power_tails(K * B, p)
    val = c[p] if kind == "cosine" else s[p]
    return sign * val * B ** (p - 1)
