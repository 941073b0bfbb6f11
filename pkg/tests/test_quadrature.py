import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as si
from scipy.special import airy as sp_airy

from gravbounce import airy, quadrature as q
from gravbounce.errors import DomainError, QuadratureError

A1 = airy.airy_zero(1).a_n


def test_constant():
    res = q.integrate(lambda x: np.ones_like(x), 0.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-15)
    assert res.error <= 1e-9


def test_ai_between_first_zero_and_origin(backend):
    # fixed high-order Gauss rule with ten times the nodes of one adaptive panel set
    x, w = q.gauss_legendre_panels(A1, 0.0, 40, order=30)
    oracle = float(np.sum(w * sp_airy(x)[0]))
    assert q.integrate(airy.ai, A1, 0.0).value == pytest.approx(oracle, abs=1e-10)


def test_odd_integrand_vanishes():
    res = q.integrate(lambda x: (x - 1.5) ** 3 * np.cos(x - 1.5), 0.0, 3.0)
    assert abs(res.value) <= 1e-9


def test_reported_error_within_target():
    spec = q.QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12)
    res = q.integrate(lambda x: np.exp(-x * x), -3.0, 3.0, spec)
    assert res.error <= spec.tolerance(res.value)
    assert res.value == pytest.approx(math.sqrt(math.pi) * math.erf(3.0), abs=1e-12)


def test_budget_exhaustion_reports_best_estimate():
    spec = q.QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=3)
    with pytest.raises(QuadratureError) as info:
        q.integrate(lambda x: np.sin(1.0 / (x + 1e-3)), 0.0, 1.0, spec)
    assert math.isfinite(info.value.value)
    assert info.value.error > 0.0


@pytest.mark.parametrize("kwargs", [dict(abs_tol=0.0), dict(rel_tol=-1.0), dict(max_subdivisions=0),
                                    dict(tail_pad=0.0), dict(k_max=0.0)])
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        q.QuadratureSpec(**kwargs)


@settings(max_examples=40, deadline=None)
@given(st.floats(-5.0, 5.0), st.floats(-5.0, 5.0))
def test_linearity(alpha, beta):
    f = lambda x: np.exp(-x) * np.sin(3.0 * x)  # noqa: E731
    g = lambda x: x ** 2 / (1.0 + x)  # noqa: E731
    lhs = q.integrate(lambda x: alpha * f(x) + beta * g(x), 0.0, 2.0).value
    rhs = alpha * q.integrate(f, 0.0, 2.0).value + beta * q.integrate(g, 0.0, 2.0).value
    assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(alpha) + abs(beta))


def test_tightening_tolerance_never_hurts():
    exact = 2.0 / 3.0 * 2.0 ** 1.5
    errors = []
    for tol in (1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
        spec = q.QuadratureSpec(abs_tol=tol, rel_tol=tol)
        errors.append(abs(q.integrate(np.sqrt, 0.0, 2.0, spec).value - exact))
    assert all(b <= a for a, b in zip(errors, errors[1:]))


def test_airy_tail_normalization(backend):
    # int_0^inf Ai(x + a_n)^2 dx = Ai'(a_n)^2
    lvl = airy.airy_zero(1)
    res = q.integrate_airy_tail(lambda x: airy.ai(x + lvl.a_n) ** 2, 0.0, lvl)
    assert res.value == pytest.approx(lvl.ai_prime ** 2, rel=1e-10)


def test_airy_tail_of_zero_integrand():
    assert q.integrate_airy_tail(lambda x: np.zeros_like(x), 0.0, 1).value == 0.0


def test_airy_tail_doubling_domain(backend):
    spec = q.QuadratureSpec()
    f = lambda x: airy.ai(x + A1)  # noqa: E731
    base = q.integrate_airy_tail(f, 0.0, 1, spec).value
    wide = q.integrate(f, 0.0, 2.0 * q.airy_tail_limit(1, spec), spec).value
    assert base > 0.0
    assert abs(base - wide) < spec.abs_tol


def test_airy_tail_rejects_slow_decay():
    with pytest.raises(QuadratureError):
        q.integrate_airy_tail(lambda x: 1.0 / (1.0 + x), 0.0, 1)


def test_oscillatory_trivial_cases():
    f = lambda x: airy.ai(x + A1)  # noqa: E731
    b = q.airy_tail_limit(1)
    assert q.oscillatory_integrate(f, 0.0, "sine", 0.0, b).value == 0.0
    assert q.oscillatory_integrate(f, 0.0, "cosine", 0.0, b).value == pytest.approx(
        q.integrate(f, 0.0, b).value, abs=1e-12)


def test_oscillatory_against_dense_riemann_sum(backend):
    b = q.airy_tail_limit(1)
    x = np.linspace(0.0, b, 1_000_001)
    y = sp_airy(x + A1)[0] * np.cos(2.0 * x)
    oracle = si.simpson(y, x=x)
    got = q.oscillatory_integrate(lambda t: airy.ai(t + A1), 2.0, "cosine", 0.0, b).value
    assert got == pytest.approx(oracle, abs=1e-8)


def test_oscillatory_domain_checks():
    with pytest.raises(DomainError):
        q.oscillatory_integrate(np.cos, 25.0, "cosine", 0.0, 1.0)
    with pytest.raises(DomainError):
        q.oscillatory_integrate(np.cos, 1.0, "tangent", 0.0, 1.0)


def test_half_period_edges():
    edges = q.half_period_edges(0.0, 10.0, 3.0)
    assert np.all(np.diff(edges) <= math.pi / 3.0 + 1e-12)
    assert len(q.half_period_edges(0.0, 10.0, 0.0)) == 2


def test_gauss_legendre_panels_integrate_polynomials_exactly():
    x, w = q.gauss_legendre_panels(-1.0, 2.0, 3, order=8)
    assert np.sum(w * x ** 15) == pytest.approx((2.0 ** 16 - 1.0) / 16.0, rel=1e-13)
    with pytest.raises(DomainError):
        q.gauss_legendre_panels(0.0, 1.0, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.lists(st.floats(-9.0, 9.0), min_size=1, max_size=30))
def test_panel_transform_equals_generic(n_panels, ks):
    x, w = q.gauss_legendre_panels(0.3, 14.0, n_panels)
    vals = np.vstack([np.exp(-x) * np.sin(x), 1.0 / (1.0 + x * x)])
    k = np.array(ks)
    c1, s1 = q.trig_transform(vals, x, w, k)
    c2, s2 = q.trig_transform(vals, x, w, k, panel_order=q.PANEL_ORDER)
    assert np.allclose(c1, c2, atol=1e-13, rtol=0.0)
    assert np.allclose(s1, s2, atol=1e-13, rtol=0.0)


def test_trig_transform_analytic():
    x, w = q.oscillation_panels(0.0, 40.0, 5.0)
    k = np.array([-2.0, 0.0, 0.5, 3.0])
    c, s = q.trig_transform(np.exp(-x), x, w, k, chunk=3, panel_order=q.PANEL_ORDER)
    # int_0^inf e^-x cos(kx) = 1/(1+k^2), sine part k/(1+k^2); tail beyond 40 is e^-40
    assert np.allclose(c, 1.0 / (1.0 + k * k), atol=1e-15)
    assert np.allclose(s, k / (1.0 + k * k), atol=1e-15)


@pytest.mark.parametrize("p", [2, 3, 4])
@pytest.mark.parametrize("kind", ["cosine", "sine"])
def test_trig_tail_against_mpmath(p, kind):
    K, B = 3.0, 1.7
    trig = mpmath.cos if kind == "cosine" else mpmath.sin
    with mpmath.workdps(30):
        oracle = float(mpmath.quadosc(lambda k: k ** -p * trig(B * k), [K, mpmath.inf], omega=B))
    parity = 1.0 if kind == "cosine" else -1.0
    assert q.trig_tail(K, B, p, kind) == pytest.approx(oracle, rel=1e-13, abs=1e-16)
    assert q.trig_tail(K, -B, p, kind) == pytest.approx(parity * oracle, rel=1e-13, abs=1e-16)
    assert q.trig_tail(K, 0.0, p, kind) == (K ** (1 - p) / (p - 1) if kind == "cosine" else 0.0)


def test_trig_power_tails_requires_positive_argument():
    with pytest.raises(DomainError):
        q.trig_power_tails(0.0, 3)
