"""Numpy implementation of the Airy kernel and the shared coefficient tables.

Three regimes are used:

* ``|x| >= X_ASYM``: the standard asymptotic expansions (exponential form for
  positive argument, modulus/phase form for negative argument).
* ``|x| < X_ASYM``: a Taylor expansion of the Airy ODE ``y'' = x y`` about the
  nearest point of a uniform anchor grid (spacing ``ANCHOR_STEP``), so the
  expansion step never exceeds ``ANCHOR_STEP / 2``.

The anchor values are built once at import by Taylor continuation of the ODE
from exactly known data: the Maclaurin values at ``x = 0`` and the asymptotic
values at ``x = +X_ASYM``.  Each solution is continued in its stable direction
(``Bi`` forward, ``Ai`` backward on the positive axis; both outward on the
oscillatory negative axis).
"""
from math import gamma, pi, sqrt

import numpy as np

X_ASYM = 8.0
ANCHOR_STEP = 0.25
N_ASYM_TERMS = 30
N_TAYLOR_TERMS = 22
N_BUILD_TERMS = 40

AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * gamma(2.0 / 3.0))
AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * gamma(1.0 / 3.0))
BI0 = 1.0 / (3.0 ** (1.0 / 6.0) * gamma(2.0 / 3.0))
BIP0 = 3.0 ** (1.0 / 6.0) / gamma(1.0 / 3.0)

SQRT_PI = sqrt(pi)


def _asymptotic_coefficients(n):
    u = np.empty(n)
    v = np.empty(n)
    u[0] = 1.0
    v[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v[k] = -(6 * k + 1) / (6 * k - 1) * u[k]
    return u, v


U_COEF, V_COEF = _asymptotic_coefficients(2 * N_ASYM_TERMS + 2)


def asymptotic_positive(x):
    """Ai, Ai', Bi, Bi' for ``x >= X_ASYM`` (arrays)."""
    x = np.asarray(x, dtype=float)
    zeta = (2.0 / 3.0) * x * np.sqrt(x)
    inv = 1.0 / zeta
    su_m = np.zeros_like(x)  # sum (-1)^k u_k / zeta^k
    sv_m = np.zeros_like(x)
    su_p = np.zeros_like(x)  # sum u_k / zeta^k
    sv_p = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(N_ASYM_TERMS):
        sign = -1.0 if k % 2 else 1.0
        su_m += sign * U_COEF[k] * p
        sv_m += sign * V_COEF[k] * p
        su_p += U_COEF[k] * p
        sv_p += V_COEF[k] * p
        p = p * inv
    q = x ** 0.25
    em = np.exp(-zeta)
    ep = np.exp(zeta)
    ai = em / (2.0 * SQRT_PI * q) * su_m
    aip = -q * em / (2.0 * SQRT_PI) * sv_m
    bi = ep / (SQRT_PI * q) * su_p
    bip = q * ep / SQRT_PI * sv_p
    return ai, aip, bi, bip


def asymptotic_negative(x):
    """Ai, Ai', Bi, Bi' for ``x <= -X_ASYM`` (arrays)."""
    x = np.asarray(x, dtype=float)
    y = -x
    zeta = (2.0 / 3.0) * y * np.sqrt(y)
    inv2 = 1.0 / (zeta * zeta)
    pu = np.zeros_like(y)  # even-index u series
    qu = np.zeros_like(y)  # odd-index u series
    pv = np.zeros_like(y)
    qv = np.zeros_like(y)
    p = np.ones_like(y)
    for k in range(N_ASYM_TERMS // 2 + 1):
        sign = -1.0 if k % 2 else 1.0
        pu += sign * U_COEF[2 * k] * p
        pv += sign * V_COEF[2 * k] * p
        qu += sign * U_COEF[2 * k + 1] * p / zeta
        qv += sign * V_COEF[2 * k + 1] * p / zeta
        p = p * inv2
    q = y ** 0.25
    phase = zeta - 0.25 * pi
    c = np.cos(phase)
    s = np.sin(phase)
    ai = (c * pu + s * qu) / (SQRT_PI * q)
    aip = q * (s * pv - c * qv) / SQRT_PI
    bi = (-s * pu + c * qu) / (SQRT_PI * q)
    bip = q * (c * pv + s * qv) / SQRT_PI
    return ai, aip, bi, bip


def taylor(x0, y0, yp0, h, nterms):
    """Value and derivative of the ``y'' = x y`` solution through (x0, y0, yp0) at x0 + h.

    Works elementwise on arrays.
    """
    x0 = np.asarray(x0, dtype=float)
    h = np.asarray(h, dtype=float)
    c_prev2 = np.zeros(np.broadcast(x0, h).shape)  # c_{k-1}
    c_prev = np.asarray(y0, dtype=float) + c_prev2  # c_k, k=0
    c_cur = np.asarray(yp0, dtype=float) + c_prev2  # c_{k+1}, k=0
    val = c_prev + c_cur * h
    der = c_cur.copy()
    hp = h.copy()  # h^(k+1)
    hk = np.ones_like(hp)  # h^k
    for k in range(0, nterms - 2):
        # c_{k+2} = (x0 c_k + c_{k-1}) / ((k+1)(k+2))
        c_next = (x0 * c_prev + c_prev2) / ((k + 1.0) * (k + 2.0))
        hk = hp
        hp = hp * h
        val = val + c_next * hp
        der = der + (k + 2.0) * c_next * hk
        c_prev2, c_prev, c_cur = c_prev, c_cur, c_next
    return val, der


def _build_anchors():
    n_side = int(round(X_ASYM / ANCHOR_STEP))
    xs = np.arange(-n_side, n_side + 1) * ANCHOR_STEP
    table = np.empty((xs.size, 4))
    mid = n_side
    table[mid] = (AI0, AIP0, BI0, BIP0)

    # negative axis: both solutions oscillate, continue outward from 0
    ai, aip, bi, bip = AI0, AIP0, BI0, BIP0
    for j in range(mid - 1, -1, -1):
        x0 = xs[j + 1]
        ai, aip = (float(v) for v in taylor(x0, ai, aip, -ANCHOR_STEP, N_BUILD_TERMS))
        bi, bip = (float(v) for v in taylor(x0, bi, bip, -ANCHOR_STEP, N_BUILD_TERMS))
        table[j] = (ai, aip, bi, bip)

    # positive axis: Bi is dominant going forward
    bi, bip = BI0, BIP0
    for j in range(mid + 1, xs.size):
        bi, bip = (float(v) for v in taylor(xs[j - 1], bi, bip, ANCHOR_STEP, N_BUILD_TERMS))
        table[j, 2:] = (bi, bip)

    # positive axis: Ai is dominant going backward from the asymptotic region
    a = asymptotic_positive(np.array([xs[-1]]))
    ai, aip = float(a[0][0]), float(a[1][0])
    table[-1, :2] = (ai, aip)
    for j in range(xs.size - 2, mid, -1):
        ai, aip = (float(v) for v in taylor(xs[j + 1], ai, aip, -ANCHOR_STEP, N_BUILD_TERMS))
        table[j, :2] = (ai, aip)
    return xs, table


ANCHOR_X, ANCHOR_TABLE = _build_anchors()


def airy_all(x):
    """Ai, Ai', Bi, Bi' evaluated elementwise on a float array."""
    x = np.asarray(x, dtype=float)
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    bi = np.empty_like(x)
    bip = np.empty_like(x)

    pos = x >= X_ASYM
    neg = x <= -X_ASYM
    mid = ~(pos | neg)
    if pos.any():
        ai[pos], aip[pos], bi[pos], bip[pos] = asymptotic_positive(x[pos])
    if neg.any():
        ai[neg], aip[neg], bi[neg], bip[neg] = asymptotic_negative(x[neg])
    if mid.any():
        xm = x[mid]
        j = np.floor((xm - ANCHOR_X[0]) / ANCHOR_STEP + 0.5).astype(np.intp)
        np.clip(j, 0, ANCHOR_X.size - 1, out=j)
        x0 = ANCHOR_X[j]
        h = xm - x0
        row = ANCHOR_TABLE[j]
        ai[mid], aip[mid] = taylor(x0, row[:, 0], row[:, 1], h, N_TAYLOR_TERMS)
        bi[mid], bip[mid] = taylor(x0, row[:, 2], row[:, 3], h, N_TAYLOR_TERMS)
    return ai, aip, bi, bip
