# cython: language_level=3
"""Compiled Airy kernel.

Same algorithm and tables as ``_airy_py``; the tables are handed over once by
``set_tables`` so both backends agree to rounding.
"""
import numpy as np

cimport cython
from libc.math cimport cos, sin, exp, sqrt, pow, floor, M_PI

cdef double[:, ::1] _table
cdef double[::1] _u
cdef double[::1] _v
cdef double _x_first, _step, _x_asym
cdef int _n_anchor, _n_taylor, _n_asym
cdef bint _ready = False


def set_tables(double[::1] anchor_x, double[:, ::1] table, double[::1] u, double[::1] v,
               double step, double x_asym, int n_taylor, int n_asym):
    global _table, _u, _v, _x_first, _step, _x_asym, _n_anchor, _n_taylor, _n_asym, _ready
    _table = table.copy()
    _u = u.copy()
    _v = v.copy()
    _x_first = anchor_x[0]
    _step = step
    _x_asym = x_asym
    _n_anchor = anchor_x.shape[0]
    _n_taylor = n_taylor
    _n_asym = n_asym
    _ready = True


cdef inline void _taylor(double x0, double y0, double yp0, double h, int nterms,
                         double* val, double* der) noexcept nogil:
    cdef double cm1 = 0.0, c0 = y0, c1 = yp0, c2
    cdef double hk = 1.0, hp = h
    cdef double v = y0 + yp0 * h
    cdef double d = yp0
    cdef int k
    for k in range(nterms - 2):
        c2 = (x0 * c0 + cm1) / ((k + 1.0) * (k + 2.0))
        hk = hp
        hp = hp * h
        v += c2 * hp
        d += (k + 2.0) * c2 * hk
        cm1 = c0
        c0 = c1
        c1 = c2
    val[0] = v
    der[0] = d


cdef inline void _asym_pos(double x, double* out) noexcept nogil:
    cdef double zeta = (2.0 / 3.0) * x * sqrt(x)
    cdef double inv = 1.0 / zeta
    cdef double sum_m = 0.0, sv_m = 0.0, sum_p = 0.0, sv_p = 0.0, p = 1.0, sgn = 1.0
    cdef int k
    for k in range(_n_asym):
        sum_m += sgn * _u[k] * p
        sv_m += sgn * _v[k] * p
        sum_p += _u[k] * p
        sv_p += _v[k] * p
        p *= inv
        sgn = -sgn
    cdef double q = pow(x, 0.25)
    cdef double em = exp(-zeta)
    cdef double ep = exp(zeta)
    cdef double sp = sqrt(M_PI)
    out[0] = em / (2.0 * sp * q) * sum_m
    out[1] = -q * em / (2.0 * sp) * sv_m
    out[2] = ep / (sp * q) * sum_p
    out[3] = q * ep / sp * sv_p


cdef inline void _asym_neg(double x, double* out) noexcept nogil:
    cdef double y = -x
    cdef double zeta = (2.0 / 3.0) * y * sqrt(y)
    cdef double inv2 = 1.0 / (zeta * zeta)
    cdef double pu = 0.0, qu = 0.0, pv = 0.0, qv = 0.0, p = 1.0, sgn = 1.0
    cdef int k
    for k in range(_n_asym // 2 + 1):
        pu += sgn * _u[2 * k] * p
        pv += sgn * _v[2 * k] * p
        qu += sgn * _u[2 * k + 1] * p / zeta
        qv += sgn * _v[2 * k + 1] * p / zeta
        p *= inv2
        sgn = -sgn
    cdef double q = pow(y, 0.25)
    cdef double phase = zeta - 0.25 * M_PI
    cdef double c = cos(phase)
    cdef double s = sin(phase)
    cdef double sp = sqrt(M_PI)
    out[0] = (c * pu + s * qu) / (sp * q)
    out[1] = q * (s * pv - c * qv) / sp
    out[2] = (-s * pu + c * qu) / (sp * q)
    out[3] = q * (c * pv + s * qv) / sp


cdef inline void _airy_one(double x, double* out) noexcept nogil:
    cdef int j
    cdef double x0, h
    if x >= _x_asym:
        _asym_pos(x, out)
    elif x <= -_x_asym:
        _asym_neg(x, out)
    else:
        j = <int>floor((x - _x_first) / _step + 0.5)
        if j >= _n_anchor:
            j = _n_anchor - 1
        x0 = _x_first + j * _step
        h = x - x0
        _taylor(x0, _table[j, 0], _table[j, 1], h, _n_taylor, &out[0], &out[1])
        _taylor(x0, _table[j, 2], _table[j, 3], h, _n_taylor, &out[2], &out[3])


@cython.boundscheck(False)
@cython.wraparound(False)
def airy_all(x):
    """Ai, Ai', Bi, Bi' evaluated elementwise on a float array."""
    if not _ready:
        raise RuntimeError("Airy tables not initialised")
    cdef double[::1] xv = np.ascontiguousarray(np.ravel(x), dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    ai = np.empty(n)
    aip = np.empty(n)
    bi = np.empty(n)
    bip = np.empty(n)
    cdef double[::1] a0 = ai, a1 = aip, b0 = bi, b1 = bip
    cdef double out[4]
    with nogil:
        for i in range(n):
            _airy_one(xv[i], out)
            a0[i] = out[0]
            a1[i] = out[1]
            b0[i] = out[2]
            b1[i] = out[3]
    shape = np.shape(x)
    return ai.reshape(shape), aip.reshape(shape), bi.reshape(shape), bip.reshape(shape)
