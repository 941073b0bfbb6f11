"""Airy functions of real argument and the negative zeros of Ai.

The kernel comes in two interchangeable backends: a compiled Cython extension
(``_airy_ext``) and a numpy implementation (``_airy_py``).  The compiled one is
used when it can be imported; :func:`set_backend` switches explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _airy_py
from .errors import DomainError, RootFindingError

try:  # pragma: no cover - depends on the build
    from . import _airy_ext

    _airy_ext.set_tables(
        _airy_py.ANCHOR_X,
        np.ascontiguousarray(_airy_py.ANCHOR_TABLE),
        _airy_py.U_COEF,
        _airy_py.V_COEF,
        _airy_py.ANCHOR_STEP,
        _airy_py.X_ASYM,
        _airy_py.N_TAYLOR_TERMS,
        _airy_py.N_ASYM_TERMS,
    )
except ImportError:  # pragma: no cover
    _airy_ext = None

_BACKENDS = {"python": _airy_py.airy_all}
if _airy_ext is not None:
    _BACKENDS["compiled"] = _airy_ext.airy_all

_kernel = _BACKENDS.get("compiled", _airy_py.airy_all)

MAX_ZERO_INDEX = 200


def available_backends():
    """Names of the Airy kernels that can be selected."""
    return sorted(_BACKENDS)


def get_backend():
    """Name of the kernel currently in use."""
    for name, fn in _BACKENDS.items():
        if fn is _kernel:
            return name
    raise RuntimeError("unknown Airy backend")  # pragma: no cover


def set_backend(name):
    """Select the Airy kernel (``"compiled"`` or ``"python"``).

    Returns the name of the previously active backend so callers can restore it.
    """
    global _kernel
    if name not in _BACKENDS:
        raise DomainError(f"Airy backend {name!r} is not available; choose from {available_backends()}")
    previous = get_backend()
    _kernel = _BACKENDS[name]
    return previous


@dataclass(frozen=True)
class AiryValue:
    """Ai, Ai', Bi and Bi' at a single real argument."""

    x: float
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float

    @property
    def wronskian(self):
        """``Ai Bi' - Ai' Bi``, which equals ``1/pi`` exactly."""
        return self.ai * self.bi_prime - self.ai_prime * self.bi


@dataclass(frozen=True)
class AiryZero:
    """The ``n``-th negative zero ``a_n`` of Ai together with ``Ai'(a_n)``."""

    n: int
    a_n: float
    ai_prime: float


def airy_all(x):
    """Vectorized Airy functions.

    Parameters
    ----------
    x : array_like
        Real, finite arguments.

    Returns
    -------
    ai, ai_prime, bi, bi_prime : ndarray
        Arrays with the shape of ``x``.

    Raises
    ------
    DomainError
        If any argument is NaN or infinite.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Airy functions require finite arguments")
    return _kernel(arr)


def ai(x):
    """Ai(x) for array-like ``x``."""
    return airy_all(x)[0]


def ai_prime(x):
    """Ai'(x) for array-like ``x``."""
    return airy_all(x)[1]


def bi(x):
    """Bi(x) for array-like ``x``."""
    return airy_all(x)[2]


def airy_eval(x):
    """Evaluate all four Airy functions at a scalar argument.

    >>> round(airy_eval(0.0).ai, 10)
    0.3550280539
    """
    xf = float(x)
    if not math.isfinite(xf):
        raise DomainError(f"Airy functions require a finite argument, got {x!r}")
    a, ap, b, bp = _kernel(np.array([xf]))
    return AiryValue(xf, float(a[0]), float(ap[0]), float(b[0]), float(bp[0]))


def _zero_guess(n):
    t = 3.0 * math.pi * (4 * n - 1) / 8.0
    t2 = t ** -2
    return -t ** (2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * 77125.0 / 82944.0)))


def _ai_pair(x):
    v = _airy_py.airy_all(np.array([x]))
    return float(v[0][0]), float(v[1][0])


@lru_cache(maxsize=None)
def _zero(n):
    guess = _zero_guess(n)
    # zeros are separated by roughly pi / sqrt(|a_n|); a third of that brackets only a_n
    half = math.pi / math.sqrt(-guess) / 3.0
    lo, hi = guess - half, guess + half
    f_lo, f_hi = _ai_pair(lo)[0], _ai_pair(hi)[0]
    if f_lo * f_hi > 0.0:
        raise RootFindingError(f"could not bracket Airy zero a_{n}")
    x = guess
    for _ in range(100):
        f, fp = _ai_pair(x)
        if f == 0.0:
            break
        if f * f_lo > 0.0:
            lo, f_lo = x, f
        else:
            hi = x
        step = f / fp
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4e-16 * abs(x):
            x = x_new
            break
        x = x_new
    else:  # pragma: no cover
        raise RootFindingError(f"Newton iteration for a_{n} did not converge")
    return x, _ai_pair(x)[1]


def airy_zero(n):
    """Return the ``n``-th negative zero of Ai (``1 <= n <= 200``).

    The asymptotic estimate seeds a Newton iteration that is kept inside a
    sign-change bracket around the root.

    Examples
    --------
    >>> round(airy_zero(1).a_n, 5)
    -2.3381
    """
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"zero index must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= MAX_ZERO_INDEX:
        raise DomainError(f"zero index must satisfy 1 <= n <= {MAX_ZERO_INDEX}, got {n}")
    a_n, aip = _zero(n)
    return AiryZero(n, a_n, aip)


def airy_zeros(n_max):
    """Array of the first ``n_max`` zeros ``a_1, ..., a_{n_max}``."""
    return np.array([airy_zero(n).a_n for n in range(1, n_max + 1)])
