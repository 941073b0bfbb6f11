"""Regenerate ``tests/data/oracles.json`` with mpmath at 30 significant digits.

Run ``python3 tests/make_oracles.py``.  The file is committed so the test suite
does not need the slow arbitrary-precision evaluations; the values here are
computed independently of the package (own Airy functions, own root finding,
own quadrature).
"""
from __future__ import annotations

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30

M_N = mp.mpf("1.67492749804e-27")
HBAR = mp.mpf("1.054571817e-34")
G = mp.mpf("9.80665")
PEV = mp.mpf("1.602176634e-31")
Z0 = (HBAR ** 2 / (2 * M_N ** 2 * G)) ** (mp.mpf(1) / 3) * mp.mpf(10) ** 6  # um
E0 = (HBAR ** 2 * M_N * G ** 2 / 2) ** (mp.mpf(1) / 3) / PEV  # peV
MG = M_N * G * mp.mpf("1e-6") / PEV  # peV per um

AIRY_POINTS = [-30.0, -12.3, -8.5, -8.0, -7.99, -5.0, -2.5, -1.0, 0.0, 0.3, 1.0, 2.7, 5.0,
               7.99, 8.0, 8.5, 12.0, 20.0]
MOMENTUM_K = [0.0, 0.5, 1.0, 2.5, 5.0]
L_SLIT = 28
H_STEP = 27


def f(x):
    return float(x)


def airy_values():
    out = []
    for x in AIRY_POINTS:
        out.append([x, f(mp.airyai(x)), f(mp.airyai(x, 1)), f(mp.airybi(x)), f(mp.airybi(x, 1))])
    return out


def zeros(n_max=20):
    rows = []
    for n in range(1, n_max + 1):
        a = mp.airyaizero(n)
        rows.append([n, f(a), f(mp.airyai(a, 1))])
    return rows


def momentum(n_max=3):
    rows = []
    for n in range(1, n_max + 1):
        a = mp.airyaizero(n)
        pts = mp.linspace(0, 40, 161)
        for k in MOMENTUM_K:
            fc = mp.quad(lambda x: mp.cos(k * x) * mp.airyai(x + a), pts) / mp.sqrt(2 * mp.pi)
            fs = mp.quad(lambda x: mp.sin(k * x) * mp.airyai(x + a), pts) / mp.sqrt(2 * mp.pi)
            rows.append([n, k, f(fc), f(fs)])
    return rows


def determinant(zb):
    x1, x2 = -zb / Z0, (L_SLIT - zb) / Z0
    return mp.airyai(x1) * mp.airybi(x2) - mp.airybi(x1) * mp.airyai(x2)


def slit_modes(m_max=6):
    roots = []
    grid = mp.linspace(mp.mpf("0.01"), 200, 8000)
    prev = determinant(grid[0])
    for lo, hi in zip(grid[:-1], grid[1:]):
        cur = determinant(hi)
        if prev * cur < 0:
            roots.append(mp.findroot(determinant, (lo, hi), solver="anderson"))
            if len(roots) == m_max:
                break
        prev = cur
    return roots


def release_coefficients(roots, n_max=15, m_max=2):
    rows = []
    for m in range(1, m_max + 1):
        zb = roots[m - 1]
        a, b = mp.airyai(-zb / Z0), mp.airybi(-zb / Z0)
        for n in range(1, n_max + 1):
            an = mp.airyaizero(n)
            zn = -an * Z0
            aip = mp.airyai(an, 1)

            def integrand(z):
                x = (z - H_STEP - zb) / Z0
                return mp.airyai((z - zn) / Z0) * (b * mp.airyai(x) - a * mp.airybi(x))

            # the slit mode is chosen with positive slope at its lower mirror,
            # i.e. psi = -C (b Ai - a Bi)
            val = -mp.quad(integrand, mp.linspace(H_STEP, H_STEP + L_SLIT, 29)) / (Z0 * aip ** 2)
            rows.append([m, n, f(val)])
    return rows


def main():
    roots = slit_modes()
    data = {
        "z0_um": f(Z0),
        "E0_peV": f(E0),
        "airy": airy_values(),
        "zeros": zeros(),
        "momentum": momentum(),
        "slit_L28": [[m + 1, f(zb), f(zb * MG)] for m, zb in enumerate(roots)],
        "release_D_h27_L28": release_coefficients(roots),
    }
    path = Path(__file__).with_name("data") / "oracles.json"
    path.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
