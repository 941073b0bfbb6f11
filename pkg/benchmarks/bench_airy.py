"""Compare the compiled and pure-Python Airy kernels.

Run with ``python3 benchmarks/bench_airy.py [--repeat N] [--size N]``.  For each
available backend the script times a vectorised evaluation of Ai, Ai', Bi, Bi'
over the range used by the library and one momentum transform of a bound
state, then prints a table and the speed-up of the compiled kernel.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from gravbounce import airy, gravity_states as gs


def _cases(size):
    x = np.linspace(-40.0, 12.0, size)
    lvl = gs.level(gs.DEFAULT_SCALES, 3)
    k = np.linspace(-8.0, 8.0, 401)
    return {
        f"airy_all({size} points)": lambda: airy.airy_all(x),
        "momentum transform (401 k)": lambda: gs.momentum_components(lvl, k, normalized=True),
    }


def run(repeat=5, size=20000):
    previous = airy.get_backend()
    results = {}
    try:
        for backend in airy.available_backends():
            airy.set_backend(backend)
            for name, fn in _cases(size).items():
                fn()  # warm-up
                best = min(timeit.repeat(fn, number=1, repeat=repeat))
                results[(name, backend)] = best
    finally:
        airy.set_backend(previous)
    return results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=20000)
    args = parser.parse_args(argv)
    results = run(args.repeat, args.size)
    backends = airy.available_backends()
    names = sorted({name for name, _ in results})
    header = f"{'case':32s}" + "".join(f"{b:>14s}" for b in backends)
    if "compiled" in backends and "python" in backends:
        header += f"{'speed-up':>10s}"
    print(header)
    for name in names:
        line = f"{name:32s}" + "".join(f"{results[(name, b)] * 1e3:12.2f}ms" for b in backends)
        if "compiled" in backends and "python" in backends:
            line += f"{results[(name, 'python')] / results[(name, 'compiled')]:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
