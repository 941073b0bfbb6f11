"""Shared fixtures: frozen mpmath oracles, Airy backend parametrization."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from gravbounce import airy, free_fall as ff, gravity_states as gs

DATA = Path(__file__).with_name("data")


@pytest.fixture(scope="session")
def oracles():
    """High-precision reference values produced by ``tests/make_oracles.py``."""
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture(params=airy.available_backends())
def backend(request):
    """Run the test once per available Airy kernel."""
    previous = airy.set_backend(request.param)
    yield request.param
    airy.set_backend(previous)


@pytest.fixture(scope="session")
def scales():
    return gs.DEFAULT_SCALES


@pytest.fixture(scope="session")
def expansion_m1():
    return ff.default_expansion(1)


@pytest.fixture(scope="session")
def expansion_m2():
    return ff.default_expansion(2)


def trapezoid_grid(a, b, n):
    x = np.linspace(a, b, n)
    w = np.full(n, (b - a) / (n - 1))
    w[[0, -1]] *= 0.5
    return x, w


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" or "test_acceptance.py::test_criterion_" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::test_criterion_")[1]
            number = int(name.split("_")[0])
            detail = dict(rep.user_properties).get("detail", "")
            lines.append((number, f"criterion {number:2d} {name[3:]:<24} {'PASS' if rep.passed else 'FAIL'}  {detail}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
