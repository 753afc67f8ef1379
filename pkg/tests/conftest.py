"""Shared solver runs and the acceptance-line reporter.

Solves are cached per session so that several test modules can share the
same (deterministic) result.
"""

import functools

import pytest

from gravbose.atmosphere import solve_atmosphere
from gravbose.ring import solve_ring
from gravbose.spherical import shoot_spherical

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def spherical(n_nodes):
    return shoot_spherical(n_nodes)


@functools.lru_cache(maxsize=None)
def atmosphere(mu, kind, value):
    return solve_atmosphere(mu, kind, value)


@functools.lru_cache(maxsize=None)
def ring(l):
    return solve_ring(l)


@pytest.fixture(scope="session")
def sph():
    return spherical


@pytest.fixture(scope="session")
def atm():
    return atmosphere


@pytest.fixture(scope="session")
def ring_solution():
    return ring


@pytest.fixture(scope="session")
def acceptance_report():
    def report(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
