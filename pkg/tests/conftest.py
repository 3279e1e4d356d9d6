from __future__ import annotations

from functools import lru_cache

import pytest

from hermvor.cells import build_cells
from hermvor.voronoi import enumerate_perfect_forms


@lru_cache(maxsize=None)
def perfect_forms(N: int, D: int):
    return enumerate_perfect_forms(N, D)


@lru_cache(maxsize=None)
def voronoi_complex(N: int, D: int):
    return build_cells(perfect_forms(N, D))


@pytest.fixture(scope="session")
def complex_of():
    return voronoi_complex


@pytest.fixture(scope="session")
def perfect_of():
    return perfect_forms


@pytest.fixture(scope="session")
def gl4():
    """The full GL_4 complex over the Gaussian integers (a few minutes)."""
    return voronoi_complex(4, -4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, 11):
        ok, detail = RESULTS.get(k, (False, "test did not reach its verdict"))
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
