"""Consistency checks on a finished Voronoi complex.

Three independent checks guard the computation:

* the differentials compose to zero;
* the alternating sum of ``1/|Stab|`` over all cell orbits vanishes, since the
  Euler characteristic of GL_N(O) is zero for N >= 2;
* the chain ``sum 1/|Stab(sigma)| [sigma]`` over the top cells is a cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm


@dataclass
class MassReport:
    sums: dict = field(default_factory=dict)     # dimension -> Fraction
    total: Fraction = Fraction(0)

    @property
    def ok(self) -> bool:
        return self.total == 0

    def increasing(self) -> list[Fraction]:
        """Signed per-dimension terms ``(-1)^k sum 1/|Stab|`` by increasing dimension."""
        return [(-1) ** k * s for k, s in sorted(self.sums.items())]


def mass_formula(cells) -> MassReport:
    """Per-dimension sums of ``1/|Stab|`` and their alternating total.

    ``cells`` maps dimension to cells, or is a complex with a ``cells`` map.
    Stabilizer orders are read off the cells as stored.
    """
    if hasattr(cells, "cells"):
        cells = cells.cells
    rep = MassReport()
    for k, cs in sorted(cells.items()):
        s = sum((Fraction(1, c.stabilizer.order) for c in cs), Fraction(0))
        rep.sums[k] = s
        rep.total += (-1) ** k * s
    return rep


@dataclass
class XiReport:
    ok: bool
    vector: list              # lcm-scaled coefficients of xi on the top cells
    image: list               # d_top applied to ``vector``


def xi_cycle_check(cx) -> XiReport:
    """Check that the stabilizer-weighted sum of the top cells is a cycle."""
    top = cx.top
    tops = cx.cells.get(top, [])
    if any(not c.orientable for c in tops):
        raise AssertionError("a top cell is not orientable")
    orders = [c.stabilizer.order for c in tops]
    L = lcm(*orders) if orders else 1
    vec = [L // o for o in orders]
    d = cx.differentials.get(top)
    if d is None:
        return XiReport(True, vec, [])
    img = [0] * d.rows
    for (i, j), x in d.entries.items():
        img[i] += x * vec[j]
    return XiReport(all(x == 0 for x in img), vec, img)


def _compose_zero(d_lo, d_hi) -> bool:
    """Whether ``d_lo @ d_hi`` vanishes, both given as sparse matrices."""
    by_row = {}
    for (i, k), x in d_lo.entries.items():
        by_row.setdefault(k, []).append((i, x))
    prod = {}
    for (k, j), y in d_hi.entries.items():
        for i, x in by_row.get(k, ()):
            prod[(i, j)] = prod.get((i, j), 0) + x * y
    return all(v == 0 for v in prod.values())


def chain_identity(cx) -> bool:
    """Exact check of ``d_{n-1} d_n = 0`` for every pair of stored differentials."""
    ds = cx.differentials if hasattr(cx, "differentials") else cx
    for n, d in ds.items():
        lo = ds.get(n - 1)
        if lo is None:
            continue
        if lo.cols != d.rows:
            raise ValueError(f"shape mismatch between d_{n - 1} and d_{n}")
        if not _compose_zero(lo, d):
            return False
    return True


@dataclass
class VerificationReport:
    chain_identity: bool
    mass: MassReport
    xi: XiReport

    @property
    def ok(self) -> bool:
        return self.chain_identity and self.mass.ok and self.xi.ok


def verify(cx) -> VerificationReport:
    return VerificationReport(chain_identity(cx), mass_formula(cx), xi_cycle_check(cx))
