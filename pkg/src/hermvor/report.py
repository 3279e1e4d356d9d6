"""Text tables and structured documents for census, cell and homology results.

Structured output is plain JSON in which every number is an exact string:
integers in decimal, rationals as ``p/q``, stabilizer orders both as decimal
and factored.  ``document_from_json`` inverts ``document_to_json``.
"""
from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction

from .cells import DegreeRow
from .homology import DegreeHomology
from .isometry import factorize
from .storage import rational_str
from .verification import MassReport


def factored(n: int) -> str:
    """``46080 -> '2^10*3^2*5'``."""
    if n == 1:
        return "1"
    return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(factorize(n).items()))


def multiset(counts: dict, fmt=str) -> str:
    """The ``A (k)`` multiplicity shorthand: ``{2: 3, 4: 1} -> '2 (3), 4'``."""
    parts = []
    for a, k in sorted(counts.items()):
        parts.append(f"{fmt(a)} ({k})" if k > 1 else fmt(a))
    return ", ".join(parts) if parts else "-"


# -- structured form --------------------------------------------------------------

def _counts_to_json(c):
    return [[str(a), str(k)] for a, k in sorted(c.items())]


def _counts_from_json(data):
    return {int(a): int(k) for a, k in data}


def row_to_json(r: DegreeRow):
    return {"n": str(r.n), "cells": str(r.cells), "stabilizers": _counts_to_json(r.stabilizers),
            "oriented": str(r.oriented), "nnz": str(r.nnz), "rank": str(r.rank),
            "divisors": _counts_to_json(r.divisors)}


def row_from_json(d) -> DegreeRow:
    return DegreeRow(int(d["n"]), int(d["cells"]), _counts_from_json(d["stabilizers"]),
                     int(d["oriented"]), int(d["nnz"]), int(d["rank"]),
                     _counts_from_json(d["divisors"]))


def homology_to_json(h: DegreeHomology):
    return {"n": str(h.n), "rank": str(h.rank), "torsion": _counts_to_json(h.torsion),
            "cohomology_degree": str(h.cohomology_degree), "label": h.label()}


def homology_from_json(d) -> DegreeHomology:
    return DegreeHomology(int(d["n"]), int(d["rank"]), Counter(_counts_from_json(d["torsion"])),
                          int(d["cohomology_degree"]))


def mass_to_json(m: MassReport):
    return {"sums": [[str(k), rational_str(s)] for k, s in sorted(m.sums.items())],
            "total": rational_str(m.total)}


def mass_from_json(d) -> MassReport:
    return MassReport({int(k): Fraction(s) for k, s in d["sums"]}, Fraction(d["total"]))


def census_to_json(records):
    return [{"class": str(i), "min_vectors": str(len(r.min_vectors)),
             "stabilizer_order": str(r.stabilizer_order),
             "stabilizer_factored": factored(r.stabilizer_order),
             "coords": [rational_str(c) for c in r.form.coords]}
            for i, r in enumerate(records)]


def document_to_json(doc: dict) -> str:
    """Serialize a run document (values already in exact-string form)."""
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False)


def document_from_json(text: str) -> dict:
    return json.loads(text)


# -- text tables --------------------------------------------------------------------

def _table(header, rows):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = lambda r: "  ".join(str(x).rjust(w) for x, w in zip(r, widths))
    out = [line(header), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    return "\n".join(out)


def census_table(records) -> str:
    rows = [(i, len(r.min_vectors), r.min_vectors.total_count, factored(r.stabilizer_order))
            for i, r in enumerate(records)]
    return _table(("class", "|M|/units", "|M|", "|Stab|"), rows)


def cells_table(rows: list[DegreeRow]) -> str:
    body = [(r.n, r.cells, multiset(r.stabilizers, factored), r.oriented, r.nnz, r.rank,
             multiset(r.divisors)) for r in rows]
    return _table(("n", "|S*_n|", "|Stab|", "|S_n|", "Omega", "rank", "elem. div."), body)


def homology_table(result) -> str:
    rows = [(n, h.label(), h.cohomology_degree) for n, h in sorted(result.degrees.items())]
    return _table(("n", "H_n(Vor)", "H^k(GL_N(O))"), rows)


def mass_lines(m: MassReport) -> str:
    terms = ", ".join(rational_str(t) for t in m.increasing())
    return f"mass terms by increasing dimension: {terms}\nalternating total: {rational_str(m.total)}"
