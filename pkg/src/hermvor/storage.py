"""Line-oriented JSON persistence for perfect forms and cell databases.

Every record is one JSON object per line.  Rationals are written as ``"p/q"``
strings and group orders as decimal strings, so nothing passes through
floating point.  Files are append-only while a computation runs, which makes
an interrupted run resumable from whatever was flushed.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction

from .hermitian import HermitianForm, minimal_vectors
from .isometry import GroupElement, StabilizerGroup, VectorConfig

FORMAT = 1


def rational_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    return Fraction(s)


def _stab_to_json(st: StabilizerGroup):
    return {"order": str(st.order), "generators": [g.to_json() for g in st.generators]}


def _stab_from_json(D, data) -> StabilizerGroup:
    return StabilizerGroup([GroupElement.from_json(D, g) for g in data["generators"]],
                           int(data["order"]))


def _read_lines(path):
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                # a torn final line from an interrupted write
                break
    return out


class PerfectFormCheckpoint:
    """Resumable record of a perfect-form enumeration."""

    def __init__(self, path):
        self.path = os.fspath(path)
        self._next_id = 0

    def _append(self, obj):
        with open(self.path, "a") as fh:
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
            fh.flush()

    def load(self, N: int, D: int):
        """``(classes, done)`` from the file, empty if it does not exist yet."""
        from .voronoi import PerfectFormRecord

        if not os.path.exists(self.path):
            self._append({"kind": "header", "format": FORMAT, "N": N, "D": D})
            return [], set()
        lines = _read_lines(self.path)
        head = lines[0] if lines else None
        if not head or head.get("kind") != "header" or (head["N"], head["D"]) != (N, D):
            raise ValueError(f"{self.path} is not a checkpoint for N={N}, D={D}")
        classes, done = [], set()
        for obj in lines[1:]:
            if obj["kind"] == "class":
                A = HermitianForm(D, N, [parse_rational(c) for c in obj["coords"]])
                mv = minimal_vectors(A)
                stored = tuple(tuple(v) for v in obj["vectors"])
                if mv.minimum != 1 or set(mv.vectors) != set(stored):
                    raise ValueError(f"checkpoint class {obj['id']} does not verify")
                classes.append(PerfectFormRecord(A, mv))
            elif obj["kind"] == "done":
                i = obj["id"]
                rec = classes[i]
                rec.neighbors = [tuple(x) for x in obj["neighbors"]]
                if "stabilizer" in obj:
                    rec._stabilizer = _stab_from_json(D, obj["stabilizer"])
                done.add(i)
        self._next_id = len(classes)
        return classes, done

    def add_class(self, rec):
        if not os.path.exists(self.path):
            self._append({"kind": "header", "format": FORMAT, "N": rec.N, "D": rec.D})
        self._append({"kind": "class", "id": self._next_id,
                      "coords": [rational_str(c) for c in rec.form.coords],
                      "vectors": [list(v) for v in rec.min_vectors.vectors]})
        self._next_id += 1

    def mark_done(self, i, neighbors, stabilizer=None):
        obj = {"kind": "done", "id": i, "neighbors": [list(x) for x in neighbors]}
        if stabilizer is not None:
            obj["stabilizer"] = _stab_to_json(stabilizer)
        self._append(obj)


def save_complex(cx, path):
    """Write a cell database: one header line, then one line per cell."""
    tmp = os.fspath(path) + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(json.dumps({"kind": "header", "format": FORMAT, "N": cx.N, "D": cx.D,
                             "dims": cx.dims}) + "\n")
        for n in sorted(cx.cells, reverse=True):
            for i, c in enumerate(cx.cells[n]):
                obj = {
                    "kind": "cell", "dim": n, "index": i,
                    "vectors": [list(v) for v in c.vectors],
                    "stabilizer": _stab_to_json(c.stabilizer),
                    "orientable": c.orientable,
                    "orientation_basis": list(c.orientation_basis),
                    "faces": [{"facet": list(l.facet), "orbit_size": l.orbit_size,
                               "target": l.target, "witness": l.witness.to_json(),
                               "sign": l.sign} for l in c.faces],
                }
                fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
    os.replace(tmp, path)


def load_complex(path):
    """Read a cell database back; differentials are rebuilt from the stored signs."""
    from .cells import Cell, FaceLink, VoronoiComplex, assemble_differentials

    lines = _read_lines(path)
    head = lines[0]
    if head.get("kind") != "header":
        raise ValueError(f"{path} has no header")
    N, D = head["N"], head["D"]
    cells = {}
    for obj in lines[1:]:
        if obj["kind"] != "cell":
            continue
        cfg = VectorConfig(D, N, [tuple(v) for v in obj["vectors"]])
        if [list(v) for v in cfg.vectors] != obj["vectors"]:
            raise ValueError("cell vectors are not in canonical order")
        c = Cell(cfg, obj["dim"], _stab_from_json(D, obj["stabilizer"]), obj["orientable"])
        c.faces = [FaceLink(tuple(f["facet"]), f["orbit_size"], f["target"],
                            GroupElement.from_json(D, f["witness"]), f["sign"])
                   for f in obj["faces"]]
        cells.setdefault(obj["dim"], []).append(c)
    cx = VoronoiComplex(N, D, cells)
    assemble_differentials(cx, recompute_signs=False)
    return cx


def perfect_form_record_json(rec):
    """Exact-string summary of one perfect form class."""
    return {"coords": [rational_str(c) for c in rec.form.coords],
            "min_vectors": len(rec.min_vectors),
            "stabilizer_order": str(rec.stabilizer_order)}

