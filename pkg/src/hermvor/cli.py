"""Command line interface: ``hermvor {perfect-forms,cells,homology,verify}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

from . import report
from .cells import build_cells, summarize
from .homology import homology
from .isometry import torsion_prime_bound
from .number_field import is_fundamental
from .storage import PerfectFormCheckpoint, load_complex, save_complex
from .verification import verify
from .voronoi import enumerate_perfect_forms

log = logging.getLogger("hermvor")


@dataclass
class RunConfig:
    disc: int
    rank: int
    out: str | None = None
    checkpoint: str | None = None
    workers: int = 1
    fmt: str = "table"

    def validate(self):
        if self.disc >= 0 or not is_fundamental(self.disc):
            raise ValueError(f"{self.disc} is not a negative fundamental discriminant")
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def tag(self):
        return f"N{self.rank}_D{-self.disc}"

    def path(self, name):
        if self.out is None:
            return None
        os.makedirs(self.out, exist_ok=True)
        return os.path.join(self.out, f"{name}_{self.tag}")

    def to_json(self):
        return {"disc": str(self.disc), "rank": str(self.rank), "workers": str(self.workers)}


def _perfect(cfg: RunConfig):
    ck = PerfectFormCheckpoint(cfg.checkpoint) if cfg.checkpoint else None
    return enumerate_perfect_forms(cfg.rank, cfg.disc, checkpoint=ck)


def _complex(cfg: RunConfig):
    db = cfg.path("cells")
    db = db + ".jsonl" if db else None
    if db and os.path.exists(db):
        log.info("reading cell database %s", db)
        cx = load_complex(db)
        if (cx.N, cx.D) != (cfg.rank, cfg.disc):
            raise ValueError(f"{db} belongs to a different (N, D)")
        return cx
    cx = build_cells(_perfect(cfg), workers=cfg.workers)
    if db:
        save_complex(cx, db)
    return cx


def _emit(cfg: RunConfig, doc: dict, text: str, name: str):
    if cfg.fmt == "json-like":
        out = report.document_to_json(doc)
        print(out)
        ext = ".json"
    else:
        out = text
        print(text)
        ext = ".txt"
    p = cfg.path(name)
    if p:
        with open(p + ext, "w") as fh:
            fh.write(out + "\n")


def cmd_perfect_forms(cfg: RunConfig) -> int:
    recs = _perfect(cfg)
    doc = {"config": cfg.to_json(), "count": str(len(recs)), "census": report.census_to_json(recs)}
    text = f"perfect forms for N={cfg.rank}, D={cfg.disc}: {len(recs)}\n" + report.census_table(recs)
    _emit(cfg, doc, text, "perfect")
    return 0


def cmd_cells(cfg: RunConfig) -> int:
    cx = _complex(cfg)
    rows = summarize(cx)
    doc = {"config": cfg.to_json(), "table": [report.row_to_json(r) for r in rows]}
    _emit(cfg, doc, report.cells_table(rows), "cells_summary")
    return 0


def _verification_doc(rep):
    return {"chain_identity": rep.chain_identity, "mass": report.mass_to_json(rep.mass),
            "xi": {"ok": rep.xi.ok, "vector": [str(x) for x in rep.xi.vector]},
            "ok": rep.ok}


def _verification_text(rep):
    lines = [f"d o d = 0: {'pass' if rep.chain_identity else 'FAIL'}",
             report.mass_lines(rep.mass),
             f"mass formula: {'pass' if rep.mass.ok else 'FAIL'}",
             f"xi = ({', '.join(map(str, rep.xi.vector))}) is a cycle: {'pass' if rep.xi.ok else 'FAIL'}"]
    return "\n".join(lines)


def cmd_homology(cfg: RunConfig) -> int:
    cx = _complex(cfg)
    rep = verify(cx)
    rows = summarize(cx)
    text = [report.cells_table(rows), ""]
    doc = {"config": cfg.to_json(), "table": [report.row_to_json(r) for r in rows],
           "verification": _verification_doc(rep)}
    if rep.chain_identity:
        h = homology(cx, check=False)
        primes = sorted(torsion_prime_bound(cfg.rank, cfg.disc))
        text += [report.homology_table(h),
                 f"(valid modulo torsion at the primes {', '.join(map(str, primes))})", ""]
        doc["homology"] = [report.homology_to_json(d) for _, d in sorted(h.degrees.items())]
        doc["caveat_primes"] = [str(p) for p in primes]
    text.append(_verification_text(rep))
    _emit(cfg, doc, "\n".join(text), "homology")
    return 0 if rep.ok else 1


def cmd_verify(cfg: RunConfig) -> int:
    rep = verify(_complex(cfg))
    _emit(cfg, {"config": cfg.to_json(), "verification": _verification_doc(rep)},
          _verification_text(rep), "verify")
    return 0 if rep.ok else 1


COMMANDS = {"perfect-forms": cmd_perfect_forms, "cells": cmd_cells,
            "homology": cmd_homology, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="hermvor", description=__doc__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--disc", type=int, required=True, help="negative fundamental discriminant D")
    p.add_argument("--rank", type=int, required=True, help="rank N")
    p.add_argument("--out", help="directory for tables, summaries and the cell database")
    p.add_argument("--checkpoint", help="perfect-form checkpoint file (created or resumed)")
    p.add_argument("--workers", type=int, default=1, help="processes for stabilizer computations")
    p.add_argument("--format", dest="fmt", choices=("table", "json-like"), default="table")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig(args.disc, args.rank, args.out, args.checkpoint, args.workers, args.fmt)
    try:
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    return COMMANDS[args.command](cfg)


if __name__ == "__main__":   # pragma: no cover
    sys.exit(main())
