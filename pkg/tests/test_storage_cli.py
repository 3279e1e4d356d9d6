import json

import pytest

from hermvor import report
from hermvor.cells import summarize
from hermvor.cli import main
from hermvor.homology import homology
from hermvor.storage import PerfectFormCheckpoint, load_complex, save_complex
from hermvor.verification import mass_formula, verify
from hermvor.voronoi import enumerate_perfect_forms


def test_checkpoint_resume(tmp_path):
    path = tmp_path / "ck.jsonl"
    first = enumerate_perfect_forms(3, -8, checkpoint=PerfectFormCheckpoint(path))
    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["kind"] == "header"
    # drop the last "done" record, as if the run had been interrupted there
    path.write_text("\n".join(lines[:-1]) + "\n")
    again = enumerate_perfect_forms(3, -8, checkpoint=PerfectFormCheckpoint(path))
    assert [r.form for r in again] == [r.form for r in first]
    assert [r.stabilizer_order for r in again] == [r.stabilizer_order for r in first]


def test_checkpoint_for_other_case_is_refused(tmp_path):
    path = tmp_path / "ck.jsonl"
    enumerate_perfect_forms(2, -4, checkpoint=PerfectFormCheckpoint(path))
    with pytest.raises(ValueError):
        enumerate_perfect_forms(2, -3, checkpoint=PerfectFormCheckpoint(path))


def test_cell_database_round_trip(tmp_path, complex_of):
    cx = complex_of(3, -7)
    path = tmp_path / "cells.jsonl"
    save_complex(cx, path)
    back = load_complex(path)
    assert summarize(back) == summarize(cx)
    assert homology(back).ranks() == homology(cx).ranks()
    assert verify(back).ok


def test_corrupted_stabilizer_order_fails_the_mass_formula(tmp_path, complex_of):
    path = tmp_path / "cells.jsonl"
    save_complex(complex_of(3, -4), path)
    lines = path.read_text().splitlines()
    obj = json.loads(lines[3])
    obj["stabilizer"]["order"] = str(int(obj["stabilizer"]["order"]) ^ 1)
    lines[3] = json.dumps(obj)
    path.write_text("\n".join(lines) + "\n")
    assert not mass_formula(load_complex(path)).ok


def test_structured_output_round_trips(complex_of):
    cx = complex_of(3, -3)
    rows = summarize(cx)
    assert [report.row_from_json(report.row_to_json(r)) for r in rows] == rows
    h = homology(cx)
    for d in h.degrees.values():
        assert report.homology_from_json(report.homology_to_json(d)) == d
    m = mass_formula(cx)
    assert report.mass_from_json(report.mass_to_json(m)) == m
    doc = {"table": [report.row_to_json(r) for r in rows]}
    assert report.document_from_json(report.document_to_json(doc)) == doc


def test_factored_orders():
    assert report.factored(46080) == "2^10*3^2*5"
    assert report.factored(1) == "1"
    assert report.multiset({12: 2, 16: 1}, report.factored) == "2^2*3 (2), 2^4"


def test_cli_perfect_forms(capsys):
    assert main(["perfect-forms", "--disc", "-8", "--rank", "3"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "perfect forms for N=3, D=-8: 2"


def test_cli_homology_json(tmp_path, capsys):
    assert main(["homology", "--disc", "-4", "--rank", "3", "--out", str(tmp_path),
                 "--format", "json-like"]) == 0
    doc = json.loads(capsys.readouterr().out)
    ranks = {int(h["n"]): int(h["rank"]) for h in doc["homology"]}
    assert ranks[4] == ranks[5] == ranks[8] == 1
    assert doc["verification"]["ok"] is True
    assert doc["verification"]["mass"]["total"] == "0"
    assert (tmp_path / "cells_N3_D4.jsonl").exists()


def test_cli_table_is_stable(tmp_path, capsys):
    main(["homology", "--disc", "-4", "--rank", "3"])
    a = capsys.readouterr().out
    main(["homology", "--disc", "-4", "--rank", "3"])
    assert capsys.readouterr().out == a
    assert "Z + (Z_2)" in a


def test_cli_verify_detects_corruption(tmp_path, capsys):
    assert main(["cells", "--disc", "-4", "--rank", "3", "--out", str(tmp_path)]) == 0
    db = tmp_path / "cells_N3_D4.jsonl"
    lines = db.read_text().splitlines()
    obj = json.loads(lines[1])
    obj["stabilizer"]["order"] = str(int(obj["stabilizer"]["order"]) + 1)
    lines[1] = json.dumps(obj)
    db.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["verify", "--disc", "-4", "--rank", "3", "--out", str(tmp_path)]) == 1
    assert "mass formula: FAIL" in capsys.readouterr().out


def test_cli_rejects_bad_discriminant():
    with pytest.raises(SystemExit):
        main(["perfect-forms", "--disc", "-12", "--rank", "3"])
