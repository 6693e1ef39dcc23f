import csv
import io
import json
import random
from fractions import Fraction

from nilcover import corpus
from nilcover.builders import triangulated_polygon, triple_from_weights
from nilcover.cli import TOWER_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_validate_minimal_pair(capsys):
    code, out, _ = run(capsys, "validate", "--input", "g2-N2")
    assert code == 0
    (row,) = json.loads(out)
    assert row["genus"] == 2 and row["N"] == 2 and row["minimal"] is True


def test_validate_flags_a_bigon(capsys):
    code, out, _ = run(capsys, "validate", "--input", "g2-wiggled", "--format", "csv")
    assert code == 1
    (row,) = rows(out)
    assert row["minimal"] == "False"


def test_validate_reports_schema_errors_with_position(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text('{"rotations": [[0, 1],\n  [2, 3]\n')
    code, _, err = run(capsys, "validate", "--input", str(bad))
    assert code == 2
    assert "broken.json:3:1" in err


def test_unknown_input(capsys):
    code, _, err = run(capsys, "validate", "--input", "no-such-example")
    assert code == 2 and "no such file" in err


def test_missing_input(capsys):
    code, _, err = run(capsys, "tower")
    assert code == 2 and "--input" in err


def test_tower_csv_columns(capsys):
    code, out, _ = run(capsys, "tower", "--input", "g2-N2", "--input", "g2-sep", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == ",".join(TOWER_COLUMNS)
    table = rows(out)
    assert [r["name"] for r in table] == ["g2-N2", "g2-sep"]
    for r in table:
        assert r["all_checks"] == "True"
        assert int(r["k"]) <= float(r["k_bound"])
    assert int(table[0]["k"]) <= 13


def test_tower_certificates_round_trip(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "tower", "--input", "g2-N4", "--format", "cert", "--out", str(out_dir))
    assert code == 0 and out == ""
    cert = out_dir / "g2-N4.cert.json"
    assert cert.exists() and (out_dir / "tower.csv").exists()
    code, out, _ = run(capsys, "validate", "--certificate", str(cert))
    assert code == 0 and json.loads(out)["valid"] is True


def test_tampered_certificate_fails_validation(tmp_path, capsys):
    out_dir = tmp_path / "out"
    run(capsys, "tower", "--input", "g2-N4", "--format", "cert", "--out", str(out_dir))
    cert = out_dir / "g2-N4.cert.json"
    data = json.loads(cert.read_text())
    lv = data["levels"][0]
    lv["cocycle"] = format(int(lv["cocycle"], 16) ^ 1, "x")
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", "--certificate", str(cert))
    assert code == 1
    assert json.loads(out)["problems"]


def test_tower_minimizes_non_minimal_input(capsys):
    code, out, _ = run(capsys, "tower", "--input", "g2-wiggled", "--format", "csv")
    assert code == 0
    (row,) = rows(out)
    assert int(row["N0"]) == corpus.load("g2-wiggled").n - 2


def test_tower_is_byte_identical(tmp_path, capsys):
    texts = []
    for i in range(2):
        d = tmp_path / str(i)
        run(capsys, "tower", "--input", "g2-N10", "--format", "cert", "--seed", "5", "--out", str(d))
        texts.append((d / "g2-N10.cert.json").read_bytes())
    assert texts[0] == texts[1]


def test_tower_rejects_genus_one(tmp_path, capsys):
    t = triple_from_weights(triangulated_polygon(1), [1, 0, 1], [1, 2, 1], random.Random(1))
    p = tmp_path / "torus.json"
    p.write_text(json.dumps(t.to_dict()))
    code, out, _ = run(capsys, "validate", "--input", str(p))
    assert code == 0 and json.loads(out)[0]["genus"] == 1
    code, _, err = run(capsys, "tower", "--input", str(p))
    assert code == 2 and "genus" in err


def test_audit_small(capsys):
    code, out, _ = run(capsys, "audit", "--min-dim", "3", "--max-dim", "4", "--families", "5", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert len(table) == 10
    for r in table:
        assert r["random1_exact"] == "True" and r["random2_ok"] == "True" and r["zeta_exact"] == "True"
        assert 2 * Fraction(r["random1_average"]) == int(r["m"])


def test_magnus_words(capsys):
    code, out, _ = run(capsys, "magnus", "--word", "abAB", "--word", "aA", "--word", "a")
    assert code == 0
    got = [r["depth"] for r in json.loads(out)]
    assert got == ["2", "trivial", "1"]


def test_magnus_witness(capsys):
    code, out, _ = run(capsys, "magnus", "--input", "punctured-torus", "--format", "csv")
    assert code == 0
    (row,) = rows(out)
    assert row["rank"] == "2" and int(row["depth"]) >= 1


def test_magnus_needs_a_free_group(capsys):
    code, _, err = run(capsys, "magnus", "--input", "g2-N2")
    assert code == 2 and "not free" in err


def test_double_punctured_torus(capsys):
    code, out, _ = run(capsys, "double", "--input", "punctured-torus")
    assert code == 0
    (row,) = json.loads(out)
    assert row["double_genus"] == 2 and row["genus_check"] and row["chain_ok"] and row["all_checks"]


def test_double_needs_boundary(capsys):
    code, _, err = run(capsys, "double", "--input", "g2-N2")
    assert code == 2 and "boundary" in err


def test_bounds_values(capsys):
    code, out, _ = run(capsys, "bounds", "--format", "csv", "--d", "9623", "--k", "9622", "--n", "2")
    assert code == 0
    table = {(r["name"], r["argument"]): r for r in rows(out)}
    assert table[("smallest_d_isect_above_2", "")]["value"] == "9623"
    assert table[("first_positive_log_branch", "")]["value"] == "9622"
    assert table[("c", "")]["value"].startswith("0.0817")
    assert table[("tower_length_cap", "2")]["value"] == "13"


def test_examples_listing_and_files(tmp_path, capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    assert [r["name"] for r in rows(out)] == corpus.names()
    code, _, _ = run(capsys, "examples", "--name", "pants", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "pants.json").read_text() == corpus.load_text("pants")
