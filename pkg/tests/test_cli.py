import csv
import io
import json

import pytest

from genli.cli import main
from genli.report import LI_COLUMNS, csv_text, svg_from_csv

from conftest import LITTLEWOOD_SUITE, ZERO_TABLE

SMALL = ["14.134725142", "21.022039639", "25.010857580"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zeros_info(capsys, write_table):
    code, out, _ = run(capsys, "zeros", "info", write_table(SMALL))
    rep = json.loads(out)
    assert code == 0
    assert rep["count"] == 3 and rep["t_max"] == "25.010857580"
    assert rep["schema_version"] == 1


def test_zeros_ingest_spot_checks(capsys, write_table):
    code, out, _ = run(capsys, "zeros", "ingest", write_table(SMALL), "--spot-checks", 3)
    rep = json.loads(out)
    assert code == 0 and len(rep["spot_checks"]) == 3


def test_zeros_descending_table(capsys, write_table):
    code, _, err = run(capsys, "zeros", "info", write_table([SMALL[1], SMALL[0]]))
    assert code == 1
    assert "line 2" in err


def test_li_compute_rows(capsys, tmp_path):
    code, out, _ = run(capsys, "li", "compute", "--zeros", ZERO_TABLE, "--a", 0, "--n-max", 5, "--t-cutoff", 1000,
                       "--precision-bits", 128)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert tuple(rows[0]) == LI_COLUMNS
    assert [r["n"] for r in rows] == ["1", "2", "3", "4", "5"]


def test_li_rejects_half(capsys):
    code, _, err = run(capsys, "li", "compute", "--zeros", ZERO_TABLE, "--a", 0.5)
    assert code == 2 and "degenerate" in err


def test_li_missing_table(capsys, tmp_path):
    code, _, err = run(capsys, "li", "compute", "--zeros", tmp_path / "none.txt")
    assert code == 2


def test_li_verify_identity_writes_reports(capsys, tmp_path):
    out_dir = tmp_path / "out"
    args = ["li", "verify-identity", "--zeros", ZERO_TABLE, "--a", "-0.5", "--n-max", 6, "--t-cutoff", 2000,
            "--precision-bits", 128, "--output-dir", out_dir, "--formats", "csv,json,svg"]
    code, _, _ = run(capsys, *args)
    assert code == 0
    body = (out_dir / "li_verify_identity.csv").read_text()
    assert all(r["pass"] == "true" for r in csv.DictReader(io.StringIO(body)))
    assert (out_dir / "li_verify_identity.svg").read_text() == svg_from_csv(body, title="li_verify_identity")
    first = (out_dir / "li_verify_identity.json").read_bytes()
    run(capsys, *args)
    assert (out_dir / "li_verify_identity.json").read_bytes() == first


def test_scan_a_symmetric_pair(capsys):
    code, out, _ = run(capsys, "li", "scan-a", "--zeros", ZERO_TABLE, "--a-grid", "0.25,0.75", "--n-max", 4,
                       "--t-cutoff", 1000, "--precision-bits", 128)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    lo = [r["k_zero_sum"] for r in rows if r["a"] == "0.25"]
    hi = [r["k_zero_sum"] for r in rows if r["a"] == "0.75"]
    assert lo == hi and len(lo) == 4
    assert {r["verdict"] for r in rows} == {"CONSISTENT"}


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"zeros": str(ZERO_TABLE), "a": -1, "n_max": 3, "t_cutoff": 500, "precision_bits": 96}))
    code, out, _ = run(capsys, "li", "compute", "--config", cfg, "--n-max", 2)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2 and rows[0]["a"] == "-1"


def test_bad_config(capsys, tmp_path):
    code, _, _ = run(capsys, "li", "compute", "--config", tmp_path / "missing.json")
    assert code == 2


def test_bl_gen_and_check(capsys, tmp_path):
    path = tmp_path / "ms.json"
    assert run(capsys, "bl", "gen", "--kind", "on_line", "--seed", 4, "--count", 20, "--out", path)[0] == 0
    code, out, _ = run(capsys, "bl", "check", path, "--n-max", 64)
    rep = json.loads(out)
    assert code == 0
    assert rep["witness"] is None
    assert rep["conjugate_symmetric"] and rep["functional_symmetric"]
    assert len(rep["sums"]) == 64
    assert all(g["pass"] for g in rep["growth"])


def test_bl_witness_on_violator(capsys, tmp_path):
    path = tmp_path / "v.json"
    run(capsys, "bl", "gen", "--kind", "with_violator", "--seed", 1, "--count", 20, "--out", path)
    code, out, _ = run(capsys, "bl", "witness", path, "--n-max", 4096)
    rep = json.loads(out)
    assert code == 1
    assert isinstance(rep["witness"], int)


def test_bl_condition_i_failure(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"sigma": "0.5", "a": "0", "elements": [{"re": "1", "im": "0", "mult": 1}]}))
    code, out, _ = run(capsys, "bl", "check", path)
    rep = json.loads(out)
    assert code == 1 and rep["condition_i"] is False


def test_bl_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = run(capsys, "bl", "check", path)
    assert code == 1 and "invalid JSON" in err


@pytest.mark.slow
def test_littlewood_suite(capsys):
    code, out, _ = run(capsys, "littlewood", "verify", LITTLEWOOD_SUITE)
    rep = json.loads(out)
    assert code == 0
    control = [c for c in rep["cases"] if c["expected"] == "fail"]
    assert control and all(not c["pass"] for c in control)


def test_littlewood_boundary_guidance(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps([{"function": {"tag": "polynomial", "zeros": [[1, 0]]},
                                 "kernel": {"tag": "simple_pole", "pole": [0, 0.5]}, "rectangle": [-1, 1, -1, 1]}]))
    code, _, err = run(capsys, "littlewood", "verify", path)
    assert code == 1 and "shift the rectangle" in err


def test_csv_text_formats_values():
    text = csv_text(("n", "x", "ok"), [(1, 0.5, True), (2, None, False)])
    assert text == "n,x,ok\n1,0.5,true\n2,,false\n"


def test_svg_is_pure_function_of_csv():
    text = csv_text(LI_COLUMNS, [(n, "0", n * n, 0, None, None, 0, True) for n in range(1, 6)])
    a = svg_from_csv(text)
    assert a == svg_from_csv(text)
    assert a.startswith("<svg") and "polyline" in a
