import csv
import io
import json

import pytest
from click.testing import CliRunner

from sheun.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def statuses(result):
    return [c["status"] for c in json.loads(result.stdout)["checks"]]


def test_relations_linear(run):
    r = run("verify", "--grid", "linear", "--suite", "relations", "--seed", "7")
    assert r.exit_code == 0
    assert statuses(r) == ["pass"] * 14


def test_sklyanin_qlinear(run):
    r = run("verify", "--grid", "qlinear", "--suite", "sklyanin", "--trials", "20", "--seed", "1")
    assert r.exit_code == 0
    names = {c["name"]: c["status"] for c in json.loads(r.stdout)["checks"]}
    assert names["qlinear: AD = 1"] == "pass" and names["qlinear: DA = 1"] == "pass"


def test_contraction_findings_exit_zero(run):
    r = run("verify", "--suite", "contraction", "--seed", "1")
    assert r.exit_code == 0
    checks = json.loads(r.stdout)["checks"]
    aw = [c for c in checks if c["name"].startswith("AW")]
    assert len(aw) == 7 and all(c["status"] == "pass" for c in aw)
    assert sum(c["status"] == "finding" for c in checks) == 3
    assert "finding" in r.stderr


def test_failure_exits_one(run):
    r = run("verify", "--grid", "qlinear", "--suite", "truncation", "--trials", "1", "--nmax", "3")
    assert r.exit_code == 1
    assert "FAILED" in r.stderr


def test_report_names_unique(run):
    r = run("verify", "--grid", "linear", "--suite", "actions", "--trials", "2", "--nmax", "4")
    names = [c["name"] for c in json.loads(r.stdout)["checks"]]
    assert len(names) == len(set(names))


def test_byte_identical(run):
    args = ("verify", "--grid", "continuum", "--suite", "basis", "--trials", "3", "--seed", "11")
    assert run(*args).stdout == run(*args).stdout


def test_seed_changes_witnesses_only_by_draw(run):
    a = run("verify", "--grid", "linear", "--suite", "rains", "--trials", "2", "--seed", "1")
    b = run("verify", "--grid", "linear", "--suite", "rains", "--trials", "2", "--seed", "2")
    assert statuses(a) == statuses(b)


def test_timing_flag(run):
    r = run("verify", "--grid", "linear", "--suite", "relations", "--timing")
    assert "elapsed_ms" in json.loads(r.stdout)
    assert "elapsed_ms" not in json.loads(run("verify", "--grid", "linear", "--suite", "relations").stdout)


@pytest.mark.parametrize("fmt", ["md", "csv"])
def test_other_formats(run, fmt):
    r = run("verify", "--grid", "linear", "--suite", "relations", "--format", fmt)
    assert r.exit_code == 0
    assert "M1 M1 = 1 + L L" in r.stdout


def test_out_file(run, tmp_path):
    out = tmp_path / "report.json"
    r = run("verify", "--grid", "linear", "--suite", "relations", "--out", str(out))
    assert r.exit_code == 0
    assert json.loads(out.read_text())["suite"] == "relations"


def test_config_file_and_precedence(run, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\ngrid = continuum\nsuite = relations\nseed = 5\n")
    r = run("verify", "--config", str(cfg))
    doc = json.loads(r.stdout)
    assert (doc["grid"], doc["suite"], doc["seed"]) == ("continuum", "relations", 5)
    doc = json.loads(run("verify", "--config", str(cfg), "--grid", "linear").stdout)
    assert doc["grid"] == "linear"


@pytest.mark.parametrize("body", ["colour = red\n", "trials = 0\n", "nmax = 13\n", "not a pair\n"])
def test_invalid_config_exits_two(run, tmp_path, body):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body)
    assert run("verify", "--config", str(cfg)).exit_code == 2


@pytest.mark.parametrize("args", [("--trials", "0"), ("--nmax", "13"), ("--grid", "hex")])
def test_invalid_flags_exit_two(run, args):
    assert run("verify", *args).exit_code == 2


def test_table_para(run):
    rows = json.loads(run("table", "--family", "para-krawtchouk", "--N", "3", "--gamma", "1/1").stdout)["rows"]
    assert rows[0]["A"] == "3/4" and rows[3]["C"] == "3/4"


def test_table_jacobi_constant(run):
    rows = json.loads(run("table", "--family", "jacobi", "--n", "0").stdout)["rows"]
    assert rows == [{"n": "0", "x^0": "1"}]


def test_table_csv(run):
    r = run("table", "--family", "para-krawtchouk", "--N", "3", "--gamma", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    assert rows[0]["A"] == "3/4"


def test_table_rejects_bad_rational(run):
    assert run("table", "--family", "para-krawtchouk", "--N", "3", "--gamma", "x/y").exit_code == 2


def test_spectrum(run):
    doc = json.loads(run("spectrum", "--family", "para-krawtchouk", "--N", "5", "--gamma", "1/2").stdout)
    assert len(doc["eigenvalues"]) == 6
    assert float(doc["parity_residual"]) < 1e-9
    assert [float(v) for v in doc["even"]] == pytest.approx([-2.25, -1.25, -0.25])
    assert all(len(v.lstrip("-").replace(".", "").split("e")[0]) <= 12 for v in doc["eigenvalues"])


def test_heun_cli(run, tmp_path):
    r = run("heun", "--grid", "linear", "--beta", "0,1,0")
    doc = json.loads(r.stdout)
    assert doc["matches_closed_form"] is True
    assert doc["coefficients"]["A1"].startswith("-1/2*x^3")
    src = tmp_path / "combo.json"
    src.write_text(json.dumps({"alpha": ["0", "0", "0", "1", "0", "0"], "beta": [0, 0, 0]}))
    doc = json.loads(run("heun", "--grid", "continuum", "--input", str(src)).stdout)
    assert doc["coefficients"]["Q1"] == "1"


def test_heun_needs_coefficients(run):
    assert run("heun", "--grid", "linear").exit_code == 2


def test_debug_op(run):
    r = run("debug-op", "T+", "--grid", "linear", "--apply", "2")
    assert r.exit_code == 0
    assert "x^2 + 2*x + 1" in r.stdout
