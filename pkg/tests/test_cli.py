import json
import subprocess
import sys

import pytest

from conftest import corpus_paths
from mfmod.cli import main
from mfmod.migrate.synth import CUSTOMER_LAYOUT, synthetic_lines
from mfmod.transform.backend import URL_ENV
from test_backend import Stub

TS = "2024-01-01T00:00:00+00:00"


def corpus_file(name):
    return str([p for p in corpus_paths() if p.name == name][0])


PAYROLL = corpus_file("payroll.cbl")


@pytest.fixture
def bad_source(tmp_path):
    p = tmp_path / "bad.cbl"
    p.write_text("IDENTIFICATION DIVISION.\nPROGRAM-ID. BAD.\nPROCEDURE DIVISION.\nMAIN.\n    PERFORM NOPE.\n")
    return str(p)


def test_run_payroll(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", PAYROLL, "--timestamp", TS, "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["verification"]["accuracy_index"] == 100.0
    assert report["program"] == "PAYROLL"


def test_run_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert main(["run", PAYROLL, "--tests", "30", "--timestamp", TS, "-o", str(f)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_diagnostics_exit_1_and_no_report(tmp_path, bad_source, capsys):
    out = tmp_path / "r.json"
    assert main(["run", bad_source, "-o", str(out)]) == 1
    err = capsys.readouterr().err
    assert "error[undef-paragraph]" in err and "bad.cbl:5:" in err
    assert not out.exists()


def test_usage_errors_exit_1(capsys):
    assert main(["transform", PAYROLL, "--alpha", "0.7", "--beta", "0.7"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["run", PAYROLL, "--layout", "x.cpy"]) == 1


def test_missing_file_exit_3(tmp_path):
    assert main(["analyze", str(tmp_path / "nope.cbl")]) == 3


def test_analyze_outputs(tmp_path):
    dot, js = tmp_path / "g.dot", tmp_path / "g.json"
    assert main(["analyze", PAYROLL, "--dot", str(dot), "--json", str(js)]) == 0
    assert dot.read_text().startswith("digraph")
    assert set(json.loads(js.read_text())) == {"graph", "matrix", "metrics"}


def test_transform_then_verify(tmp_path, capsys):
    mir = tmp_path / "p.mir"
    assert main(["transform", PAYROLL, "-o", str(mir)]) == 0
    assert main(["verify", PAYROLL, str(mir), "--tests", "20"]) == 0
    tampered = tmp_path / "t.mir"
    tampered.write_text("\n".join(l for l in mir.read_text().splitlines() if "print(" not in l) + "\n")
    dump = tmp_path / "dump.txt"
    assert main(["verify", PAYROLL, str(tampered), "--tests", "20", "--dump", str(dump)]) == 2
    assert "case " in dump.read_text()
    junk = tmp_path / "j.mir"
    junk.write_text("this is not mir")
    assert main(["verify", PAYROLL, str(junk)]) == 1


def test_run_gate_exit_2(tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", PAYROLL, "--tests", "5", "--gate", "100.1", "--timestamp", TS, "-o", str(out)]) == 2
    assert json.loads(out.read_text())["verification"]["accuracy_index"] == 100.0


def test_backend_failure_exit_3(monkeypatch):
    with Stub(lambda body: b"garbage") as stub:
        monkeypatch.setenv(URL_ENV, stub.url)
        assert main(["transform", PAYROLL, "--backend", "external", "--tests", "5"]) == 3


def test_backend_fallback_exit_0(monkeypatch, tmp_path):
    monkeypatch.setenv(URL_ENV, "http://127.0.0.1:9/")
    out = tmp_path / "r.json"
    assert main(["run", PAYROLL, "--backend", "external", "--tests", "5", "-o", str(out), "--timestamp", TS]) == 0
    assert any("backend-unavailable" in n for n in json.loads(out.read_text())["notes"])


def test_migrate_and_report(tmp_path, capsys):
    (tmp_path / "c.cpy").write_text(CUSTOMER_LAYOUT)
    (tmp_path / "c.dat").write_bytes(b"".join(synthetic_lines(1000, 50)))
    stats = tmp_path / "m.json"
    args = ["migrate", "--layout", str(tmp_path / "c.cpy"), "--input", str(tmp_path / "c.dat")]
    assert main(args + ["--output", str(tmp_path / "o.csv"), "--json", str(stats), "--nodes", "a:1,b:2:20000"]) == 0
    doc = json.loads(stats.read_text())
    assert doc["integrity"]["integrity"] == 95.0
    assert doc["stats"]["records_in"] == 1000
    assert main(args + ["--output", str(tmp_path / "o.txt")]) == 1
    before, after = tmp_path / "b.json", tmp_path / "a.json"
    before.write_text(json.dumps({"metrics": {"latency": {"value": 280, "direction": "lower-better"}}}))
    after.write_text(json.dumps({"metrics": {"latency": {"value": 160, "direction": "lower-better"}}}))
    capsys.readouterr()
    assert main(["report", "--before", str(before), "--after", str(after), "--format", "csv"]) == 0
    assert capsys.readouterr().out == "name,before,after,improvement\nlatency,280,160,42.8\n"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mfmod", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("mfmod ")
