import csv
import json
import subprocess
import sys

import pytest

from cusumlab.cli import main
from cusumlab.records import VerificationRecord, read_records


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, [VerificationRecord.from_json(line) for line in out.splitlines() if line.strip()]


def test_lemma21_example(capsys):
    code, recs = run(capsys, "verify", "lemma21", "--c-max", "6", "--w-samples", "5", "--seed", "7", "--workers", "1")
    assert code == 0 and len(recs) == 126
    assert all(r.verdict == "pass" and r.seed == 7 for r in recs)


def test_store_is_byte_identical_across_runs_and_workers(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["sweep", "--c-max", "5", "--seed", "3", "--store", str(a), "--workers", "1"]) == 0
    assert main(["sweep", "--c-max", "5", "--seed", "3", "--store", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    recs = read_records(a)
    assert len(recs) == 1100 and all(r.elapsed_ms == 0 for r in recs)
    assert main(["sweep", "--c-max", "3", "--store", str(a), "--workers", "1"]) == 0
    assert len(read_records(a)) == 1100 + 7


def test_figure1(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    code, recs = run(capsys, "figure1", "--out", str(out))
    assert code == 0
    rows = list(csv.reader(open(out)))
    assert rows[1][3].startswith("12.47826")
    by_name = {r.quantity: r for r in recs}
    assert str(by_name["A_at_1"].value) == "287/23"
    assert by_name["A_above_limit"].verdict == "pass"


def test_scan_a(capsys):
    code, recs = run(capsys, "scan-A", "--c", "12", "--b", "6", "--k", "3", "--h2", "11", "--points", "50")
    assert code == 0 and any(r.quantity == "A_sign_changes" for r in recs)


def test_certify_example(capsys):
    code, recs = run(capsys, "certify", "--c", "4", "--b", "2", "--k", "1", "--p", "2", "--q", "1", "--h", "1,3")
    assert code == 0 and len(recs) == 1
    assert recs[0].quantity.startswith("certificate:certified") or recs[0].quantity.endswith("positive")


def test_small_verifications(capsys):
    for argv in (["verify", "lemma41", "--c-max", "4"],
                 ["verify", "lemma42", "--c-max", "4", "--w-samples", "10"],
                 ["verify", "lemma43", "--c-max", "4", "--w-samples", "10"],
                 ["verify", "theorem31", "--c-max", "3", "--samples", "3"],
                 ["oracle", "--c-max", "4", "--w-samples", "2"]):
        code, recs = run(capsys, *argv, "--workers", "1")
        assert code == 0 and recs and all(r.verdict != "fail" for r in recs), argv


def test_usage_errors(capsys):
    assert main(["verify", "nothing"]) == 2
    assert main(["sweep", "--c-max", "2"]) == 2
    assert main(["certify", "--c", "4", "--b", "2", "--k", "1", "--p", "2", "--q", "0", "--h", "1,3"]) == 2
    assert main(["sweep", "--bogus"]) == 2
    capsys.readouterr()


def test_io_error(tmp_path, capsys):
    assert main(["sweep", "--c-max", "3", "--store", str(tmp_path / "missing" / "x.jsonl")]) == 3
    capsys.readouterr()


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "cusumlab.cli", "certify", "--c", "3", "--b", "1", "--k", "1",
                           "--p", "1", "--q", "1", "--h", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "pass"


def test_timing_flag_fills_elapsed(capsys):
    code, recs = run(capsys, "verify", "lemma42", "--c-max", "3", "--w-samples", "3", "--timing", "--workers", "1")
    assert code == 0 and all(r.elapsed_ms >= 0 for r in recs)


@pytest.mark.parametrize("env", ["1", "2"])
def test_thread_cap(monkeypatch, env):
    from cusumlab.runners import worker_count

    monkeypatch.setenv("CUSUMLAB_THREADS", env)
    assert worker_count() <= int(env)
