import csv
import io
import json
import socket
import subprocess
import sys

import pytest

from pacreach import analysis
from pacreach.baselines import monte_carlo
from pacreach.bounds import required_samples
from pacreach.cli import main
from pacreach.models import build_alks
from pacreach.seeding import derive_seed
from pacreach.sul import MachineSafetyQuery

SERVE_WTO = (f"{sys.executable} -m pacreach.cli serve-model "
             f"--model alks_without --stdio")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_kv(text):
    pairs = {}
    for line in text.splitlines():
        key, _, value = line.partition(": ")
        pairs[key] = value
    return pairs


def test_analyze_human_output(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--model", "alks_without",
                           "-n", "3", "-L", "1000", "--seed", "7")
    assert code == 0
    report = parse_kv(out)
    assert report["model_name"] == "alks_without"
    assert report["covered_exact"] == "17"
    assert report["confidence"].startswith("0.9595")
    assert report["learned_probability"] == "0.62963"
    assert report["exact_safe_paths"] == "17"
    assert report["stats.examples_drawn"] == "1000"


def test_analyze_csv_to_file(tmp_path, capsys):
    out_file = tmp_path / "row.csv"
    code, out, _ = run_cli(capsys, "analyze", "--model", "alks_without",
                           "-n", "3", "-L", "200", "--seed", "5",
                           "--format", "csv", "--out", str(out_file))
    assert code == 0
    assert out == ""
    expected = analysis.analyze(
        build_alks(False), horizon=3, model_name="alks_without",
        sample_budget=200, seed=5)
    assert out_file.read_text(encoding="utf-8") == \
        analysis.reports_to_csv([expected])


def test_analyze_json_lines(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--model", "alks_without",
                           "-n", "3", "-L", "300", "--seed", "7",
                           "--format", "json-lines")
    assert code == 0
    record = json.loads(out.splitlines()[0])
    assert record["covered_exact"] == 17
    assert record["model_name"] == "alks_without"


def test_analyze_over_the_wire_matches_the_white_box_run(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--cmd", SERVE_WTO,
                           "--unsafe-outputs", "alarm",
                           "-n", "3", "-L", "100", "--seed", "21")
    assert code == 0
    remote = parse_kv(out)
    local = analysis.analyze(build_alks(False), horizon=3,
                             sample_budget=100, seed=21)
    assert int(remote["covered_used"]) == local.covered_used
    assert remote["confidence"] == f"{local.confidence:.6g}"
    assert remote["exact_safe_paths"] == "None"


def test_analyze_verbose_still_works(capsys):
    code, _, _ = run_cli(capsys, "-v", "analyze", "--model", "all_safe",
                         "-n", "2", "-L", "5", "--seed", "1")
    assert code == 0


def test_analyze_rejects_ambiguous_targets(capsys):
    code, _, err = run_cli(capsys, "analyze", "--model", "alks_without",
                           "--cmd", "whatever", "-n", "3", "-L", "10")
    assert code == 2
    assert "exactly one of --model" in err


def test_analyze_requires_exactly_one_mode(capsys):
    code, _, err = run_cli(capsys, "analyze", "--model", "alks_without",
                           "-n", "3")
    assert code == 2
    assert "exactly one" in err


def test_exit_code_for_unknown_model(capsys):
    code, _, err = run_cli(capsys, "analyze", "--model", "nope.machine",
                           "-n", "3", "-L", "10")
    assert code == 2
    assert err.startswith("error:")


def test_exit_code_for_unreachable_endpoint(capsys):
    code, _, err = run_cli(capsys, "analyze", "--endpoint", "127.0.0.1:9",
                           "--unsafe-outputs", "alarm", "-n", "3",
                           "-L", "10", "--retries", "0")
    assert code == 3
    assert "transport error" in err


def test_exit_code_when_sampling_never_finds_a_safe_run(capsys):
    code, _, err = run_cli(capsys, "analyze", "--model", "none_safe",
                           "-n", "3", "-L", "10")
    assert code == 4
    assert "resource cap" in err


def test_exact_census(capsys):
    code, out, _ = run_cli(capsys, "exact", "--model", "alks_without",
                           "-n", "10")
    assert code == 0
    report = parse_kv(out)
    assert report["safe_paths"] == "8119"
    assert report["total_paths"] == "59049"
    assert float(report["probability"]) == pytest.approx(8119 / 59049)


def test_exact_census_always_semantics(capsys):
    code, out, _ = run_cli(capsys, "exact", "--model", "alks_with",
                           "-n", "3", "--semantics", "always")
    assert code == 0
    assert parse_kv(out)["safe_paths"] == "17"


def test_estimate_matches_the_library_call(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--model", "alks_without",
                           "-n", "3", "-L", "400", "--seed", "3")
    assert code == 0
    report = parse_kv(out)
    mc = monte_carlo(MachineSafetyQuery(build_alks(False)), 3, 400,
                     derive_seed(3, "estimate"))
    assert report["samples"] == "400"
    assert int(report["safe_hits"]) == mc.safe_hits
    assert float(report["estimate"]) == mc.estimate


def test_sample_size_from_rate(capsys):
    code, out, _ = run_cli(capsys, "sample-size", "--inverse-error", "1.83",
                           "--d-bound", "272")
    assert code == 0
    assert out.strip() == "998"


def test_sample_size_from_confidence(capsys):
    code, out, _ = run_cli(capsys, "sample-size", "--confidence", "0.95",
                           "--d-bound", "17")
    assert code == 0
    assert out.strip() == str(required_samples(1.0 / (1.0 - 0.95), 17))


def test_sample_size_argument_validation(capsys):
    code, _, err = run_cli(capsys, "sample-size", "--inverse-error", "2")
    assert code == 2
    assert "--d-bound" in err
    code, _, err = run_cli(capsys, "sample-size", "--inverse-error", "2",
                           "--confidence", "0.5", "--d-bound", "3")
    assert code == 2
    assert "exactly one" in err


def test_confidence_subcommand(capsys):
    code, out, _ = run_cli(capsys, "confidence", "-L", "1000",
                           "--d-bound", "17")
    assert code == 0
    assert float(parse_kv(out)["confidence"]) == pytest.approx(0.9596,
                                                               abs=1e-3)
    code, _, err = run_cli(capsys, "confidence", "-L", "1000")
    assert code == 2
    assert "--d-bound" in err


def test_reproduce_table_to_file(tmp_path, capsys):
    out_file = tmp_path / "table.csv"
    code, out, _ = run_cli(capsys, "reproduce-table", "--seed", "7",
                           "--out", str(out_file))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out_file.read_text("utf-8"))))
    assert rows[0] == analysis.CSV_COLUMNS
    assert len(rows) == 9
    assert "all 28 checked cells within tolerance" in out
    assert "coffee" in out


def test_reproduce_table_json_lines_to_stdout(capsys):
    code, out, err = run_cli(capsys, "reproduce-table", "--seed", "7",
                             "--format", "json-lines")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert len(records) == 8
    assert {r["model_name"] for r in records} == \
        {"alks_without", "alks_with"}
    assert "all 28 checked cells within tolerance" in err


def test_serve_model_over_tcp_end_to_end():
    proc = subprocess.Popen(
        [sys.executable, "-m", "pacreach.cli", "serve-model",
         "--model", "alks_without", "--listen", "127.0.0.1:0",
         "--max-sessions", "1"],
        stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, text=True)
    try:
        banner = proc.stdout.readline().split()
        assert banner[0] == "LISTENING"
        host, port = banner[1], int(banner[2])
        with socket.create_connection((host, port), timeout=5) as sock, \
                sock.makefile("rw", encoding="utf-8", newline="\n") as stream:

            def ask(line):
                stream.write(line + "\n")
                stream.flush()
                return stream.readline().strip()

            assert ask("ALPHABET") == "OK l r s"
            assert ask("RESET") == "OK"
            assert ask("STEP l") == "OUT ok"
            assert ask("STEP l") == "OUT alarm"
            assert ask("STEP nonsense").startswith("ERR")
        assert proc.wait(timeout=10) == 0
    finally:
        if proc.poll() is None:
            proc.kill()
        proc.stdout.close()


def test_serve_model_rejects_a_malformed_listen_address(capsys):
    code, _, err = run_cli(capsys, "serve-model", "--model", "alks_without",
                           "--listen", "nonsense")
    assert code == 2
    assert "HOST:PORT" in err


def test_help_via_module_invocation():
    out = subprocess.run(
        [sys.executable, "-m", "pacreach.cli", "--help"],
        capture_output=True, text=True, timeout=30)
    assert out.returncode == 0
    assert "usage: pacreach" in out.stdout
    for name in ("analyze", "exact", "estimate", "sample-size",
                 "confidence", "reproduce-table", "serve-model"):
        assert name in out.stdout
