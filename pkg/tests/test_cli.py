"""CLI surface: verbs, exit codes, JSON shapes, file formats, determinism."""

import json
import subprocess
import sys

import pytest

import skewbrace as sb
from skewbrace.catalog import BUILTIN_NAMES
from skewbrace.fileio import (
    brace_to_dict,
    group_from_dict,
    group_to_dict,
    load_brace,
    load_group,
    save_brace,
    save_group,
)

TIMING_KEYS = {"elapsed_ms", "tool_version"}


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "skewbrace.cli", *args],
        capture_output=True,
        text=True,
        timeout=600,
    )
    return proc.returncode, proc.stdout


def parse_report(stdout):
    return json.loads(stdout)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


class TestFileFormats:
    def test_group_table_roundtrip(self, tmp_path, groups):
        path = tmp_path / "c6.json"
        save_group(groups["C6"], path)
        G = load_group(path)
        assert G.order == 6 and G.name == "C6"

    def test_group_from_perm_generators(self):
        G = group_from_dict(
            {"name": "S3", "degree": 3, "perm_generators": [[1, 2, 0], [1, 0, 2]]}
        )
        assert G.order == 6

    def test_group_dict_shape(self, groups):
        d = group_to_dict(groups["C4"])
        assert set(d) == {"name", "order", "table"}

    def test_brace_roundtrip(self, tmp_path, v4_c4_brace):
        path = tmp_path / "b.json"
        save_brace(v4_c4_brace, path)
        B = load_brace(path)
        assert sb.brace_class(B) == "neither"
        assert brace_to_dict(B)["order"] == 4


class TestExitCodes:
    def test_verify_thm1_pass_is_zero(self):
        code, out = run_cli("verify-thm1", "--p", "3", "--n", "2")
        assert code == 0
        rep = parse_report(out)
        assert rep["left_simple_count"] == 0 and rep["passed"]

    def test_bad_brace_file_is_one_with_triple(self, tmp_path, groups):
        bad = {
            "name": "bad",
            "order": 6,
            "dot": groups["S3"].table.tolist(),
            "circle": groups["C6"].table.tolist(),
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        code, out = run_cli("brace-check", "--brace", str(path))
        assert code == 1
        rep = parse_report(out)
        assert not rep["valid"] and len(rep["triple"]) == 3

    def test_usage_error_is_two(self):
        code, _ = run_cli("enumerate", "--group", "NoSuchGroup")
        assert code == 2
        code, _ = run_cli("no-such-verb")
        assert code == 2

    def test_size_limit_is_three(self):
        code, _ = run_cli("group-inspect", "--group", "A5^3")
        assert code == 3
        code, _ = run_cli(
            "brace-ideals", "--brace", "trivial:A5", "--lattice-bound", "10"
        )
        assert code == 3


class TestVerbs:
    def test_group_inspect_builtins(self):
        for name in BUILTIN_NAMES:
            code, out = run_cli("group-inspect", "--group", name)
            assert code == 0, name
            rep = parse_report(out)
            assert rep["order"] >= 2

    def test_enumerate_streams_jsonl(self):
        code, out = run_cli("enumerate", "--group", "V4", "--up-to-iso")
        assert code == 0
        lines = [json.loads(line) for line in out.strip().splitlines()]
        assert len(lines) == 3  # 2 classes + summary
        assert lines[-1]["count"] == 2 and lines[-1]["up_to_iso"] is True
        assert {lines[0]["brace_class"], lines[1]["brace_class"]} == {
            "trivial",
            "neither",
        }

    def test_brace_simple(self):
        code, out = run_cli("brace-simple", "--brace", "almost-trivial:A5")
        assert code == 0
        rep = parse_report(out)
        assert rep["left_simple"] is True and rep["witness"] is None

    def test_brace_ideals(self):
        code, out = run_cli("brace-ideals", "--brace", "trivial:C4")
        rep = parse_report(out)
        assert code == 0 and rep["left_ideal_count"] == 3

    def test_hgs_report(self):
        code, out = run_cli("hgs-report", "--brace", "trivial:C5")
        rep = parse_report(out)
        assert code == 0 and rep["minimal"] and rep["image_size"] == 2
        assert rep["fixed_algebra"]["dimension"] == 5

    def test_classify_conditions(self):
        code, out = run_cli("classify-conditions", "--brace", "almost-trivial:A5")
        rep = parse_report(out)
        assert code == 0 and rep["verdict"] == "must_be_almost_trivial"

    def test_audit_tables(self):
        code, out = run_cli("audit-tables")
        rep = parse_report(out)
        assert code == 0 and rep["passed"]
        assert rep["summary"]["refuted"] == []

    def test_oracle_compare(self):
        code, out = run_cli("oracle-compare", "--group", "V4")
        rep = parse_report(out)
        assert code == 0 and rep["identical_circle_sets"]

    def test_out_flag_writes_file(self, tmp_path):
        target = tmp_path / "report.json"
        code, out = run_cli(
            "verify-thm1", "--p", "2", "--n", "2", "--out", str(target)
        )
        assert code == 0
        assert strip_timing(json.loads(target.read_text())) == strip_timing(
            parse_report(out)
        )


class TestDeterminism:
    def test_repeat_runs_identical(self):
        _, out1 = run_cli("verify-thm1", "--p", "2", "--n", "2")
        _, out2 = run_cli("verify-thm1", "--p", "2", "--n", "2")
        assert strip_timing(parse_report(out1)) == strip_timing(parse_report(out2))

    def test_worker_counts_identical(self):
        _, out1 = run_cli("enumerate", "--group", "C2^3", "--workers", "1")
        _, out2 = run_cli("enumerate", "--group", "C2^3", "--workers", "2")
        lines1 = [strip_timing(json.loads(l)) for l in out1.strip().splitlines()]
        lines2 = [strip_timing(json.loads(l)) for l in out2.strip().splitlines()]
        assert lines1[:-1] == lines2[:-1]
        assert lines1[-1]["count"] == lines2[-1]["count"]
