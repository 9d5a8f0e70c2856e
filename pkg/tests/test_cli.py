import csv
import io
import json
import subprocess
import sys

import pytest

from nicecurves import campaigns, cli
from nicecurves.report import VerificationReport, exit_code


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


def test_torsion_command():
    code, text = run("torsion", "8/5", "-15")
    assert code == 0
    (rep,) = json.loads(text)["reports"]
    assert rep["claim"] == "thm1.ii" and rep["status"] == "PASS"
    assert rep["witnesses"]["torsion"]["label"] == "Z2xZ4"
    code, text = run("torsion", "8/5", "2")
    assert json.loads(text)["reports"][0]["witnesses"]["torsion"]["label"] == "Z2xZ2"


def test_search_command_lists_seven_points():
    code, text = run("search", "Hq", "--bound", "100")
    assert code == 0
    rep = json.loads(text)["reports"][0]
    assert rep["witnesses"]["count"] == 7
    assert ["-1/4", "0", "1"] in rep["witnesses"]["points"]


def test_param_csv(tmp_path):
    path = tmp_path / "rows.csv"
    code, _ = run("param", "--t", "3", "--u", "2", "--csv", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == list(cli.CSV_COLUMNS)
    assert rows[0]["L"] == "8/5" and rows[0]["torsion_class_d"] == "-15"
    assert rows[0]["j_num"] == "470596" and rows[0]["j_den"] == "225"
    assert rows[1]["L"] == "21/16" and rows[1]["t"] == "5/2"


def test_twist_command():
    code, text = run("twist", "8/5", "-3")
    assert code == 0
    rep = json.loads(text)["reports"][0]
    assert rep["status"] == "PASS"


def test_json_is_byte_identical():
    argv = ("verify-theorem", "--samples", "6", "--seed", "11")
    assert run(*argv) == run(*argv)


def test_timing_only_with_flag():
    _, plain = run("search", "Hq", "--bound", "20")
    _, timed = run("search", "Hq", "--bound", "20", "--timing")
    assert "timing" not in plain and "timing" in timed


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["torsion", "8/5", "4"],
    ["torsion", "eight", "-15"],
    ["torsion", "1", "-3"],
    ["param", "--t", "1/2"],
    ["search", "Hq", "--bound", "0"],
    ["search", "G"],
    ["chabauty", "--prime", "3"],
    ["chabauty", "--prime", "seven"],
    ["report", "--format", "xml"],
])
def test_usage_errors_exit_64(argv, capsys):
    try:
        code = cli.run(argv, io.StringIO())
    except SystemExit as exc:
        code = exc.code
    assert code == 64
    assert "error" in capsys.readouterr().err


def test_exit_codes():
    ok = VerificationReport("a")
    trusted = VerificationReport("b", status="TRUSTED-INPUT", source="x")
    partial = VerificationReport("c", status="PARTIAL")
    bad = VerificationReport("d")
    bad.check("fails", False, {"x": 1})
    assert exit_code([ok, trusted]) == 0
    assert exit_code([ok, partial]) == 3
    assert exit_code([partial, bad]) == 2


def test_fail_report_exits_2_and_embeds_operands(monkeypatch):
    def broken(curve, bound, workers=1):
        rep = VerificationReport("lemma-quotient.search")
        rep.check("first", False, {"extra": ["1/3"]})
        rep.check("second", False, {"extra": ["2/3"]})
        return rep

    monkeypatch.setattr(campaigns, "search_report", broken)
    code, text = run("search", "Hq", "--format", "text")
    assert code == 2
    assert text.startswith("FAIL") and '"1/3"' in text
    code, text = run("search", "Hq")
    rep = json.loads(text)["reports"][0]
    assert rep["witnesses"]["first_failure"]["operands"] == {"extra": ["1/3"]}


def test_chabauty_single_prime_text():
    code, text = run("chabauty", "--prime", "5", "--format", "text")
    assert code in (0, 3)
    assert "p = 5: certified bound" in text
    assert "disk inf" in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nicecurves.cli", "torsion", "8/5", "-15", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("PASS")
