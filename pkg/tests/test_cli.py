import json
import shutil
import subprocess
import sys

import pytest

from artinqp.cli import main
from artinqp.obstruct import VIOLATED

NOQP = "gens: x t\nrel: x t t x t^-1 x^-1 x^-1 t^-1 t^-1\n"
T642 = "v 1\nv 2\nv 3\ne 1 2 2\ne 1 3 4\ne 2 3 6\n"
T666 = "v 1\nv 2\nv 3\ne 1 2 6\ne 1 3 6\ne 2 3 6\n"
K23 = "v a\nv b\nv c\nv d\nv e\ne a c 2\ne a d 2\ne a e 2\ne b c 2\ne b d 2\ne b e 2\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"noqp.pres": NOQP, "t642.graph": T642, "t666.graph": T666, "k23.graph": K23,
                       "z3.map": "1 -> 1 mod 3\n2 -> 1 mod 3\n3 -> 1 mod 3\n",
                       "bad.graph": "v 1\nv 2\ne 1 2 x\n", "f2.pres": "gens: a b\n"}.items():
        p = tmp_path / name
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_analyze_graph_verdicts(files, capsys):
    code, out, _ = run(capsys, "analyze-graph", files["t642.graph"], "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "NOT_QP"
    code, out, _ = run(capsys, "analyze-graph", files["k23.graph"])
    assert code == 0 and "QP" in out
    code, out, _ = run(capsys, "analyze-graph", files["t666.graph"], "--format", "json")
    assert code == 2 and json.loads(out)["verdict"] == "UNKNOWN"


def test_analyze_pres(files, capsys):
    code, out, _ = run(capsys, "analyze-pres", files["noqp.pres"], "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "NOT_QP"
    assert any(t["id"] == "alexander.A2" and t["outcome"] == VIOLATED for t in doc["tests"])


def test_parse_error_reports_position(files, capsys):
    code, out, err = run(capsys, "analyze-graph", files["bad.graph"])
    assert code == 1 and out == "" and "line 3, column 7" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "delta", "/nonexistent/file")
    assert code == 1 and "error" in err


def test_delta_and_depth(files, capsys):
    code, out, _ = run(capsys, "delta", files["noqp.pres"])
    assert code == 0 and "delta: t^2 - 2*t + 2" in out
    code, out, _ = run(capsys, "depth", files["f2.pres"], "--char", "1/2,0")
    assert code == 0 and out == "1\n"
    code, _, err = run(capsys, "depth", files["f2.pres"], "--char", "1/2")
    assert code == 1 and "b1 = 2" in err


def test_kernel_command(files, capsys):
    code, out, _ = run(capsys, "kernel", files["t666.graph"], files["z3.map"], "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["index"] == 3 and doc["b1"] == 7 and doc["torsion"] == []


def test_kernel_output_round_trips(files, capsys, tmp_path):
    code, out, _ = run(capsys, "kernel", files["t666.graph"], files["z3.map"])
    sub = tmp_path / "sub.pres"
    sub.write_text(out)
    code, out, _ = run(capsys, "depth", str(sub), "--char", ",".join(["0"] * 7))
    assert code == 0 and out == "7\n"


def test_seed_flag_is_recorded(files, capsys):
    _, out, _ = run(capsys, "analyze-graph", files["t642.graph"], "--format", "json", "--seed", "5")
    assert json.loads(out)["provenance"]["seed"] == 5


def test_entry_point_output_is_byte_identical(files):
    exe = shutil.which("artinqp")
    cmd = [exe] if exe else [sys.executable, "-m", "artinqp.cli"]
    args = cmd + ["analyze-graph", files["t642.graph"], "--format", "json"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["schema"] == "artinqp-report/1"
