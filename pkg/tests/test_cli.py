import json
import subprocess
import sys

import pytest

from gaussfs.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# region commands


def test_factor(capsys):
    code, data = run_json(capsys, "factor", "5")
    assert code == 0
    assert data["factors"] == [{"pi": ["1", "2"], "e": 1}, {"pi": ["2", "1"], "e": 1}]
    code, _, err = run(capsys, "factor", "0")
    assert code == 2 and "cannot factor 0" in err


def test_intersective_verdicts(capsys):
    code, data = run_json(capsys, "intersective", "x^2")
    assert code == 0 and data["verdict"] == "intersective"
    code, data = run_json(capsys, "intersective", "x^2 - 2")
    assert code == 0 and data["verdict"] == "not-intersective"
    assert data["counterexample"]["modulus"] == ["1", "2"]
    code, data = run_json(capsys, "intersective", "(x^3-19)(x^2+x+1)")
    assert code == 3 and data["verdict"] == "inconclusive"


def test_build_qa(capsys):
    code, data = run_json(capsys, "build-qa", "x^2", "2")
    assert code == 0
    assert data["r_a"] == ["2", "2"] and data["gamma"] == ["4", "0"]
    assert all(data["checks"].values())
    code, data = run_json(capsys, "build-qa", "x^2 - 2", "3")
    assert code == 1 and data["error"] == "not-intersective"
    code, _, _ = run(capsys, "build-qa", "x^2", "i")
    assert code == 2


def test_verify_avoidance_inline_and_file(capsys, tmp_path):
    code, data = run_json(capsys, "verify-avoidance", "--poly", "x^2", "--set", "1+i, 3+2i")
    assert code == 0 and data["avoids"]
    f = tmp_path / "set.txt"
    f.write_text("1+i  # first\n2+i\n\n")
    code, data = run_json(capsys, "verify-avoidance", "--poly", "x^2", "--set", str(f))
    assert code == 1 and not data["avoids"]
    w = data["witness"]
    assert w["a"] == ["2", "1"] and w["a_prime"] == ["1", "1"] and w["z"] == ["1", "0"]


def test_max_density(capsys):
    code, data = run_json(capsys, "max-density", "--poly", "x^2", "--N", "3")
    assert code == 0 and data["set"]["size"] == 5 and not data["heuristic"]
    code, _, err = run(capsys, "max-density", "--poly", "x^2", "--N", "6")
    assert code == 2 and "--exact-limit" in err
    code, data = run_json(capsys, "max-density", "--poly", "x^2", "--N", "6", "--mode", "greedy")
    assert code == 0 and data["heuristic"]


def test_correlate(capsys):
    code, data = run_json(capsys, "correlate", "--poly", "x^2", "--N", "4", "--set", "1+i,2+2i,4+1i",
                          "--j", "1", "--hside", "2", "--domain", "box:2")
    assert code == 0 and data["expansion_identity"]
    assert len(data["domain"]) == 4
    code, data = run_json(capsys, "correlate", "--poly", "x^2", "--N", "16", "--set", "1+i",
                          "--j", "0", "--hside", "1")
    assert code == 0
    assert sorted(map(tuple, data["domain"])) == [("3", "3"), ("3", "4"), ("4", "3"), ("4", "4")]
    code, _, _ = run(capsys, "correlate", "--poly", "x^2", "--N", "2", "--set", "5+5i",
                     "--j", "0", "--hside", "1")
    assert code == 2


def test_partition(capsys):
    code, data = run_json(capsys, "partition", "--M", "7", "--xi", "1+i", "--m", "2")
    assert code == 0 and all(data["checks"].values())
    code, _, _ = run(capsys, "partition", "--M", "7", "--xi", "0", "--m", "2")
    assert code == 2


def test_thresholds(capsys):
    code, data = run_json(capsys, "thresholds", "--d", "2", "--r", "4", "--delta", "1/2", "--mp2", "4")
    assert code == 0 and data["t"] == 770 and data["c"] == {"num": "1", "den": "512"}
    code, _, _ = run(capsys, "thresholds", "--d", "2", "--r", "4", "--delta", "3/2", "--mp2", "4")
    assert code == 2

# endregion

# region options and errors


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["intersective", "x^"], ["factor", "1.5"], ["sweep", "suite:missing"],
    ["partition", "--M", "0", "--xi", "1", "--m", "1"], ["thresholds", "--d", "2"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "intersective" in out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    code, out, _ = run(capsys, "factor", "2", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["factors"] == [{"pi": ["1", "1"], "e": 2}]


def test_common_flags_before_or_after(capsys):
    a = run(capsys, "--seed", "3", "sweep", "suite:cauchy", "--cases", "5")
    b = run(capsys, "sweep", "suite:cauchy", "--cases", "5", "--seed", "3")
    assert a[0] == b[0] == 0 and a[1] == b[1]


def test_sweep_output_and_determinism(capsys, monkeypatch):
    code, out, err = run(capsys, "sweep", "suite:partition", "--cases", "30", "--seed", "5")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 31
    summary = json.loads(lines[-1])["summary"]
    assert summary["cases"] == 30 and summary["pass"]
    assert "suite:partition 30/30 pass" in err
    monkeypatch.setenv("GAUSSINT_THREADS", "4")
    code2, out2, _ = run(capsys, "sweep", "suite:partition", "--cases", "30", "--seed", "5")
    assert code2 == 0 and out2 == out
    monkeypatch.setenv("GAUSSINT_THREADS", "zero")
    code3, _, _ = run(capsys, "sweep", "suite:partition", "--cases", "3")
    assert code3 == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gaussfs", "factor", "1+i"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["factors"] == [{"pi": ["1", "1"], "e": 1}]

# endregion
