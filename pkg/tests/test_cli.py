import json
import re
import subprocess
import sys

import pytest

from hvw22 import format_rational, rational
from hvw22.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_char_irr_vacuum(capsys):
    code, out, _ = run(capsys, "char", "--algebra", "hv", "--h", "0", "--hi", "0", "--cl", "1", "--cli", "1", "--levels", "5", "--module", "irr")
    assert code == 0
    assert "dims: 1,1,3,5,10,16" in out


def test_char_verma(capsys):
    code, out, _ = run(capsys, "char", "--h", "1/2", "--hi", "3", "--levels", "4", "--module", "verma")
    assert code == 0 and "dims: 1,2,5,10,20" in out


def test_kernel(capsys):
    code, out, _ = run(capsys, "kernel", "--cl", "1", "--cli", "1", "--levels", "5")
    assert code == 0
    assert "kernel: 1,0,2,2,5,6" in out


def test_singular_example(capsys):
    code, out, _ = run(capsys, "singular", "--algebra", "hv", "--h", "2", "--hi", "0", "--cli", "1", "--level", "1")
    assert code == 0
    assert "(L(-1) + 2 I(-1)) hw" in out


def test_cosingular_and_gram(capsys):
    code, out, _ = run(capsys, "cosingular", "--algebra", "w22", "--h", "0", "--hw", "0", "--level", "1")
    assert code == 0 and "level 1: L(-1) hw" in out
    code, out, _ = run(capsys, "gram", "--algebra", "w22", "--h", "3", "--hw", "1/2", "--level", "1", "--format", "json")
    data = json.loads(out)
    assert data["data"]["matrix"] == [["0", "1"], ["1", "6"]]


def test_branch_json(capsys):
    code, out, _ = run(capsys, "branch", "--h", "1/3", "--hi", "1/3", "--levels", "4", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["atypicality"]["classification"] == "typical"
    assert d["certificates"] == []
    code, out, _ = run(capsys, "branch", "--h", "0", "--hi", "2", "--levels", "5", "--format", "json")
    d = json.loads(out)
    assert d["tables"]["submodule"] == {str(n): v for n, v in enumerate([0, 1, 1, 3, 5, 10])}
    assert d["tables"]["quotient"] == {str(n): v for n, v in enumerate([1, 0, 2, 2, 5, 6])}
    assert d["data"]["nonsplit_level"] == 1
    assert all(c["passed"] for c in d["certificates"]) and d["certificates"]


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--h", "1/3", "--p", "1", "--levels", "5")
    assert code == 0 and "sum: 1,2,5,10,20,36" in out
    code, out, _ = run(capsys, "decompose", "--h", "1/3", "--hi", "-1", "--levels", "4")
    assert code == 0 and "p: 2" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["kernel", "--cli", "0"],
        ["decompose", "--h", "0", "--p", "1", "--levels", "3"],
        ["decompose", "--h", "1/3", "--hi", "1/2"],
        ["char", "--h", "0.5", "--hi", "0"],
        ["char", "--h", "1/0", "--hi", "0"],
        ["char", "--h", "0", "--hi", "0", "--levels", "13"],
        ["char", "--h", "0", "--hi", "0", "--levels", "-1"],
        ["char", "--h", "0"],
        ["char", "--algebra", "w22", "--h", "0", "--hi", "0"],
        ["branch", "--algebra", "w22", "--h", "0", "--hw", "0"],
        ["cosingular", "--h", "1/3", "--hi", "1/3", "--level", "1"],
        ["frobnicate"],
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_io_failure_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "char", "--h", "0", "--hi", "0", "--levels", "2", "--output", str(tmp_path / "missing" / "r.json"))
    assert code == 3


def test_certificate_failure_exit_1(capsys, monkeypatch):
    import hvw22.cli as cli

    monkeypatch.setattr(cli, "hv_irr_character", lambda N, p: [0] * (N + 1))
    code, out, _ = run(capsys, "char", "--h", "0", "--hi", "0", "--levels", "3")
    assert code == 1 and "FAIL" in out


def test_determinism_and_roundtrip(capsys, tmp_path):
    argv = ["branch", "--h", "0", "--hi", "2", "--cl", "1/2", "--cli", "2/3", "--levels", "4", "--format", "json"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["format_version"] == 1
    for key, want in {"h": "0", "hi": "2", "cl": "1/2", "cli": "2/3"}.items():
        assert data["command"][key] == want
    h_W = data["data"]["w22_weight"]["h_W"]
    assert rational(h_W) == 2 * (2 - rational("4/3"))
    assert format_rational(rational(h_W)) == h_W
    text = a.read_text()
    assert not re.search(r"\d\.\d", text), "floats must never appear"


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"h": "0", "hi": "0", "levels": 3, "cl": "7"}))
    code, out, _ = run(capsys, "char", "--config", str(cfg), "--levels", "5")
    assert code == 0
    assert "levels=5" in out and "cl=7" in out
    assert "dims: 1,1,3,5,10,16" in out
    cfg.write_text(json.dumps({"h": 0.5}))
    code, _, _ = run(capsys, "char", "--config", str(cfg), "--hi", "0")
    assert code == 2
    code, _, _ = run(capsys, "char", "--config", str(tmp_path / "nope.json"))
    assert code == 2


def test_cache_dir(capsys, tmp_path):
    argv = ["char", "--h", "1/3", "--hi", "0", "--levels", "4", "--cache-dir", str(tmp_path / "cache")]
    code, first, _ = run(capsys, *argv)
    assert code == 0 and list((tmp_path / "cache").iterdir())
    code, second, _ = run(capsys, *argv)
    assert first == second


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "char", "--h", "0", "--hi", "0", "--levels", "2", "--format", "json")
    assert "timing_seconds" not in json.loads(out)
    _, out, _ = run(capsys, "char", "--h", "0", "--hi", "0", "--levels", "2", "--format", "json", "--timing")
    assert "timing_seconds" in json.loads(out)


def test_verify_lines(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "characters", "--levels", "6")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert lines and all(l.startswith("PASS") for l in lines)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hvw22", "char", "--h", "0", "--hi", "0", "--levels", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "dims: 1,1,3,5" in proc.stdout
