import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from lojax.cli import main, resolve_config, build_parser

ROOT = Path(__file__).resolve().parent.parent
INPUTS = ROOT / "inputs"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_milnor_ok(capsys):
    code, rep, _ = run(capsys, "milnor", "--expr", "z^4", "--vars", "z")
    assert code == 0 and rep["result"]["mu"] == 3 and rep["exit_code"] == 0


def test_milnor_brieskorn(capsys):
    code, rep, _ = run(capsys, "milnor", "--expr", "x^3+y^3")
    assert code == 0 and rep["result"]["mu"] == 4


def test_milnor_not_isolated(capsys):
    code, rep, err = run(capsys, "milnor", "--expr", "x^2*y", "--vars", "x,y")
    assert code == 2 and rep["status"] == "NOT_ISOLATED" and "isolated" in err


def test_parse_error_exit_one_with_position(capsys):
    code, rep, err = run(capsys, "milnor", "--expr", "x^2 + $", "--vars", "x")
    assert code == 1 and "^" in rep["error"] and err


def test_missing_file(capsys, tmp_path):
    code, rep, _ = run(capsys, "milnor", str(tmp_path / "nope.json"))
    assert code == 1


def test_resource_cap_exit_three(capsys):
    code, rep, _ = run(capsys, "milnor", "--expr", "x^5+y^7+x^3*y^3", "--degree-cap", "4")
    assert code == 3 and rep["status"] == "RESOURCE_CAP"


def test_exponent_exact_cubic(capsys):
    code, rep, _ = run(capsys, "exponent", "--expr", "z^3", "--exact")
    assert code == 0
    assert rep["result"]["certificate"]["theta"] == "2/3"
    assert rep["result"]["charpoly"]["P"] == "-1/27*w^3 + t^2"


def test_exponent_auto_verify(capsys):
    code, rep, _ = run(capsys, "exponent", "--expr", "x^2+y^2", "--auto", "--verify", "--points", "100")
    assert code == 0
    assert rep["result"]["certificate"]["theta"] == "1/2"
    assert rep["result"]["shells"]["verdict"] == "BOUNDED"


def test_auto_downgrades_with_warning(capsys):
    code, rep, _ = run(capsys, "charpoly", "--expr", "x^3+y^3+x*y", "--auto")
    assert code == 0 and rep["result"]["charpoly"]["method"] == "numeric"
    assert any("numeric" in w for w in rep["warnings"])


def test_exact_refuses_global_local_mismatch(capsys):
    code, rep, _ = run(capsys, "charpoly", "--expr", "x^3+y^3+x*y", "--exact")
    assert code == 2 and rep["status"] == "GLOBAL_LOCAL_MISMATCH"


def test_verify_writes_artifacts(capsys, tmp_path):
    code, rep, _ = run(
        capsys, "verify", str(INPUTS / "brieskorn_3_4.json"), "--plot", "--points", "100", "--out", str(tmp_path)
    )
    assert code == 0 and all(rep["result"]["checks"].values())
    names = {p.name for p in tmp_path.iterdir()}
    assert {"report.json", "verify.svg", "verify_shells.csv"} <= names
    assert json.loads((tmp_path / "report.json").read_text()) == rep


def test_verify_too_small_theta_fails(capsys):
    code, rep, _ = run(capsys, "verify", "--expr", "z^3", "--theta", "1/2", "--points", "100")
    assert code == 2 and rep["status"] == "check_failed"


def test_family_morse(capsys, tmp_path):
    code, rep, _ = run(capsys, "family", str(INPUTS / "morse_family.json"), "--points", "100", "--out", str(tmp_path))
    r = rep["result"]
    assert code == 0
    assert r["constancy"]["verdict"] == "CONSTANT_ON_GRID" and r["uniform_theta"] == "1/2"
    assert {row["verdict"] for row in r["uniform"]["table"]} == {"BOUNDED"}
    assert (tmp_path / "mu_table.csv").exists()


def test_family_hesse(capsys):
    code, rep, _ = run(capsys, "family", str(INPUTS / "hesse_family.json"), "--points", "100")
    r = rep["result"]
    assert code == 0 and r["constancy"]["verdict"] == "NON_CONSTANT" and r["semicontinuity"]["ok"]


def test_family_rejects_nonvanishing(capsys):
    code, rep, err = run(capsys, "family", str(INPUTS / "bad_family.json"))
    assert code == 1 and "f(0, t)" in rep["error"] and "= t" in rep["error"]


def test_seed_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"seed": 3}))
    p = build_parser()
    monkeypatch.delenv("LOJAX_SEED", raising=False)
    assert resolve_config(p.parse_args(["milnor", "--expr", "z^2", "--config", str(conf)])).seed == 3
    monkeypatch.setenv("LOJAX_SEED", "5")
    assert resolve_config(p.parse_args(["milnor", "--expr", "z^2", "--config", str(conf)])).seed == 5
    assert resolve_config(p.parse_args(["milnor", "--expr", "z^2", "--seed", "7"])).seed == 7


def _cli(*argv):
    env = dict(os.environ, LOJAX_SEED="11")
    return subprocess.run([sys.executable, "-m", "lojax.cli", *argv], capture_output=True, env=env, check=False)


@pytest.mark.parametrize(
    "argv",
    [
        ("charpoly", "--expr", "z^2", "--numeric"),
        ("exponent", "--expr", "x^2+y^3", "--numeric", "--verify", "--points", "60"),
    ],
)
def test_byte_identical_reruns(argv):
    a, b = _cli(*argv), _cli(*argv)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
