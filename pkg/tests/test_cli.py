import io
import json
import subprocess
import sys

import numpy as np
import pytest

from quathyp import cli
from quathyp import group as G
from quathyp import specfun as S
from quathyp import verify as V


def run(argv):
    out = io.StringIO()
    args = cli.build_parser().parse_args(argv)
    code = args.func(args, out)
    return code, out.getvalue()


def rows(text):
    lines = text.strip().splitlines()
    assert lines[0] == "t,lambda,re,im"
    return [line.split(",") for line in lines[1:]]


def test_parse_grid():
    assert np.allclose(cli.parse_grid("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    assert np.allclose(cli.parse_grid("1,2.5"), [1, 2.5])
    assert np.allclose(cli.parse_grid("1-0.5i"), [1 - 0.5j])
    for bad in ("0:1", "a,b", "0:1:0"):
        with pytest.raises(cli.UsageError):
            cli.parse_grid(bad)


def test_eval_c_matches_c_nu():
    code, text = run(["eval", "c", "--n", "1", "--nu", "0", "--lambda", "2"])
    (t, lam, re, im), = rows(text)
    assert code == 0 and t == "" and float(lam) == 2.0
    assert complex(float(re), float(im)) == S.c_nu(G.GroupContext(1), 0, 2.0)


def test_eval_c_with_alpha_beta():
    _, text = run(["eval", "c", "--alpha", "1", "--beta", "2", "--lambda", "0.5,1"])
    vals = [complex(float(r[2]), float(r[3])) for r in rows(text)]
    assert np.allclose(vals, [S.c_ab(S.JacobiParams(1, 2), l) for l in (0.5, 1)], rtol=1e-15)


def test_eval_phi_grid():
    _, text = run(["eval", "phi", "--alpha", "1", "--beta", "2", "--lambda", "1,2", "--t", "0:2:3"])
    r = rows(text)
    assert len(r) == 6
    assert float(r[4][0]) == 1.0 and float(r[4][1]) == 2.0
    assert np.isclose(float(r[4][2]), S.jacobi_phi(S.JacobiParams(1, 2), 2.0, 1.0).real, rtol=1e-15)


def test_eval_phinu_psi_b():
    _, text = run(["eval", "phinu", "--n", "2", "--nu", "1", "--lambda", "1.5", "--t", "0.5"])
    assert np.isclose(float(rows(text)[0][2]), S.phi_nu(G.GroupContext(2), 1, 1.5, 0.5).real, rtol=1e-15)
    _, text = run(["eval", "psi", "--n", "1", "--nu", "2", "--lambda", "1", "--t", "3"])
    got = complex(*map(float, rows(text)[0][2:]))
    assert got == S.jacobi_psi(S.nu_params(G.GroupContext(1), 2), 1.0, 3.0)
    _, text = run(["eval", "b", "--n", "1", "--nu", "2", "--lambda", "0"])
    assert complex(*map(float, rows(text)[0][2:])) == S.b_nu_zero_limit(G.GroupContext(1), 2)


def test_exit_codes():
    assert cli.main(["eval", "c", "--n", "1", "--nu", "0", "--lambda", "0"]) == 3
    assert cli.main(["eval", "phi", "--alpha", "1", "--lambda", "1", "--t", "0"]) == 2
    assert cli.main(["eval", "phi", "--alpha", "1", "--beta", "1", "--lambda", "1"]) == 2
    assert cli.main(["eval", "psi", "--alpha", "1", "--beta", "1", "--lambda", "1", "--t", "0.5"]) == 2
    assert cli.main(["eval", "b", "--n", "1", "--nu", "0", "--lambda", "1j"]) == 2
    assert cli.main(["verify", "nosuch"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "gamma"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "c", "--bogus"])
    assert exc.value.code == 2


def test_verify_writes_report(tmp_path):
    path = tmp_path / "r.json"
    code, text = run(["verify", "group", "--cases", "50", "--out", str(path)])
    assert code == 0 and "suite group: PASS" in text
    rep = json.loads(path.read_text())
    assert rep["schema"] == 1 and rep["passed"] and rep["config"]["cases"] == 50
    ids = [c["id"] for c in rep["checks"]]
    assert ids == sorted(ids)
    assert all({"id", "anchor", "value", "tolerance", "passed", "relation"} <= set(c) for c in rep["checks"])


def test_verify_failure_exit_code(monkeypatch, tmp_path):
    monkeypatch.setitem(V.SUITES, "group", lambda cfg: [V.check("x", "always fails", 1.0, 0.0)])
    assert cli.main(["verify", "group", "--out", str(tmp_path / "x.json")]) == 1


def test_verify_report_deterministic():
    cfg = V.VerifyConfig(cases=100)
    assert V.run_suite("group", cfg).to_json() == V.run_suite("group", cfg).to_json()
    with pytest.raises(KeyError):
        V.run_suite("nope", cfg)


def test_check_relations():
    assert V.check("a", "", 1.0, 2.0).passed
    assert not V.check("a", "", np.nan, 2.0).passed
    assert V.check("a", "", 3.0, 2.0, ">=").passed
    assert V.check("a", "", 0, 0, "==").passed
    with pytest.raises(ValueError):
        V.check("a", "", 0, 0, "<")


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "quathyp", "eval", "c", "--n", "1", "--nu", "0", "--lambda", "2"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.startswith("t,lambda,re,im\n,2.0,")
