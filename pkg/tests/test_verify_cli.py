"""Harness primitives, report reproducibility, and the CLI front end."""

import csv
import json
import os
import random
import subprocess
import sys

from laxkit.fields import FuncField, PoleError, Scale
from laxkit.verify import (PointPolicy, VerificationReport, decode_number,
                           encode_params, energy_drift, hamiltonian_flow,
                           isospectral_drift, poisson_bracket, run_point_max,
                           rng_for)


def test_poisson_bracket_basics():
    n = 3
    for i in range(n):
        for j in range(n):
            xi = FuncField(lambda z, i=i: z[i])
            pj = FuncField(lambda z, j=j: z[n + j])
            z = tuple(complex(0.1 * k, 0) for k in range(2 * n))
            got = poisson_bracket(xi, pj, z, n)
            assert abs(got - (1.0 if i == j else 0.0)) < 1e-14
    # {e^{beta p_k}, f} = -beta (d_k f) e^{beta p_k}
    import cmath
    beta = 0.7
    k = 1
    ep = FuncField(lambda z: cmath_exp_dual(beta, z, n + k))
    f = FuncField(lambda z: z[0] * z[1] ** 2)
    z = (0.3, -0.4, 0.2, 0.1, 0.5, -0.2)
    got = poisson_bracket(ep, f, z, n)
    dkf = z[0] * 2 * z[1]
    want = -beta * dkf * cmath.exp(beta * z[n + k])
    assert abs(got - want) < 1e-12
    H = FuncField(lambda z: sum(v * v for v in z[n:]))
    assert abs(poisson_bracket(H, H, z, n)) < 1e-14


def cmath_exp_dual(beta, z, idx):
    from laxkit.dual import d_exp
    return d_exp(beta * z[idx])


def test_free_flow_straight_lines_and_reversal():
    n = 2
    H = FuncField(lambda z: 0.5 * (z[2] ** 2 + z[3] ** 2))
    z0 = (0.0, 1.0, 0.3, -0.2)
    times, traj = hamiltonian_flow(H, z0, T=1.0, dt=1e-2, n=n)
    zT = traj[-1]
    assert abs(zT[0] - (z0[0] + z0[2])) < 1e-12
    assert abs(zT[1] - (z0[1] + z0[3])) < 1e-12
    assert energy_drift(H, traj) < 1e-14
    _t, back = hamiltonian_flow(Scale(-1.0, H), zT, T=1.0, dt=1e-2, n=n)
    assert max(abs(a - b) for a, b in zip(back[-1], z0)) < 1e-8


def test_isospectral_drift_constant_matrix():
    L = [[FuncField(lambda z: 2.0 + 0j), FuncField(lambda z: 0.5 + 0j)],
         [FuncField(lambda z: -0.25 + 0j), FuncField(lambda z: 1.0 + 0j)]]
    from laxkit.verify import matrix_fn_from_fields
    Lfn = matrix_fn_from_fields(L)
    traj = [(0.1, 0.2, 0.3, 0.4)] * 5
    assert isospectral_drift(Lfn, traj) == 0.0


def test_run_point_max_resamples_poles():
    calls = {"n": 0}

    def evalfn(x):
        calls["n"] += 1
        if calls["n"] % 2:
            raise PoleError("synthetic pole")
        return 0.5
    rng = random.Random(0)
    out = run_point_max(evalfn, rng, PointPolicy(2), 4)
    assert out == 0.5


def test_report_roundtrip_and_params_encoding():
    rep = VerificationReport(system="demo", params={"tau": 1.2 + 0.5j, "n": 3},
                             seed=9)
    enc = encode_params(rep.params)
    assert enc["tau"] == {"re": "1.2", "im": "0.5"}
    assert decode_number(enc["tau"]) == 1.2 + 0.5j
    text = rep.to_json()
    assert json.loads(text)["seed"] == 9


def run_cli(*args):
    env = dict(os.environ)
    return subprocess.run([sys.executable, "-m", "laxkit.cli", *args],
                          capture_output=True, text=True, env=env)


def test_cli_verify_reproducible_and_exit_codes(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    r1 = run_cli("verify", "--system", "trig-gln", "--rank", "2", "--seed", "7",
                 "--out", str(out1))
    assert r1.returncode == 0, r1.stderr
    r2 = run_cli("verify", "--system", "trig-gln", "--rank", "2", "--seed", "7",
                 "--out", str(out2))
    assert r2.returncode == 0
    d1 = json.loads(out1.read_text())
    d2 = json.loads(out2.read_text())
    d1["runtime_ms"] = d2["runtime_ms"] = 0.0
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)
    # missing params file -> exit 2
    r = run_cli("verify", "--system", "trig-gln", "--params", "/nonexistent.json")
    assert r.returncode == 2
    # unknown parameter key -> exit 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"bogus": 1}')
    r = run_cli("verify", "--system", "trig-gln", "--params", str(bad))
    assert r.returncode == 2
    # unknown system -> exit 2
    r = run_cli("verify", "--system", "nope")
    assert r.returncode == 2


def test_cli_params_file_roundtrip(tmp_path):
    pfile = tmp_path / "p.json"
    pfile.write_text(json.dumps({"tau": {"re": "1.35", "im": "0.1"},
                                 "c": {"re": "0.3", "im": "0.05"}}))
    out = tmp_path / "r.json"
    r = run_cli("verify", "--system", "trig-gln", "--rank", "2", "--seed", "3",
                "--params", str(pfile), "--out", str(out))
    assert r.returncode == 0, r.stderr
    rep = json.loads(out.read_text())
    assert rep["params"]["tau"] == {"re": "1.35", "im": "0.1"}
    assert all(c["pass"] for c in rep["checks"])


def test_cli_perturbation_control(tmp_path):
    r = run_cli("verify", "--system", "trig-gln", "--rank", "2", "--seed", "7",
                "--perturb", "1e-3", "--out", str(tmp_path / "p.json"))
    assert r.returncode == 1
    assert "FAIL" in r.stderr


def test_cli_flow_csv(tmp_path):
    csvpath = tmp_path / "traj.csv"
    r = run_cli("flow", "--system", "rational-A", "--rank", "2", "--time", "0.5",
                "--dt", "2e-3", "--csv", str(csvpath))
    assert r.returncode == 0, r.stderr
    rows = list(csv.DictReader(csvpath.open()))
    assert rows and {"t", "x1", "p1", "trL1", "trL2", "charpoly_drift"} <= set(rows[0])
    tr2 = [float(row["trL2"]) for row in rows]
    assert max(tr2) - min(tr2) < 1e-6
    assert max(float(row["charpoly_drift"]) for row in rows) < 1e-6
    # T = 0 gives a single data row
    single = tmp_path / "one.csv"
    r = run_cli("flow", "--system", "rational-A", "--rank", "2", "--time", "0",
                "--csv", str(single))
    assert r.returncode == 0
    assert len(single.read_text().strip().splitlines()) == 2


def test_threads_env_gives_same_answer(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    r1 = run_cli("verify", "--system", "rational-A", "--rank", "2", "--seed", "5",
                 "--out", str(out1))
    env = dict(os.environ, LAXKIT_THREADS="4")
    r2 = subprocess.run([sys.executable, "-m", "laxkit.cli", "verify", "--system",
                         "rational-A", "--rank", "2", "--seed", "5", "--out",
                         str(out2)], capture_output=True, text=True, env=env)
    assert r1.returncode == 0 and r2.returncode == 0
    d1 = json.loads(out1.read_text())
    d2 = json.loads(out2.read_text())
    d1["runtime_ms"] = d2["runtime_ms"] = 0.0
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)


def test_rng_for_deterministic():
    a = rng_for(7, "x").random()
    b = rng_for(7, "x").random()
    c = rng_for(7, "y").random()
    assert a == b and a != c
