"""Batch front end: run verification suites or classical flows.

    laxkit verify --system trig-gln --rank 3 --seed 7 --out report.json
    laxkit flow --system rational-A --rank 3 --time 1.0 --dt 1e-3 --csv traj.csv

Reports are JSON with complex parameters as {"re": ..., "im": ...} decimal
strings; identical configuration and seed give byte-identical reports up to
the runtime field.  Exit status: 0 all checks pass, 1 check failure,
2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .fields import PoleError
from .suites import (ConfigError, RunConfig, build_suite, classical_flow_setup,
                     default_params)
from .verify import (VerificationReport, decode_number,
                     matrix_fn_from_fields, scaled_flow, trace_power_fn)
from .dual import value


def load_params(path):
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError("params file must hold a JSON object")
    out = {}
    for k, v in raw.items():
        if isinstance(v, list):
            out[k] = [decode_number(x) for x in v]
        else:
            out[k] = decode_number(v)
    return out


def make_config(args) -> RunConfig:
    params = default_params(args.system, args.rank)
    if args.params:
        loaded = load_params(args.params)
        unknown = set(loaded) - set(params)
        if unknown:
            raise ConfigError(f"unknown parameter keys {sorted(unknown)}; "
                              f"expected a subset of {sorted(params)}")
        params.update(loaded)
    return RunConfig(system=args.system, rank=args.rank, params=params,
                     seed=args.seed, suite=args.suite, time=args.time,
                     dt=args.dt, perturb=args.perturb)


def cmd_verify(args):
    config = make_config(args)
    t0 = time.perf_counter()
    report = VerificationReport(system=config.system,
                                params=dict(config.params, rank=config.rank,
                                            suite=config.suite,
                                            perturb=config.perturb),
                                seed=config.seed)
    # LAXKIT_THREADS is honored inside the sampling loop (verify.run_point_max)
    for r in build_suite(config):
        report.add(r)
    report.runtime_ms = 1000.0 * (time.perf_counter() - t0)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for r in report.checks:
        status = "pass" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: residual {r.residual:.3e} (tol {r.tol:g})",
              file=sys.stderr)
    return 0 if report.all_passed() else 1


def cmd_flow(args):
    config = make_config(args)
    H, Lf, n, powers, z0 = classical_flow_setup(config)
    rows = []
    header = (["t"] + [f"x{i+1}" for i in range(n)] + [f"p{i+1}" for i in range(n)]
              + [f"trL{k}" for k in powers] + ["charpoly_drift"])
    tracers = [trace_power_fn(Lf, k) for k in powers]
    Lfn = matrix_fn_from_fields(Lf)
    aborted = False
    try:
        Hs, times, traj = scaled_flow(H, z0, config.time, config.dt, n)
    except (PoleError, OverflowError) as exc:
        print(f"flow aborted near a pole: {exc}", file=sys.stderr)
        times, traj = [0.0], [tuple(complex(v) for v in z0)]
        aborted = True
    import numpy as np
    ref = None
    stride = max(1, len(traj) // 200)
    for idx in range(0, len(traj), stride):
        z = traj[idx]
        mat = np.array(Lfn(z), dtype=complex)
        coeffs = np.poly(mat)
        if ref is None:
            ref = coeffs
            scale = 1.0 + float(np.max(np.abs(ref)))
        drift = float(np.max(np.abs(coeffs - ref)) / scale)
        row = [float(times[idx])]
        row += [float(value(v).real) for v in z[:n]]
        row += [float(value(v).real) for v in z[n:]]
        row += [float(value(tr(z)).real) for tr in tracers]
        row += [drift]
        rows.append(row)
    text = ",".join(header) + "\n"
    for row in rows:
        text += ",".join(repr(v) for v in row) + "\n"
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    if aborted:
        print("partial output: trajectory aborted", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="laxkit",
                                     description="Lax pair construction and "
                                                 "numerical certification")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("verify", cmd_verify), ("flow", cmd_flow)):
        sp = sub.add_parser(name)
        sp.add_argument("--system", required=True)
        sp.add_argument("--rank", type=int, default=2)
        sp.add_argument("--params", default=None, help="JSON parameter file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--suite", default="default")
        sp.add_argument("--out", default=None, help="JSON report path")
        sp.add_argument("--time", type=float, default=1.0)
        sp.add_argument("--dt", type=float, default=2e-3)
        sp.add_argument("--perturb", type=float, default=0.0)
        sp.add_argument("--csv", default=None, help="CSV trajectory path")
        sp.set_defaults(fn=fn)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
