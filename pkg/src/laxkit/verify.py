"""Sampling policies, residuals, Poisson brackets, flows, and reports.

Residuals are scale-free: max over samples of |lhs-rhs|/(1+|lhs|+|rhs|).
Sample points rejected by a pole guard are redrawn (up to 100 attempts per
point), so identities are tested off the singular divisor.  Every check is
reproducible bit-for-bit from its seed.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .dual import extract, seed as dual_seed, value
from .fields import PoleError
from .opcore import residual_pair

DEFAULT_PROBES = 5
DEFAULT_POINTS = 8
MAX_POINT_TRIES = 100


@dataclass
class CheckSpec:
    name: str
    tol: float
    seed: int
    probes: int = DEFAULT_PROBES
    points: int = DEFAULT_POINTS


@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    passed: bool
    seconds: float = 0.0

    def as_dict(self):
        return {"name": self.name, "residual": self.residual,
                "tol": self.tol, "pass": self.passed}


@dataclass
class VerificationReport:
    system: str
    params: dict
    seed: int
    checks: list = field(default_factory=list)
    runtime_ms: float = 0.0

    def add(self, result: CheckResult):
        self.checks.append(result)

    def all_passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {
            "system": self.system,
            "params": encode_params(self.params),
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
            "runtime_ms": self.runtime_ms,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def encode_params(params):
    out = {}
    for k, v in params.items():
        if isinstance(v, complex):
            out[k] = {"re": repr(v.real), "im": repr(v.imag)}
        elif isinstance(v, float):
            out[k] = {"re": repr(v), "im": "0.0"}
        elif isinstance(v, (list, tuple)):
            out[k] = [encode_params({"v": x})["v"] for x in v]
        else:
            out[k] = v
    return out


def decode_number(v):
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        z = complex(float(v["re"]), float(v["im"]))
        return z.real if z.imag == 0 else z
    return v


@dataclass
class PointPolicy:
    """Box for random complex sample points."""

    n: int
    re_lo: float = -0.9
    re_hi: float = 0.9
    im: float = 0.15

    def draw(self, rng):
        return tuple(complex(rng.uniform(self.re_lo, self.re_hi),
                             rng.uniform(-self.im, self.im))
                     for _ in range(self.n))


def _thread_cap():
    import os
    try:
        return max(1, int(os.environ.get("LAXKIT_THREADS", "1")))
    except ValueError:
        return 1


def run_point_max(evalfn, rng, policy: PointPolicy, npoints,
                  max_tries=MAX_POINT_TRIES):
    """Max of evalfn over sample points, redrawing pole-guarded points.

    Points are drawn serially (deterministic), evaluated either serially or
    on a thread pool capped by LAXKIT_THREADS, and reduced by max.
    """
    cap = _thread_cap()
    worst = 0.0
    got = 0
    tries = 0
    while got < npoints:
        batch = [policy.draw(rng) for _ in range(npoints - got)]
        if cap > 1:
            from concurrent.futures import ThreadPoolExecutor

            def attempt(x):
                try:
                    return evalfn(x)
                except PoleError:
                    return None
            with ThreadPoolExecutor(max_workers=cap) as ex:
                outs = list(ex.map(attempt, batch))
        else:
            outs = []
            for x in batch:
                try:
                    outs.append(evalfn(x))
                except PoleError:
                    outs.append(None)
        for r in outs:
            if r is None:
                tries += 1
                if tries > max_tries:
                    raise PoleError("all sample points rejected by the pole guard")
            else:
                worst = max(worst, r)
                got += 1
    return worst


def pair_evalfn(op1, op2, probes):
    fs = [(op1.apply_field(p), op2.apply_field(p)) for p in probes]

    def evalfn(x):
        return max(residual_pair(value(g1(x)), value(g2(x))) for g1, g2 in fs)
    return evalfn


def zero_evalfn(op, probes):
    fs = [op.apply_field(p) for p in probes]

    def evalfn(x):
        worst = 0.0
        for g in fs:
            v = value(g(x))
            worst = max(worst, abs(v) / (1.0 + abs(v)))
        return worst
    return evalfn


def matrix_pair_evalfn(m1, m2, probes):
    fs = []
    for i in range(m1.m):
        for j in range(m1.m):
            for p in probes:
                fs.append((m1.entries[i][j].apply_field(p),
                           m2.entries[i][j].apply_field(p)))

    def evalfn(x):
        return max(residual_pair(value(g1(x)), value(g2(x))) for g1, g2 in fs)
    return evalfn


def matrix_zero_evalfn(m1, probes):
    fs = []
    for i in range(m1.m):
        for j in range(m1.m):
            for p in probes:
                fs.append(m1.entries[i][j].apply_field(p))

    def evalfn(x):
        worst = 0.0
        for g in fs:
            v = value(g(x))
            worst = max(worst, abs(v) / (1.0 + abs(v)))
        return worst
    return evalfn


def field_pair_evalfn(pairs):
    def evalfn(x):
        return max(residual_pair(value(a(x)), value(b(x))) for a, b in pairs)
    return evalfn


def run_check(name, tol, evalfn, rng, policy, npoints=DEFAULT_POINTS):
    t0 = time.perf_counter()
    residual = run_point_max(evalfn, rng, policy, npoints)
    dt = time.perf_counter() - t0
    return CheckResult(name, residual, tol, residual < tol, dt)


def scalar_check(name, tol, residual):
    return CheckResult(name, float(residual), tol, residual < tol)


# -- phase-space calculus -----------------------------------------------

def poisson_bracket(f, g, z, n):
    """{f,g} = sum_i df/dx_i dg/dp_i - df/dp_i dg/dx_i at phase point z."""
    fx, fp, gx, gp = [], [], [], []
    for k in range(2 * n):
        e = tuple(1.0 if i == k else 0.0 for i in range(2 * n))
        df = extract(f(dual_seed(z, e)))
        dg = extract(g(dual_seed(z, e)))
        if k < n:
            fx.append(df)
            gx.append(dg)
        else:
            fp.append(df)
            gp.append(dg)
    return sum(fx[i] * gp[i] - fp[i] * gx[i] for i in range(n))


def poisson_residual(f, g, z, n):
    """Scale-free bracket residual: |{f,g}| / (1 + |grad f| |grad g|)."""
    from .dual import gradient_vec
    import math as _m
    gf = gradient_vec(f, z)
    gg = gradient_vec(g, z)
    br = sum(gf[i] * gg[n + i] - gf[n + i] * gg[i] for i in range(n))
    sf = _m.sqrt(sum(abs(v) ** 2 for v in gf))
    sg = _m.sqrt(sum(abs(v) ** 2 for v in gg))
    return abs(br) / (1.0 + sf * sg)


def hamiltonian_rhs(H, z, n):
    from .dual import gradient_vec
    g = gradient_vec(H, z)
    return tuple(g[n:]) + tuple(-g[:n])


def rk4_step(H, z, dt, n):
    def f(zz):
        return hamiltonian_rhs(H, zz, n)
    k1 = f(z)
    k2 = f(tuple(a + 0.5 * dt * b for a, b in zip(z, k1)))
    k3 = f(tuple(a + 0.5 * dt * b for a, b in zip(z, k2)))
    k4 = f(tuple(a + dt * b for a, b in zip(z, k3)))
    return tuple(a + dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
                 for a, b1, b2, b3, b4 in zip(z, k1, k2, k3, k4))


def hamiltonian_flow(H, z0, T, dt, n, record_every=1):
    """Fixed-step RK4 trajectory of Hamilton's equations for H(x, p)."""
    if T == 0:
        return [0.0], [tuple(z0)]
    steps = max(1, round(T / dt))
    z = tuple(z0)
    times = [0.0]
    traj = [z]
    for s in range(steps):
        z = rk4_step(H, z, dt, n)
        if (s + 1) % record_every == 0 or s == steps - 1:
            times.append((s + 1) * dt)
            traj.append(z)
    return times, traj


def flow_time_scale(H, z0, n, target_speed=0.08):
    """Normalization constant kappa so that the flow of H/kappa starts with
    phase-speed ~ target_speed; fixes a time unit for systems whose natural
    Hamiltonian scale is large (isospectrality and involution statements
    are invariant under constant rescaling of H)."""
    rhs = hamiltonian_rhs(H, z0, n)
    speed = max(abs(v) for v in rhs)
    return max(speed / target_speed, 1.0)


def scaled_flow(H, z0, T, dt, n, target_speed=0.08, record_every=1):
    kappa = flow_time_scale(H, z0, n, target_speed)
    from .fields import Scale
    Hs = Scale(1.0 / kappa, H) if kappa != 1.0 else H
    times, traj = hamiltonian_flow(Hs, z0, T, dt, n, record_every=record_every)
    return Hs, times, traj


def energy_drift(H, traj):
    e0 = value(H(traj[0]))
    return max(abs(value(H(z)) - e0) / (1.0 + abs(e0)) for z in traj)


def isospectral_drift(L_fn, traj):
    """Max drift of characteristic-polynomial coefficients along a flow."""
    ref = None
    worst = 0.0
    for z in traj:
        mat = np.array(L_fn(z), dtype=complex)
        coeffs = np.poly(mat)
        if ref is None:
            ref = coeffs
            scale = 1.0 + np.max(np.abs(ref))
        else:
            worst = max(worst, float(np.max(np.abs(coeffs - ref)) / scale))
    return worst


def matrix_fn_from_fields(entry_fields):
    """Phase-point callable producing a numeric matrix from entry fields."""
    def L_fn(z):
        return [[value(e(z)) for e in row] for row in entry_fields]
    return L_fn


def trace_power_fn(entry_fields, k):
    """Dual-safe tr L^k as a function of the phase point."""
    m = len(entry_fields)

    def fn(z):
        mat = [[e(z) for e in row] for row in entry_fields]
        out = mat
        for _ in range(k - 1):
            out = [[sum(out[i][l] * mat[l][j] for l in range(m))
                    for j in range(m)] for i in range(m)]
        tr = out[0][0]
        for i in range(1, m):
            tr = tr + out[i][i]
        return tr
    return fn


def fit_slope(hs, vals):
    """Least-squares slope of log|val| against log h."""
    import math
    xs = [math.log(h) for h in hs]
    ys = [math.log(max(v, 1e-300)) for v in vals]
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    num = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    den = sum((x - xbar) ** 2 for x in xs)
    return num / den


def rng_for(seed, tag):
    """Deterministic child RNG for a named check."""
    return random.Random(f"{seed}:{tag}")
