"""Elliptic Dunkl operators and spectral-parameter Lax pairs for the
elliptic Calogero-Moser (type A) and Inozemtsev (BC_n) systems.

The dynamical vector lambda enters through the kernels sigma_{<a^vee,
lambda>}(<a, x>); specializing lambda = (mu, 0, ..., 0) makes mu a spectral
parameter and turns the quadratic split <y,y> - const = H + A into a Lax
pair on M' after dropping scalar terms (which are retained internally so
the split closes exactly).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Const, Field, LinArg, nsum
from .opcore import DiffOp, OperatorMatrix
from .special import eta1, sigma, sigma_dz, v_func, v_func_dz, wp, dual_couplings
from .weyl import RootSystemData, SignedPerm, build_root_system, dot, orbit_stabilizer


@dataclass
class EllipticDunklConfig:
    rs: RootSystemData
    t: complex
    c: complex
    tau: complex
    lam: tuple
    g: tuple = None          # (g0..g3) for the BC/Inozemtsev flavor
    bc: bool = False         # v-kernel sign-flip terms instead of reduced 2e_i roots

    def with_lam(self, lam):
        return EllipticDunklConfig(self.rs, self.t, self.c, self.tau, tuple(lam),
                                   self.g, self.bc)


def sigma_form(mu, form, tau, const=0j) -> Field:
    return LinArg(lambda z: sigma(mu, z, tau), form, const)


def sigma_dz_form(mu, form, tau, const=0j) -> Field:
    return LinArg(lambda z: sigma_dz(mu, z, tau), form, const)


def wp_form(form, tau, const=0j) -> Field:
    return LinArg(lambda z: wp(z, tau), form, const)


def v_form(mu, form, g, tau) -> Field:
    return LinArg(lambda z: v_func(mu, z, g, tau), form)


def v_dz_form(mu, form, g, tau) -> Field:
    return LinArg(lambda z: v_func_dz(mu, z, g, tau), form)


def _basis(i, n):
    return tuple(1 if k == i else 0 for k in range(n))


def elliptic_dunkl(cfg: EllipticDunklConfig, i, classical=False) -> DiffOp:
    """y_i(lambda); the BC flavor has the v-kernel on sign flips."""
    rs = cfg.rs
    n = rs.dim
    tau = cfg.tau
    lam = cfg.lam
    op = DiffOp.partial(n, i, 1.0 if classical else cfg.t, classical=classical)
    xi = _basis(i, n)
    if not cfg.bc:
        for a in rs.pos_roots:
            ax = dot(a, xi)
            if ax == 0:
                continue
            av = rs.coroot(a)
            mu = sum(v * l for v, l in zip(av, lam))
            ker = (cfg.c * ax) * sigma_form(mu, a, tau)
            op = op + DiffOp(n, {(rs.reflection(a), (0,) * n): ker},
                             classical=classical)
        return op
    # Inozemtsev flavor: v_{lam_i}(x_i) s_i + c sum_j (sigma terms)
    op = op + DiffOp(n, {(_flip(n, i), (0,) * n):
                         v_form(lam[i], _basis(i, n), cfg.g, tau)},
                     classical=classical)
    for j in range(n):
        if j == i:
            continue
        dform = tuple(_basis(i, n)[k] - _basis(j, n)[k] for k in range(n))
        sform = tuple(_basis(i, n)[k] + _basis(j, n)[k] for k in range(n))
        op = op + DiffOp(n, {(_swap(n, i, j), (0,) * n):
                             cfg.c * sigma_form(lam[i] - lam[j], dform, tau)},
                         classical=classical)
        op = op + DiffOp(n, {(_negswap(n, i, j), (0,) * n):
                             cfg.c * sigma_form(lam[i] + lam[j], sform, tau)},
                         classical=classical)
    return op


def _swap(n, i, j):
    img = list(range(1, n + 1))
    img[i], img[j] = j + 1, i + 1
    return SignedPerm(img)


def _negswap(n, i, j):
    img = list(range(1, n + 1))
    img[i], img[j] = -(j + 1), -(i + 1)
    return SignedPerm(img)


def _flip(n, i):
    img = list(range(1, n + 1))
    img[i] = -(i + 1)
    return SignedPerm(img)


def quadratic_sum(cfg, classical=False) -> DiffOp:
    out = None
    for i in range(cfg.rs.dim):
        y = elliptic_dunkl(cfg, i, classical=classical)
        y2 = y * y
        out = y2 if out is None else out + y2
    return out


def split_constant(cfg) -> complex:
    """The lambda-dependent scalar subtracted from <y,y> (or <y,y>/2)."""
    rs = cfg.rs
    tau = cfg.tau
    lam = cfg.lam
    if not cfg.bc:
        total = 0j
        for a in rs.pos_roots:
            av = rs.coroot(a)
            mu = sum(v * l for v, l in zip(av, lam))
            total += cfg.c ** 2 * dot(a, a) * wp(mu, tau)
        return 0.5 * total
    n = rs.dim
    gv = dual_couplings(cfg.g)
    om = (0j, 0.5 + 0j, (1 + tau) / 2, tau / 2)
    total = 0j
    for i in range(n):
        for j in range(i + 1, n):
            total += 2 * cfg.c ** 2 * (wp(lam[i] - lam[j], tau) + wp(lam[i] + lam[j], tau))
    for i in range(n):
        for r in range(4):
            total += gv[r] ** 2 * wp(lam[i] + om[r], tau)
    return total


def split_hamiltonian(cfg) -> DiffOp:
    """The lambda-free H of the quadratic split (A: with 1/2, BC: without)."""
    rs = cfg.rs
    n = rs.dim
    tau = cfg.tau
    t = cfg.t
    if not cfg.bc:
        op = DiffOp.zero(n)
        for i in range(n):
            m = tuple(2 if k == i else 0 for k in range(n))
            op = op + DiffOp(n, {(SignedPerm.identity(n), m): Const(0.5 * t ** 2 + 0j)})
        parts = []
        for a in rs.pos_roots:
            parts.append((-0.5 * cfg.c * (cfg.c + t) * dot(a, a)) * wp_form(a, tau))
        return op + DiffOp.from_field(n, nsum(parts))
    op = DiffOp.zero(n)
    for i in range(n):
        m = tuple(2 if k == i else 0 for k in range(n))
        op = op + DiffOp(n, {(SignedPerm.identity(n), m): Const(t ** 2 + 0j)})
    parts = []
    om_shift = _half_period_shifts(tau)
    for i in range(n):
        for j in range(i + 1, n):
            dform = tuple(_basis(i, n)[k] - _basis(j, n)[k] for k in range(n))
            sform = tuple(_basis(i, n)[k] + _basis(j, n)[k] for k in range(n))
            parts.append((-2 * cfg.c * (cfg.c + t)) * (wp_form(dform, tau) + wp_form(sform, tau)))
    for i in range(n):
        for r in range(4):
            gr = cfg.g[r]
            parts.append((-gr * (gr + t)) * wp_form(_basis(i, n), tau, om_shift[r]))
    return op + DiffOp.from_field(n, nsum(parts))


def _half_period_shifts(tau):
    return (0j, 0.5 + 0j, (1 + tau) / 2, tau / 2)


def split_a_operator(cfg) -> DiffOp:
    """A-hat of the quadratic split, with sigma'-terms replaced by their
    limits on lambda-stabilized root pairs (exact, constants retained)."""
    rs = cfg.rs
    n = rs.dim
    tau = cfg.tau
    t = cfg.t
    e1 = eta1(tau)
    op = DiffOp.zero(n)
    if not cfg.bc:
        for a in rs.pos_roots:
            av = rs.coroot(a)
            mu = sum(v * l for v, l in zip(av, cfg.lam))
            s = rs.reflection(a)
            pref = 0.5 * t * cfg.c * dot(a, a)
            if pref == 0:
                continue
            if abs(mu) < 1e-12:
                # sigma'_0(z) s -> (-wp(z) - 2 eta1) s
                op = op + DiffOp(n, {(SignedPerm.identity(n), (0,) * n): pref * wp_form(a, tau),
                                     (s, (0,) * n): pref * nsum([-wp_form(a, tau),
                                                                 Const(-2 * e1)])})
            else:
                op = op + DiffOp(n, {(SignedPerm.identity(n), (0,) * n): pref * wp_form(a, tau),
                                     (s, (0,) * n): pref * sigma_dz_form(mu, a, tau)})
        return op
    lam = cfg.lam
    om_shift = _half_period_shifts(tau)
    for i in range(n):
        for j in range(i + 1, n):
            dform = tuple(_basis(i, n)[k] - _basis(j, n)[k] for k in range(n))
            sform = tuple(_basis(i, n)[k] + _basis(j, n)[k] for k in range(n))
            for form, mu, s in ((dform, lam[i] - lam[j], _swap(n, i, j)),
                                (sform, lam[i] + lam[j], _negswap(n, i, j))):
                pref = 2 * cfg.c * t
                if pref == 0:
                    continue
                if abs(mu) < 1e-12:
                    op = op + DiffOp(n, {(SignedPerm.identity(n), (0,) * n): pref * wp_form(form, tau),
                                         (s, (0,) * n): pref * nsum([-wp_form(form, tau),
                                                                     Const(-2 * e1)])})
                else:
                    op = op + DiffOp(n, {(SignedPerm.identity(n), (0,) * n): pref * wp_form(form, tau),
                                         (s, (0,) * n): pref * sigma_dz_form(mu, form, tau)})
    for i in range(n):
        parts = [(t * cfg.g[r]) * wp_form(_basis(i, n), tau, om_shift[r]) for r in range(4)]
        op = op + DiffOp.from_field(n, nsum(parts))
        if abs(lam[i]) < 1e-12:
            ker = nsum([(-t * cfg.g[r]) * wp_form(_basis(i, n), tau, om_shift[r])
                        for r in range(4)] + [Const(-2 * e1 * t * sum(cfg.g))])
        else:
            ker = t * v_dz_form(lam[i], _basis(i, n), cfg.g, tau)
        op = op + DiffOp(n, {(_flip(n, i), (0,) * n): ker})
    return op


def elliptic_split(cfg):
    """(H, A, const) with <y,y>-normalized split: lhs - const = H + A."""
    H = split_hamiltonian(cfg)
    A = split_a_operator(cfg)
    const = split_constant(cfg)
    return H, A, const


# -- type A Lax pair -------------------------------------------------------

@dataclass
class EllipticLax:
    cfg: EllipticDunklConfig
    tbl: object
    L: OperatorMatrix
    A: OperatorMatrix
    H: DiffOp


def lax_elliptic_A(n, t, c, mu, tau) -> EllipticLax:
    """Spectral-parameter Lax pair from y_1 at lambda = (mu, 0, ..., 0)."""
    rs = build_root_system("A", n)
    lam = (mu,) + (0,) * (n - 1)
    cfg = EllipticDunklConfig(rs, t, c, tau, lam)
    _o, _s, tbl = orbit_stabilizer(rs, _basis(0, n))
    y1 = elliptic_dunkl(cfg, 0)
    Lmat = y1.restrict(tbl)
    # A-hat on M': c t sum_j (wp(x_1j) + sigma'_mu(x_1j) s_1j), constants dropped
    Ahat = DiffOp.zero(n)
    for j in range(1, n):
        form = tuple(_basis(0, n)[k] - _basis(j, n)[k] for k in range(n))
        Ahat = Ahat + DiffOp(n, {(SignedPerm.identity(n), (0,) * n): (cfg.c * t) * wp_form(form, tau),
                                 (_swap(n, 0, j), (0,) * n): (cfg.c * t) * sigma_dz_form(mu, form, tau)})
    Amat = Ahat.restrict(tbl)
    H = split_hamiltonian(cfg)
    return EllipticLax(cfg=cfg, tbl=tbl, L=Lmat, A=Amat, H=H)


def ael_tables(n, t, c, mu, tau):
    """Explicit (size n) matrices: L off-diag c sigma_mu(x_k - x_l), diag t d_k;
    A off-diag c t sigma'_mu, diag c t sum_j wp(x_j - x_k)."""
    Lrows, Arows = [], []
    for k in range(n):
        Lrow, Arow = [], []
        for l in range(n):
            if k == l:
                Lrow.append(DiffOp.partial(n, k, t))
                parts = []
                for j in range(n):
                    if j != k:
                        form = tuple(_basis(j, n)[a] - _basis(k, n)[a] for a in range(n))
                        parts.append(wp_form(form, tau))
                Arow.append(DiffOp.from_field(n, (c * t) * nsum(parts)))
            else:
                form = tuple(_basis(k, n)[a] - _basis(l, n)[a] for a in range(n))
                Lrow.append(DiffOp.from_field(n, c * sigma_form(mu, form, tau)))
                Arow.append(DiffOp.from_field(n, (c * t) * sigma_dz_form(mu, form, tau)))
        Lrows.append(Lrow)
        Arows.append(Arow)
    return OperatorMatrix(Lrows), OperatorMatrix(Arows)


# -- Inozemtsev (BC_n) ------------------------------------------------------

def _ext_basis(idx, n):
    """Extended coordinate forms, x_{n+i} = -x_i (0-based idx in 0..2n-1)."""
    out = [0.0] * n
    if idx < n:
        out[idx] = 1.0
    else:
        out[idx - n] = -1.0
    return tuple(out)


def lax_inozemtsev(n, t, c, g, mu, tau):
    """2n x 2n quantum Lax pair for the Inozemtsev system at lambda = (mu, 0..0)."""
    rs = build_root_system("C", n)
    lam = (mu,) + (0,) * (n - 1)
    cfg = EllipticDunklConfig(rs, t, c, tau, lam, g=tuple(g), bc=True)
    _o, _s, tbl = orbit_stabilizer(rs, _basis(0, n))
    y1 = elliptic_dunkl(cfg, 0)
    Lmat = y1.restrict(tbl)
    om_shift = _half_period_shifts(tau)
    Ahat = DiffOp.zero(n)
    for j in range(1, n):
        dform = tuple(_basis(0, n)[k] - _basis(j, n)[k] for k in range(n))
        sform = tuple(_basis(0, n)[k] + _basis(j, n)[k] for k in range(n))
        Ahat = Ahat + DiffOp(n, {
            (SignedPerm.identity(n), (0,) * n):
                (2 * c * t) * (wp_form(dform, tau) + wp_form(sform, tau)),
            (_swap(n, 0, j), (0,) * n): (2 * c * t) * sigma_dz_form(mu, dform, tau),
            (_negswap(n, 0, j), (0,) * n): (2 * c * t) * sigma_dz_form(mu, sform, tau)})
    parts = [(t * g[r]) * wp_form(_basis(0, n), tau, om_shift[r]) for r in range(4)]
    Ahat = Ahat + DiffOp.from_field(n, nsum(parts))
    Ahat = Ahat + DiffOp(n, {(_flip(n, 0), (0,) * n):
                             t * v_dz_form(mu, _basis(0, n), g, tau)})
    Amat = Ahat.restrict(tbl)
    H = split_hamiltonian(cfg)
    return EllipticLax(cfg=cfg, tbl=tbl, L=Lmat, A=Amat, H=H)


def inozemtsev_tables(n, t, c, g, mu, tau):
    """Explicit 2n x 2n tables of the Inozemtsev pair (extended indices)."""
    m = 2 * n
    Lrows, Arows = [], []
    for i in range(m):
        Lrow, Arow = [], []
        fi = _ext_basis(i, n)
        for j in range(m):
            fj = _ext_basis(j, n)
            diff = tuple(a - b for a, b in zip(fi, fj))
            if i == j:
                sign = 1.0 if i < n else -1.0
                Lrow.append(DiffOp.partial(n, i % n, sign * t))
                parts = []
                for l in range(m):
                    if (l - i) % m not in (0, n):
                        fl = _ext_basis(l, n)
                        parts.append(wp_form(tuple(a - b for a, b in zip(fi, fl)), tau))
                acc = (2 * c * t) * nsum(parts)
                om_shift = _half_period_shifts(tau)
                acc = nsum([acc] + [(t * g[r]) * wp_form(fi, tau, om_shift[r])
                                    for r in range(4)])
                Arow.append(DiffOp.from_field(n, acc))
            elif (i - j) % m == n:
                Lrow.append(DiffOp.from_field(n, v_form(mu, fi, g, tau)))
                Arow.append(DiffOp.from_field(n, t * v_dz_form(mu, fi, g, tau)))
            else:
                Lrow.append(DiffOp.from_field(n, c * sigma_form(mu, diff, tau)))
                Arow.append(DiffOp.from_field(n, (2 * c * t) * sigma_dz_form(mu, diff, tau)))
        Lrows.append(Lrow)
        Arows.append(Arow)
    return OperatorMatrix(Lrows), OperatorMatrix(Arows)


def classical_inozemtsev_fields(n, c, g, mu, tau):
    """Phase-field entries of the classical Inozemtsev Lax matrix (inolax)."""
    m = 2 * n
    rows = []
    for i in range(m):
        row = []
        fi = _ext_basis(i, n)
        for j in range(m):
            fj = _ext_basis(j, n)
            if i == j:
                k = [0.0] * (2 * n)
                k[n + i % n] = 1.0 if i < n else -1.0
                row.append(LinArg(None, tuple(k)))
            elif (i - j) % m == n:
                row.append(_xlift(v_form(mu, fi, g, tau), n))
            else:
                diff = tuple(a - b for a, b in zip(fi, fj))
                row.append(_xlift(c * sigma_form(mu, diff, tau), n))
        rows.append(row)
    return rows


class _XLift(Field):
    __slots__ = ("base", "n")

    def __init__(self, base, n):
        self.base = base
        self.n = n

    def __call__(self, z):
        return self.base(z[:self.n])


def _xlift(f, n):
    return _XLift(f, n)


def classical_inozemtsev_hamiltonian(n, c, g, tau):
    """H = sum p_i^2 - 2c^2 sum (wp(x_ij) + wp(x^+_ij)) - sum_i sum_r g_r^2 wp(x_i + om_r)."""
    om_shift = _half_period_shifts(tau)
    parts = []
    for i in range(n):
        k = [0.0] * (2 * n)
        k[n + i] = 1.0
        pi = LinArg(None, tuple(k))
        parts.append(pi * pi)
    xparts = []
    for i in range(n):
        for j in range(i + 1, n):
            dform = tuple(_basis(i, n)[a] - _basis(j, n)[a] for a in range(n))
            sform = tuple(_basis(i, n)[a] + _basis(j, n)[a] for a in range(n))
            xparts.append((-2 * c * c) * (wp_form(dform, tau) + wp_form(sform, tau)))
    for i in range(n):
        for r in range(4):
            xparts.append((-g[r] * g[r]) * wp_form(_basis(i, n), tau, om_shift[r]))
    return nsum(parts + [_xlift(nsum(xparts), n)])


def classical_cm_phase_field(cfg: EllipticDunklConfig):
    """Classical elliptic CM Hamiltonian as a phase field.

    Type A: (1/2) sum p^2 - (1/2) sum c^2 <a,a> wp(<a,x>);
    BC: sum p^2 - 2c^2 sum (wp +- combos) - sum g_r^2 wp(x_i + om_r).
    """
    rs = cfg.rs
    n = rs.dim
    tau = cfg.tau
    parts = []
    if not cfg.bc:
        for i in range(n):
            k = [0.0] * (2 * n)
            k[n + i] = 1.0
            pi = LinArg(None, tuple(k))
            parts.append(0.5 * (pi * pi))
        xparts = []
        for a in rs.pos_roots:
            xparts.append((-0.5 * cfg.c ** 2 * dot(a, a)) * wp_form(a, tau))
        return nsum(parts + [_xlift(nsum(xparts), n)])
    om_shift = _half_period_shifts(tau)
    for i in range(n):
        k = [0.0] * (2 * n)
        k[n + i] = 1.0
        pi = LinArg(None, tuple(k))
        parts.append(pi * pi)
    xparts = []
    for i in range(n):
        for j in range(i + 1, n):
            dform = tuple(_basis(i, n)[a] - _basis(j, n)[a] for a in range(n))
            sform = tuple(_basis(i, n)[a] + _basis(j, n)[a] for a in range(n))
            xparts.append((-2 * cfg.c ** 2) * (wp_form(dform, tau) + wp_form(sform, tau)))
    for i in range(n):
        for r in range(4):
            xparts.append((-cfg.g[r] ** 2) * wp_form(_basis(i, n), tau, om_shift[r]))
    return nsum(parts + [_xlift(nsum(xparts), n)])


# -- regularity probes ------------------------------------------------------

def classical_dual_substitution(cfg: EllipticDunklConfig) -> DiffOp:
    """L_q^{vee,c}(y^c(lambda), lambda) for q = <xi,xi>/2-normalized forms.

    Type A uses (1/2)<y,y> - (1/2) sum c^2 <a,a> wp(<a^vee,lambda>); the BC
    flavor uses <y,y> minus its dual-coupled constant, following the
    quadratic split normalizations.
    """
    qy = quadratic_sum(cfg, classical=True)
    const = split_constant(cfg)
    scale = 0.5 if not cfg.bc else 1.0
    return qy.scale(scale) - DiffOp.from_field(cfg.rs.dim, Const(const),
                                               classical=True)


def dual_substitution_value(cfg, zpoint):
    """Identity-component symbol of the dual-substituted Hamiltonian, plus
    the worst off-identity component magnitude, at a phase point."""
    op = classical_dual_substitution(cfg)
    n = cfg.rs.dim
    x, p = zpoint[:n], zpoint[n:]
    ident = 0j
    worst = 0.0
    for w, lst in op.components().items():
        total = 0j
        for m, f in lst:
            mono = 1.0 + 0j
            for k, mk in enumerate(m):
                if mk:
                    mono *= p[k] ** mk
            total += f(x) * mono
        if w.is_identity():
            ident = total
        else:
            worst = max(worst, abs(total))
    return ident, worst
