"""Affine Hecke basic representation, Cherednik operators, and the GL_n
trigonometric Ruijsenaars Lax pair.

Generators are realized as T_i = tau_i + c_i(x)(s_i - 1) with the standard
kernel c_a = (tau^-1 - tau e^a)/(1 - e^a); R-matrices are R(a) = T_a s_a,
inverted through the quadratic relation T^-1 = T - tau + tau^-1.  The GL_n
Cherednik operators Y_i then produce the Macdonald-Ruijsenaars operator,
the size-n quantum Lax pair, and the u L^k v integrals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Const, Field, LinArg, nsum
from .opcore import WOp
from .special import c_reduced, trig_ab
from .weyl import (RootSystemData, SignedPerm, affine_reflection, dot,
                   orbit_stabilizer, weyl_enumerate)


@dataclass
class TrigGLConfig:
    n: int
    tau: complex
    c: complex          # step constant, q = e^c
    beta: float = 1.0   # classical momenta enter as e^{beta p}

    @property
    def q(self):
        import cmath
        return cmath.exp(self.c)


def _eform(i, j, n):
    """Coefficients of x_i - x_j (1-based indices)."""
    return tuple((1 if k == i - 1 else 0) - (1 if k == j - 1 else 0) for k in range(n))


def a_field(cfg, i, j, shift=0.0) -> Field:
    tau = cfg.tau
    return LinArg(lambda z: trig_ab(z, tau)[0], _eform(i, j, cfg.n), shift)


def b_field(cfg, i, j, shift=0.0) -> Field:
    tau = cfg.tau
    return LinArg(lambda z: trig_ab(z, tau)[1], _eform(i, j, cfg.n), shift)


def r_ij(cfg, i, j, classical=False) -> WOp:
    """R_{ij} = a(x_i - x_j) + b(x_i - x_j) s_{ij}."""
    n = cfg.n
    c = 0.0 if classical else cfg.c
    s = _swap(n, i, j)
    return WOp(n, c, {(SignedPerm.identity(n), (0,) * n): a_field(cfg, i, j),
                      (s, (0,) * n): b_field(cfg, i, j)})


def r_ij_inv(cfg, i, j, classical=False) -> WOp:
    """Inverse via the quadratic relation: R^-1 = s (T - tau + tau^-1)."""
    n = cfg.n
    c = 0.0 if classical else cfg.c
    s_op = WOp.from_group(n, c, _swap(n, i, j))
    T = r_ij(cfg, i, j, classical=classical) * s_op
    Tinv = T - WOp.from_scalar(n, c, cfg.tau - 1.0 / cfg.tau)
    return s_op * Tinv


def _swap(n, i, j):
    img = list(range(1, n + 1))
    img[i - 1], img[j - 1] = j, i
    return SignedPerm(img)


def translation_op(cfg, i, classical=False) -> WOp:
    n = cfg.n
    lam = tuple(1 if k == i - 1 else 0 for k in range(n))
    return WOp.translation(n, 0.0 if classical else cfg.c, lam)


# -- general basic representation ---------------------------------------

def hecke_tau(rs: RootSystemData, alpha, tau_short, tau_long):
    return tau_long if (rs.kind == "C" and dot(alpha, alpha) == 4) else tau_short


def basic_rep(rs: RootSystemData, c, tau_short, tau_long=None):
    """Realized generators T_0..T_n of the affine Hecke algebra (reduced case)."""
    if tau_long is None:
        tau_long = tau_short
    n = rs.dim
    gens = []
    for ar in rs.affine_simple_roots():
        tau_a = hecke_tau(rs, ar.alpha, tau_short, tau_long)
        s_aff = affine_reflection(ar)
        kernel = LinArg(lambda z, ta=tau_a: c_reduced(z, ta), ar.alpha, ar.k * c)
        op = WOp(n, c, {(SignedPerm.identity(n), (0,) * n): nsum([Const(tau_a + 0j), -kernel]),
                        (s_aff.w, s_aff.lam): kernel})
        gens.append(op)
    return gens


def hecke_inverse(T: WOp, tau_i) -> WOp:
    return T - WOp.from_scalar(T.n, T.c, tau_i - 1.0 / tau_i)


def braid_order(rs, i, j):
    """Order of s_i s_j in the affine Weyl group (None if infinite <= 6)."""
    refl = [affine_reflection(a) for a in rs.affine_simple_roots()]
    prod = refl[i] * refl[j]
    cur = prod
    for m in range(1, 7):
        if cur.is_identity():
            return m
        cur = cur * prod
    return None


# -- GL_n Cherednik operators -------------------------------------------

def cherednik_gln(cfg, i, classical=False) -> WOp:
    """Y_i = R_{i,i+1} ... R_{i,n} t(e_i) R_{1i}^-1 ... R_{i-1,i}^-1."""
    n = cfg.n
    out = None
    for j in range(i + 1, n + 1):
        R = r_ij(cfg, i, j, classical=classical)
        out = R if out is None else out * R
    ti = translation_op(cfg, i, classical=classical)
    out = ti if out is None else out * ti
    for j in range(1, i):
        out = out * r_ij_inv(cfg, j, i, classical=classical)
    return out


def mr_operator(cfg, classical=False) -> WOp:
    """L_f for f = Y_1 + ... + Y_n: sum_i (prod_{l != i} a_il) t(e_i)."""
    n = cfg.n
    c = 0.0 if classical else cfg.c
    out = WOp.zero(n, c)
    for i in range(1, n + 1):
        coeff = None
        for l in range(1, n + 1):
            if l != i:
                f = a_field(cfg, i, l)
                coeff = f if coeff is None else coeff * f
        if coeff is None:
            coeff = Const(1.0 + 0j)
        lam = tuple(1 if k == i - 1 else 0 for k in range(n))
        out += WOp(n, c, {(SignedPerm.identity(n), lam): coeff})
    return out


def lemma_ns_closed(cfg) -> WOp:
    """Closed form of Y_1 on M': (A + sum_i B_i s_{1i}) t(e_1)."""
    n = cfg.n
    A = None
    for l in range(2, n + 1):
        f = a_field(cfg, 1, l)
        A = f if A is None else A * f
    terms = {(SignedPerm.identity(n), (0,) * n): A}
    op = WOp(n, cfg.c, terms)
    for i in range(2, n + 1):
        B = b_field(cfg, 1, i)
        for l in range(2, n + 1):
            if l != i:
                B = B * a_field(cfg, i, l)
        op += WOp(n, cfg.c, {(_swap(n, 1, i), (0,) * n): B})
    return op * translation_op(cfg, 1)


@dataclass
class TrigLax:
    cfg: TrigGLConfig
    tbl: object
    L: object
    A: object
    H: WOp
    Y1: WOp
    Ahat: WOp


def lax_trig_gln(cfg) -> TrigLax:
    """Quantum Lax pair of size n for the trigonometric Ruijsenaars system."""
    n = cfg.n
    rs = _gl_rs(n)
    xi = tuple(1 if i == 0 else 0 for i in range(n))
    _o, _s, tbl = orbit_stabilizer(rs, xi)
    Y1 = cherednik_gln(cfg, 1)
    fY = Y1
    for i in range(2, n + 1):
        fY = fY + cherednik_gln(cfg, i)
    H = mr_operator(cfg)
    Ahat = fY - H
    return TrigLax(cfg=cfg, tbl=tbl, L=Y1.restrict(tbl), A=Ahat.restrict(tbl),
                   H=H, Y1=Y1, Ahat=Ahat)


def _gl_rs(n):
    from .weyl import build_root_system
    return build_root_system("A", n)


def lax_tables(cfg):
    """Closed-form L and A entries (the Nazarov-Sklyanin shaped matrices)."""
    n = cfg.n
    c = cfg.c
    Lrows, Arows = [], []
    for i in range(1, n + 1):
        Lrow, Arow = [], []
        for j in range(1, n + 1):
            lam = tuple(1 if k == j - 1 else 0 for k in range(n))
            if i == j:
                coeff = None
                for l in range(1, n + 1):
                    if l != j:
                        f = a_field(cfg, j, l)
                        coeff = f if coeff is None else coeff * f
                if coeff is None:
                    coeff = Const(1.0 + 0j)
                Lrow.append(WOp(n, c, {(SignedPerm.identity(n), lam): coeff}))
                Arow.append(None)  # filled below as negative row sum
            else:
                prod = None
                for l in range(1, n + 1):
                    if l != j and l != i:
                        f = a_field(cfg, j, l)
                        prod = f if prod is None else prod * f
                base = prod if prod is not None else Const(1.0 + 0j)
                Lrow.append(WOp(n, c, {(SignedPerm.identity(n), lam):
                                       base * b_field(cfg, i, j)}))
                # b_{ij} t(e_j) - t(e_j) b_{ij} = (b_ij - b_ij(x + c e_j)) t(e_j)
                diff = nsum([b_field(cfg, i, j), -_shifted_b(cfg, i, j)])
                Arow.append(WOp(n, c, {(SignedPerm.identity(n), lam): base * diff}))
        Lrows.append(Lrow)
        Arows.append(Arow)
    from .opcore import OperatorMatrix
    for i in range(n):
        acc = None
        for j in range(n):
            if j != i:
                acc = Arows[i][j] if acc is None else acc + Arows[i][j]
        Arows[i][i] = acc.scale(-1.0)
    return OperatorMatrix(Lrows), OperatorMatrix(Arows)


def _shifted_b(cfg, i, j):
    """b(x_i - x_j - c): the coefficient after commuting through t(e_j)."""
    return b_field(cfg, i, j, shift=-cfg.c)


def phi_vector(cfg):
    """phi_i = prod_{l != i} a_{li}; the row vector u of the integral formula."""
    n = cfg.n
    out = []
    for i in range(1, n + 1):
        f = None
        for l in range(1, n + 1):
            if l != i:
                g = a_field(cfg, l, i)
                f = g if f is None else f * g
        out.append(f if f is not None else Const(1.0 + 0j))
    return out


def integrals_trig(lax: TrigLax, kmax=3):
    """H_k = u L^k v as scalar difference operators, k = 1..kmax."""
    cfg = lax.cfg
    phis = phi_vector(cfg)
    out = []
    Lk = lax.L
    for _k in range(1, kmax + 1):
        acc = None
        for i in range(Lk.m):
            for j in range(Lk.m):
                term = Lk.entries[i][j].mul_field_left(phis[i])
                acc = term if acc is None else acc + term
        out.append(acc)
        if _k < kmax:
            Lk = Lk * lax.L
    return out


def e_tau_symmetrizer(cfg):
    """e_tau = (sum tau_w T_w) / (sum tau_w^2) over the finite Hecke algebra."""
    n = cfg.n
    rs = _gl_rs(n)
    from .weyl import reduced_word_finite
    W = weyl_enumerate(rs)
    Ts = []
    for i in range(1, n):
        Ts.append(r_ij(cfg, i, i + 1) * WOp.from_group(n, cfg.c, _swap(n, i, i + 1)))
    total = None
    norm = 0j
    for w in W:
        word = reduced_word_finite(rs, w)
        tw = cfg.tau ** len(word)
        Tw = WOp.one(n, cfg.c)
        for idx in word:
            Tw = Tw * Ts[idx - 1]
        total = Tw.scale(tw) if total is None else total + Tw.scale(tw)
        norm += tw * tw
    return total.scale(1.0 / norm)


# -- classical limits ----------------------------------------------------

def classical_lax_gln(cfg):
    """Classical L and A entry phase fields (x_1..x_n, p_1..p_n)."""
    n = cfg.n
    beta = cfg.beta
    Lf, Af = [], []
    for i in range(1, n + 1):
        Lrow, Arow = [], []
        for j in range(1, n + 1):
            prodfield = None
            for l in range(1, n + 1):
                if l != j and l != i:
                    g = a_field(cfg, j, l)
                    prodfield = g if prodfield is None else prodfield * g
            diagprod = None
            for l in range(1, n + 1):
                if l != j:
                    g = a_field(cfg, j, l)
                    diagprod = g if diagprod is None else diagprod * g
            if diagprod is None:
                diagprod = Const(1.0 + 0j)
            ep = _mom_exp(n, j - 1, beta)
            if i == j:
                Lrow.append(_phase_prod(diagprod, ep, n))
                Arow.append(None)
            else:
                base = prodfield if prodfield is not None else Const(1.0 + 0j)
                Lrow.append(_phase_prod(base * b_field(cfg, i, j), ep, n))
                db = _db_dxj(cfg, i, j)
                Arow.append(_phase_prod((beta * 1.0) * (base * db), ep, n))
        Lf.append(Lrow)
        Af.append(Arow)
    for i in range(n):
        parts = [Af[i][j] for j in range(n) if j != i]
        Af[i][i] = Scale_neg_sum(parts)
    return Lf, Af


def _db_dxj(cfg, i, j):
    """d b(x_i - x_j)/d x_j as a field."""
    n = cfg.n
    return b_field(cfg, i, j).deriv(tuple(1.0 if k == j - 1 else 0.0 for k in range(n)))


def _mom_exp(n, idx, beta):
    from .fields import exp_lin
    k = [0.0] * (2 * n)
    k[n + idx] = beta
    return exp_lin(tuple(k))


class _XOnly(Field):
    """Lift an x-space field to phase space (first n coordinates)."""

    __slots__ = ("base", "n")

    def __init__(self, base, n):
        self.base = base
        self.n = n

    def __call__(self, z):
        return self.base(z[:self.n])


def _phase_prod(xfield, pfield, n):
    return _XOnly(xfield, n) * pfield


def Scale_neg_sum(parts):
    return nsum(parts) * (-1.0)


def classical_mr_hamiltonian(cfg):
    """Classical Macdonald-Ruijsenaars Hamiltonian sum_i (prod a_il) e^{beta p_i}."""
    n = cfg.n
    parts = []
    for i in range(1, n + 1):
        coeff = None
        for l in range(1, n + 1):
            if l != i:
                g = a_field(cfg, i, l)
                coeff = g if coeff is None else coeff * g
        if coeff is None:
            coeff = Const(1.0 + 0j)
        parts.append(_phase_prod(coeff, _mom_exp(n, i - 1, cfg.beta), n))
    return nsum(parts)
