"""Rational Dunkl operators and Calogero-Moser Lax pairs.

The Dunkl operator y_xi = t d_xi + sum_{a>0} c_a <a,xi>/<a,x> s_a generates
everything here: invariant polynomials in the y's split as q(y) = L_q + A
with A e = 0, and restricting to M' = e'M turns (y_xi, A) into a quantum Lax
pair of size |W/W'|.  The classical flavor replaces d by momenta; its Lax
pair is the Moser matrix and its A-partner is the t -> 0 limit of A/(i hbar).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Const, inv_form, linear_form, nsum
from .opcore import DiffOp, OperatorMatrix
from .weyl import RootSystemData, SignedPerm, dot, orbit_stabilizer


@dataclass
class RationalDunklConfig:
    """W-invariant couplings: one value per root-length orbit."""

    rs: RootSystemData
    t: complex
    c_short: complex
    c_long: complex = None

    def coupling(self, alpha):
        if dot(alpha, alpha) == 4 and self.rs.kind == "C":
            return self.c_long if self.c_long is not None else self.c_short
        return self.c_short

    @staticmethod
    def physical(rs, hbar, g, g_long=None):
        """The substitution t = -i hbar, c = i g of the Schroedinger form."""
        return RationalDunklConfig(rs, t=-1j * hbar, c_short=1j * g,
                                   c_long=(1j * g_long) if g_long is not None else None)


def dunkl(cfg: RationalDunklConfig, xi, classical=False) -> DiffOp:
    """y_xi (quantum) or y^c_xi (classical, momenta in place of t d)."""
    rs = cfg.rs
    n = rs.dim
    op = DiffOp.zero(n, classical=classical)
    scale = 1.0 if classical else cfg.t
    for i, x in enumerate(xi):
        if x != 0:
            op = op + DiffOp.partial(n, i, scale * x, classical=classical)
    for a in rs.pos_roots:
        ax = dot(a, xi)
        if ax == 0:
            continue
        coeff = (cfg.coupling(a) * ax) * inv_form(a, name=f"<{a},x>")
        op = op + DiffOp(n, {(rs.reflection(a), (0,) * n): coeff},
                         classical=classical)
    return op


def dunkl_basis(cfg, classical=False):
    n = cfg.rs.dim
    basis = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        basis.append(dunkl(cfg, e, classical=classical))
    return basis


def power_sum(cfg, k, classical=False) -> DiffOp:
    """sum_i y_i^k over an orthonormal basis (invariant for k even or type A)."""
    ys = dunkl_basis(cfg, classical=classical)
    out = None
    for y in ys:
        yk = y.power(k)
        out = yk if out is None else out + yk
    return out


def cm_split(cfg, poly=((1.0, 2),), classical=False):
    """q(y) = L_q + A_hat for q a combination of power sums.

    ``poly`` lists (coefficient, power); the default q = <y,y>.  Returns
    (q(y), L_q, A_hat) with L_q the group-free part and A_hat e = 0.
    """
    total = None
    for coeff, k in poly:
        term = power_sum(cfg, k, classical=classical).scale(coeff)
        total = term if total is None else total + term
    L_q = total.collapse()
    A_hat = total - L_q
    return total, L_q, A_hat


def cm_hamiltonian_explicit(cfg) -> DiffOp:
    """L_{xi^2} = t^2 Delta - sum_{a>0} c_a (c_a + t) <a,a> / <a,x>^2."""
    rs = cfg.rs
    n = rs.dim
    op = DiffOp.zero(n)
    for i in range(n):
        m = tuple(2 if j == i else 0 for j in range(n))
        op = op + DiffOp(n, {(SignedPerm.identity(n), m): Const(cfg.t ** 2 + 0j)})
    parts = []
    for a in rs.pos_roots:
        ca = cfg.coupling(a)
        inv = inv_form(a, name=f"<{a},x>")
        parts.append((-ca * (ca + cfg.t) * dot(a, a)) * (inv * inv))
    return op + DiffOp.from_field(n, nsum(parts))


@dataclass
class RationalLax:
    cfg: RationalDunklConfig
    tbl: object
    L: OperatorMatrix
    A: OperatorMatrix
    H: DiffOp
    q_poly: tuple


def lax_pair_rational(cfg, xi=None, poly=((0.5, 2),), probes=None, points=None):
    """Quantum Lax pair (L, A, H) of size |W/W'| for the stabilizer of xi.

    The default q = xi^2/2 gives H = L_{xi^2}/2 and the textbook-normalized
    pair; [L, H 1] = [A, L] holds by construction and is re-checked by the
    harness.
    """
    rs = cfg.rs
    n = rs.dim
    if xi is None:
        xi = tuple(1 if i == 0 else 0 for i in range(n))
    _orbit, _stab, tbl = orbit_stabilizer(rs, xi)
    y_xi = dunkl(cfg, xi)
    _qy, L_q, A_hat = cm_split(cfg, poly)
    Lmat = y_xi.restrict(tbl) if probes is None else _checked_restrict(y_xi, tbl, probes, points)
    Amat = A_hat.restrict(tbl) if probes is None else _checked_restrict(A_hat, tbl, probes, points)
    return RationalLax(cfg=cfg, tbl=tbl, L=Lmat, A=Amat, H=L_q, q_poly=tuple(poly))


def _checked_restrict(op, tbl, probes, points):
    from .opcore import restrict_to_matrix
    return restrict_to_matrix(op, tbl, probes=probes, points=points)


def qlp_reference_matrices(cfg, tbl):
    """Entry formulas of the small type-A pair: off-diagonal c/(x_k - x_l),
    diagonal t d_k for L; -ct/(x_k-x_l)^2 off-diagonal for A."""
    rs = cfg.rs
    n = rs.dim
    m = tbl.m
    c = cfg.c_short
    t = cfg.t
    Lrows, Arows = [], []
    for k in range(m):
        Lrow, Arow = [], []
        for l in range(m):
            if k == l:
                Lrow.append(DiffOp.partial(n, k, t))
                diag_parts = []
                for j in range(m):
                    if j != k:
                        form = tuple((1 if i == j else 0) - (1 if i == k else 0)
                                     for i in range(n))
                        iv = inv_form(form, name="x_j - x_k")
                        diag_parts.append((c * t) * (iv * iv))
                Arow.append(DiffOp.from_field(n, nsum(diag_parts)))
            else:
                form = tuple((1 if i == k else 0) - (1 if i == l else 0)
                             for i in range(n))
                iv = inv_form(form, name="x_k - x_l")
                Lrow.append(DiffOp.from_field(n, c * iv))
                Arow.append(DiffOp.from_field(n, (-c * t) * (iv * iv)))
        Lrows.append(Lrow)
        Arows.append(Arow)
    return OperatorMatrix(Lrows), OperatorMatrix(Arows)


def integrals_rational(lax: RationalLax, kmax=3):
    """H_k = w L^k v (sum of all entries of L^k), k = 1..kmax."""
    out = []
    Lk = lax.L
    for _k in range(1, kmax + 1):
        acc = None
        for i in range(Lk.m):
            for j in range(Lk.m):
                acc = Lk.entries[i][j] if acc is None else acc + Lk.entries[i][j]
        out.append(acc)
        if _k < kmax:
            Lk = Lk * lax.L
    return out


def position_matrix(cfg, tbl):
    """Restriction of multiplication by x_1: diag(x_1, ..., x_n) in type A."""
    n = cfg.rs.dim
    x1 = DiffOp.from_field(n, linear_form(tuple(1 if i == 0 else 0 for i in range(n))))
    return x1.restrict(tbl)


def kks_matrices(cfg, tbl):
    """Both sides of X L - L X + (c + t) 1 = c * ones (type A, xi = e_1)."""
    y1 = dunkl(cfg, tuple(1 if i == 0 else 0 for i in range(cfg.rs.dim)))
    Lmat = y1.restrict(tbl)
    Xmat = position_matrix(cfg, tbl)
    n = cfg.rs.dim
    m = tbl.m
    lhs = Xmat * Lmat - Lmat * Xmat
    const = DiffOp.from_field(n, Const(cfg.c_short + cfg.t))
    lhs = lhs + OperatorMatrix.diagonal(const, m)
    ones = OperatorMatrix([[DiffOp.from_field(n, Const(cfg.c_short + 0j))
                            for _ in range(m)] for _ in range(m)])
    return lhs, ones


def classical_lax(cfg, xi=None):
    """Classical Lax pair: L = restriction of y^c_xi, A = -(1/t) * A-matrix.

    Returns (tbl, L entry fields, A entry fields) where entries are phase
    fields over (x_1..x_n, p_1..p_n).
    """
    rs = cfg.rs
    n = rs.dim
    if xi is None:
        xi = tuple(1 if i == 0 else 0 for i in range(n))
    _o, _s, tbl = orbit_stabilizer(rs, xi)
    yc = dunkl(cfg, xi, classical=True)
    Lmat = yc.restrict(tbl)
    _qy, _L, A_hat = cm_split(cfg, ((0.5, 2),))
    Amat = A_hat.restrict(tbl).scale(-1.0 / cfg.t)
    L_fields = [[_diff_symbol_field(e, 1.0) for e in row] for row in Lmat.entries]
    A_fields = [[_diff_symbol_field(e, cfg.t) for e in row] for row in Amat.entries]
    return tbl, L_fields, A_fields


def classical_hamiltonian(cfg, poly=((0.5, 2),)):
    """q(y^c) collapsed to a phase field (off-identity parts vanish)."""
    qy, L_q, _A = cm_split(cfg, poly, classical=True)
    return _diff_symbol_field(L_q, 1.0), qy


def _diff_symbol_field(op: DiffOp, t):
    """Phase field of a scalar differential operator, d_k -> p_k/t."""
    from .fields import FuncField
    n = op.n

    def fn(z):
        x = z[:n]
        p = z[n:]
        total = 0j
        for (w, m), f in op.terms.items():
            mono = 1.0 + 0j
            for k, mk in enumerate(m):
                if mk:
                    mono = mono * (p[k] / t) ** mk
            total = total + f(x) * mono
        return total
    return FuncField(fn)
