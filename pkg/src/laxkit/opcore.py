"""Crossed-product operator algebra and its matrix representations.

Three term shapes cover every construction in the package:

* ``WOp`` — difference-reflection operators, finite sums of h(x) * w * t(lam)
  with h a scalar field, w a finite signed permutation and t(lam) a lattice
  translation acting by f(x) -> f(x + c*lam).  Step constant c = 0 gives the
  classical crossed product, where t(lam) is read as e^{beta p_lam} and
  composition drops the shift of coefficients.
* ``DiffOp`` — differential-reflection operators, sums of f(x) d^m w.  The
  classical flavor reads d^m as a momentum monomial (no Leibniz rule).
* ``DynOp`` — dynamical operators on (xi, x) with a pair (a, w t(lam)) acting
  on the two blocks; used for the unitary R-matrix Weyl-group action.

Matrices over the scalar (reflection-free) parts represent operator actions
on the induced module M and its parabolic reduction M' = e'M.
"""

from __future__ import annotations

import itertools
import math

from .dual import value
from .fields import (Affine, Const, Deriv, Field, as_field, exp_lin,
                     nsum, symmetrized)
from .weyl import SignedPerm


class FlavorError(TypeError):
    """Composition of incompatible operator flavors."""


class RestrictionError(ValueError):
    """Operator fails W'-invariance, so no matrix on M' exists."""


def _is_zero_field(f):
    return isinstance(f, Const) and f.c == 0


def _multi_transform(m, g: SignedPerm):
    """d^m -> sign * d^(m') under conjugation x -> g x (i.e. g^{-1} d^m g)."""
    out = [0] * len(m)
    sign = 1
    ginv = g.inverse()
    for i, mi in enumerate(m):
        if mi:
            j, s = ginv.basis_image(i)
            out[j] = mi
            if s < 0 and mi % 2 == 1:
                sign = -sign
    return tuple(out), sign


def field_dmulti(f: Field, m):
    """Iterated coordinate derivatives d^m f as a field."""
    dirs = []
    n = len(m)
    for i, mi in enumerate(m):
        e = tuple(1.0 if j == i else 0.0 for j in range(n))
        dirs.extend([e] * mi)
    if not dirs:
        return f
    return Deriv(f, tuple(dirs))


class WOp:
    """Finite sum of h(x) * w * t(lam) in normal form."""

    __slots__ = ("n", "c", "terms")

    def __init__(self, n, c, terms=None):
        self.n = n
        self.c = c
        self.terms = {}
        if terms:
            for key, f in terms.items():
                self._add_term(key, f)

    def _add_term(self, key, f):
        if _is_zero_field(f):
            return
        if key in self.terms:
            self.terms[key] = nsum([self.terms[key], f])
        else:
            self.terms[key] = f

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(n, c):
        return WOp(n, c)

    @staticmethod
    def one(n, c):
        return WOp.from_scalar(n, c, 1.0)

    @staticmethod
    def from_scalar(n, c, z):
        key = (SignedPerm.identity(n), (0,) * n)
        return WOp(n, c, {key: as_field(z)})

    @staticmethod
    def from_field(n, c, f):
        key = (SignedPerm.identity(n), (0,) * n)
        return WOp(n, c, {key: f})

    @staticmethod
    def from_group(n, c, w: SignedPerm, coeff=1.0):
        return WOp(n, c, {(w, (0,) * n): as_field(coeff)})

    @staticmethod
    def translation(n, c, lam, coeff=1.0):
        return WOp(n, c, {(SignedPerm.identity(n), tuple(lam)): as_field(coeff)})

    @staticmethod
    def from_affine(n, c, w: SignedPerm, lam, coeff=1.0):
        return WOp(n, c, {(w, tuple(lam)): as_field(coeff)})

    # -- algebra -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, WOp):
            raise FlavorError(f"cannot combine WOp with {type(other).__name__}")
        if other.n != self.n or other.c != self.c:
            raise FlavorError("WOp dimension/step-constant mismatch")

    def __add__(self, other):
        self._check(other)
        out = WOp(self.n, self.c, dict(self.terms))
        for key, f in other.terms.items():
            out._add_term(key, f)
        return out

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, z):
        if z == 0:
            return WOp.zero(self.n, self.c)
        return WOp(self.n, self.c, {key: z * f for key, f in self.terms.items()})

    def __neg__(self):
        return self.scale(-1.0)

    def __rmul__(self, z):
        if isinstance(z, (int, float, complex)):
            return self.scale(z)
        return NotImplemented

    def mul_field_left(self, g: Field):
        return WOp(self.n, self.c, {key: g * f for key, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check(other)
        out = WOp.zero(self.n, self.c)
        for (w1, l1), h1 in self.terms.items():
            w1inv = w1.inverse()
            shift = tuple(self.c * v for v in l1) if self.c != 0 else None
            for (w2, l2), h2 in other.terms.items():
                # h1 w1 t(l1) h2 w2 t(l2) = h1 * (h2 o map) * (w1 w2) t(w2^-1 l1 + l2)
                h2c = h2.o_affine(w1inv, shift) if self.c != 0 else h2.o_affine(w1inv, None)
                w2inv = w2.inverse()
                lam = tuple(a + b for a, b in zip(w2inv.apply_vec(l1), l2))
                out._add_term((w1 * w2, lam), h1 * h2c)
        return out

    def power(self, k):
        out = WOp.one(self.n, self.c)
        for _ in range(k):
            out = out * self
        return out

    def conj(self, g: SignedPerm):
        """g^{-1} * self * g."""
        ginv = g.inverse()
        out = WOp.zero(self.n, self.c)
        for (w, lam), h in self.terms.items():
            out._add_term((ginv * w * g, ginv.apply_vec(lam)), h.o_group(g))
        return out

    # -- structure -----------------------------------------------------
    def collapse(self):
        """Sum of the D_q-parts a_w (group factors dropped): h w t(lam) -> h t(w lam)."""
        out = WOp.zero(self.n, self.c)
        for (w, lam), h in self.terms.items():
            out._add_term((SignedPerm.identity(self.n), w.apply_vec(lam)), h)
        return out

    def off_identity(self):
        """A_hat = self - collapse(self) = sum a_w (w - 1)."""
        return self - self.collapse()

    def is_scalar(self):
        return all(w.is_identity() for (w, _lam) in self.terms)

    def components(self):
        """Normal form a = sum_w a_w w: dict w -> list of (wlam, coeff field)."""
        comp = {}
        for (w, lam), h in self.terms.items():
            comp.setdefault(w, []).append((w.apply_vec(lam), h))
        return comp

    # -- actions ---------------------------------------------------------
    def apply_field(self, f: Field) -> Field:
        if self.c == 0:
            raise FlavorError("classical WOp has no function action; use symbols")
        parts = []
        for (w, lam), h in self.terms.items():
            shift = tuple(self.c * v for v in lam)
            parts.append(h * f.o_affine(w.inverse(), shift))
        return nsum(parts)

    def snapshot(self, x):
        """Per-point data: list of (coeff value at x, transformed point)."""
        out = []
        for (w, lam), h in self.terms.items():
            winv = w.inverse()
            pt = tuple(a + self.c * b for a, b in zip(winv.apply_vec(x), lam))
            out.append((h(x), pt))
        return out

    def symbol_component(self, w, x, p, beta):
        """Classical symbol of the a_w component at a phase point."""
        total = 0j
        for (w2, lam), h in self.terms.items():
            if w2 == w:
                wl = w2.apply_vec(lam)
                arg = beta * sum(pi * li for pi, li in zip(p, wl))
                total += value(h(x)) * _cexp(arg)
        return total

    def symbol(self, x, p, beta):
        """Full classical symbol sum_w a_w(x,p) (group parts dropped as values)."""
        return sum(self.symbol_component(w, x, p, beta)
                   for w in {w for (w, _l) in self.terms})

    def restrict(self, tbl) -> "OperatorMatrix":
        """Matrix of the action on M' = e'M in the basis e' r_j (x) f_j.

        Entry (k, j) collects conj(d, r_k) over all w' in W' with
        u w' r_j = r_k; this is exact whenever the operator preserves M',
        with no two-sided W'-commutation assumed.
        """
        m = tbl.m
        rep_index = {r: k for k, r in enumerate(tbl.reps)}
        entries = [[WOp.zero(self.n, self.c) for _ in range(m)] for _ in range(m)]
        for (w, lam), h in self.terms.items():
            wl = w.apply_vec(lam)
            for j, rj in enumerate(tbl.reps):
                for wp in tbl.stabilizer:
                    g = w * (wp * rj)
                    k = rep_index.get(g)
                    if k is None:
                        continue
                    rk = tbl.reps[k]
                    rkinv = rk.inverse()
                    entries[k][j] += WOp(self.n, self.c,
                                         {(SignedPerm.identity(self.n),
                                           rkinv.apply_vec(wl)): h.o_group(rk)})
        return OperatorMatrix(entries)


def _cexp(z):
    import cmath
    return cmath.exp(z)


class DiffOp:
    """Finite sum of f(x) d^m w; classical flavor reads d as momentum."""

    __slots__ = ("n", "terms", "classical")

    def __init__(self, n, terms=None, classical=False):
        self.n = n
        self.classical = classical
        self.terms = {}
        if terms:
            for key, f in terms.items():
                self._add_term(key, f)

    def _add_term(self, key, f):
        if _is_zero_field(f):
            return
        if key in self.terms:
            self.terms[key] = nsum([self.terms[key], f])
        else:
            self.terms[key] = f

    @staticmethod
    def zero(n, classical=False):
        return DiffOp(n, classical=classical)

    @staticmethod
    def from_field(n, f, classical=False):
        key = (SignedPerm.identity(n), (0,) * n)
        return DiffOp(n, {key: as_field(f) if not isinstance(f, Field) else f},
                      classical=classical)

    @staticmethod
    def partial(n, direction_index, coeff=1.0, classical=False):
        m = tuple(1 if i == direction_index else 0 for i in range(n))
        return DiffOp(n, {(SignedPerm.identity(n), m): as_field(coeff)},
                      classical=classical)

    @staticmethod
    def from_group(n, w, coeff=1.0, classical=False):
        return DiffOp(n, {(w, (0,) * n): as_field(coeff)}, classical=classical)

    def _check(self, other):
        if not isinstance(other, DiffOp):
            raise FlavorError(f"cannot combine DiffOp with {type(other).__name__}")
        if other.n != self.n or other.classical != self.classical:
            raise FlavorError("DiffOp dimension/flavor mismatch")

    def __add__(self, other):
        self._check(other)
        out = DiffOp(self.n, dict(self.terms), classical=self.classical)
        for key, f in other.terms.items():
            out._add_term(key, f)
        return out

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, z):
        return DiffOp(self.n, {k: z * f for k, f in self.terms.items()},
                      classical=self.classical)

    def __neg__(self):
        return self.scale(-1.0)

    def __rmul__(self, z):
        if isinstance(z, (int, float, complex)):
            return self.scale(z)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check(other)
        out = DiffOp.zero(self.n, classical=self.classical)
        for (w1, m1), f1 in self.terms.items():
            w1inv = w1.inverse()
            for (w2, m2), f2 in other.terms.items():
                g_w = f2.o_group(w1inv)
                m2t, sign = _multi_transform(m2, w1inv)
                w12 = w1 * w2
                if self.classical:
                    mm = tuple(a + b for a, b in zip(m1, m2t))
                    out._add_term((w12, mm), sign * (f1 * g_w))
                    continue
                # Leibniz: d^m1 (g_w * d^m2t) = sum_j C(m1,j) (d^j g_w) d^(m1-j+m2t)
                ranges = [range(mi + 1) for mi in m1]
                for j in itertools.product(*ranges):
                    binom = 1
                    for a, b in zip(m1, j):
                        binom *= math.comb(a, b)
                    dj = field_dmulti(g_w, j)
                    mm = tuple(a - b + cpart for a, b, cpart in zip(m1, j, m2t))
                    out._add_term((w12, mm), (sign * binom) * (f1 * dj))
        return out

    def power(self, k):
        out = DiffOp.from_field(self.n, Const(1.0 + 0j), classical=self.classical)
        for _ in range(k):
            out = out * self
        return out

    def conj(self, g: SignedPerm):
        ginv = g.inverse()
        out = DiffOp.zero(self.n, classical=self.classical)
        for (w, m), f in self.terms.items():
            mt, sign = _multi_transform(m, g)
            out._add_term((ginv * w * g, mt), sign * f.o_group(g))
        return out

    def collapse(self):
        out = DiffOp.zero(self.n, classical=self.classical)
        for (w, m), f in self.terms.items():
            out._add_term((SignedPerm.identity(self.n), m), f)
        return out

    def off_identity(self):
        return self - self.collapse()

    def is_scalar(self):
        return all(w.is_identity() for (w, _m) in self.terms)

    def components(self):
        comp = {}
        for (w, m), f in self.terms.items():
            comp.setdefault(w, []).append((m, f))
        return comp

    def apply_field(self, f: Field) -> Field:
        if self.classical:
            raise FlavorError("classical DiffOp has no function action; use symbols")
        parts = []
        for (w, m), h in self.terms.items():
            g = f.o_group(w.inverse())
            parts.append(h * field_dmulti(g, m))
        return nsum(parts)

    def symbol_component(self, w, x, p, t):
        """a_w as a phase-space value, with d_k read as p_k / t."""
        total = 0j
        for (w2, m), f in self.terms.items():
            if w2 == w:
                mono = 1.0 + 0j
                for k, mk in enumerate(m):
                    if mk:
                        mono *= (p[k] / t) ** mk
                total += value(f(x)) * mono
        return total

    def restrict(self, tbl) -> "OperatorMatrix":
        m = tbl.m
        rep_index = {r: k for k, r in enumerate(tbl.reps)}
        entries = [[DiffOp.zero(self.n, classical=self.classical) for _ in range(m)]
                   for _ in range(m)]
        for (w, mi), f in self.terms.items():
            for j, rj in enumerate(tbl.reps):
                for wp in tbl.stabilizer:
                    g = w * (wp * rj)
                    k = rep_index.get(g)
                    if k is None:
                        continue
                    rk = tbl.reps[k]
                    mt, sign = _multi_transform(mi, rk)
                    entries[k][j] += DiffOp(self.n, {(SignedPerm.identity(self.n), mt):
                                                     sign * f.o_group(rk)},
                                            classical=self.classical)
        return OperatorMatrix(entries)


class DynOp:
    """Dynamical operator: sum of h(xi, x) * (a ⊗ w t(lam)) on C^n x C^n."""

    __slots__ = ("n", "c", "terms")

    def __init__(self, n, c, terms=None):
        self.n = n
        self.c = c
        self.terms = {}
        if terms:
            for key, f in terms.items():
                self._add_term(key, f)

    def _add_term(self, key, f):
        if _is_zero_field(f):
            return
        if key in self.terms:
            self.terms[key] = nsum([self.terms[key], f])
        else:
            self.terms[key] = f

    @staticmethod
    def one(n, c):
        e = SignedPerm.identity(n)
        return DynOp(n, c, {(e, e, (0,) * n): as_field(1.0)})

    def _check(self, other):
        if not isinstance(other, DynOp) or other.n != self.n or other.c != self.c:
            raise FlavorError("DynOp mismatch")

    def _block_map(self, a_inv, w_inv, lam):
        """Point map (xi, x) -> (a^{-1} xi, w^{-1} x + c lam) as (perm, shift)."""
        n = self.n
        img = [0] * (2 * n)
        for i in range(n):
            j, s = a_inv.basis_image(i)
            img[i] = s * (j + 1)
        for i in range(n):
            j, s = w_inv.basis_image(i)
            img[n + i] = s * (n + j + 1)
        shift = (0,) * n + tuple(self.c * v for v in lam)
        return SignedPerm(img), shift

    def __add__(self, other):
        self._check(other)
        out = DynOp(self.n, self.c, dict(self.terms))
        for key, f in other.terms.items():
            out._add_term(key, f)
        return out

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, z):
        return DynOp(self.n, self.c, {k: z * f for k, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check(other)
        out = DynOp(self.n, self.c)
        for (a1, w1, l1), h1 in self.terms.items():
            pmap, shift = self._block_map(a1.inverse(), w1.inverse(), l1)
            for (a2, w2, l2), h2 in other.terms.items():
                h2c = h2.o_affine(pmap, shift)
                w2inv = w2.inverse()
                lam = tuple(p + q for p, q in zip(w2inv.apply_vec(l1), l2))
                out._add_term((a1 * a2, w1 * w2, lam), h1 * h2c)
        return out

    def apply_field(self, F: Field) -> Field:
        parts = []
        for (a, w, lam), h in self.terms.items():
            pmap, shift = self._block_map(a.inverse(), w.inverse(), lam)
            parts.append(h * F.o_affine(pmap, shift))
        return nsum(parts)

    def to_wop(self, xi):
        """Specialize the dynamical variables; requires trivial xi-action."""
        out = WOp.zero(self.n, self.c)
        xi = tuple(xi)
        for (a, w, lam), h in self.terms.items():
            if not a.is_identity():
                raise FlavorError("cannot specialize xi: term acts on the xi block")
            out._add_term((w, lam), _prefix_field(h, xi))
        return out


class _PrefixField(Field):
    __slots__ = ("base", "prefix")

    def __init__(self, base, prefix):
        self.base = base
        self.prefix = tuple(prefix)

    def __call__(self, x):
        return self.base(self.prefix + tuple(x))

    def o_affine(self, w, v):
        return _PrefixField(Affine(self.base, _extend_perm(w, len(self.prefix)),
                                   ((0,) * len(self.prefix) + tuple(v)) if v is not None else None),
                            self.prefix)


def _extend_perm(w, offset):
    if w is None:
        return None
    img = list(range(1, offset + 1))
    for i in range(w.n):
        j, s = w.basis_image(i)
        img.append(s * (offset + j + 1))
    return SignedPerm(img)


def _prefix_field(f, prefix):
    return _PrefixField(f, prefix)


# -- module elements (oracle layer) ------------------------------------

class ModuleVector:
    """Element e' sum_j r_j f_j of M' = e'M, as its component fields."""

    __slots__ = ("tbl", "fields")

    def __init__(self, tbl, fields):
        if len(fields) != tbl.m:
            raise ValueError(f"expected {tbl.m} component fields, got {len(fields)}")
        self.tbl = tbl
        self.fields = list(fields)

    @property
    def m(self):
        return self.tbl.m

    def expand(self):
        """The underlying module element, as a dict w -> field over W."""
        return module_inject(self.tbl, self.fields, len(self.tbl.xi))

    def apply_matrix(self, mat: "OperatorMatrix"):
        return ModuleVector(self.tbl, mat.apply_vector(self.fields))


def module_inject(tbl, fields, n):
    """e' sum_j r_j f_j as a dict w -> field over the whole of W."""
    out = {}
    norm = 1.0 / len(tbl.stabilizer)
    for rj, f in zip(tbl.reps, fields):
        for wp in tbl.stabilizer:
            g = wp * rj
            out[g] = nsum([out[g], norm * f]) if g in out else norm * f
    return out


def module_apply_wop(op: WOp, melem: dict) -> dict:
    """Left action of a WOp on a module element Sum_g g (x) f_g."""
    out = {}
    for (w, lam), h in op.terms.items():
        wl = w.apply_vec(lam)
        for g, f in melem.items():
            tgt = w * g
            ginv = tgt.inverse()
            coeff = h.o_group(tgt)
            shifted = f.o_affine(None, tuple(op.c * v for v in ginv.apply_vec(wl)))
            term = coeff * shifted
            out[tgt] = nsum([out[tgt], term]) if tgt in out else term
    return out


def module_apply_diffop(op: DiffOp, melem: dict) -> dict:
    out = {}
    for (w, m), h in op.terms.items():
        for g, f in melem.items():
            tgt = w * g
            mt, sign = _multi_transform(m, tgt)
            term = (sign * h.o_group(tgt)) * field_dmulti(f, mt)
            out[tgt] = nsum([out[tgt], term]) if tgt in out else term
    return out


def module_group_act(w: SignedPerm, melem: dict) -> dict:
    return {w * g: f for g, f in melem.items()}


def module_residual(m1: dict, m2: dict, points) -> float:
    keys = set(m1) | set(m2)
    worst = 0.0
    zero = Const(0j)
    for g in keys:
        f1 = m1.get(g, zero)
        f2 = m2.get(g, zero)
        for x in points:
            a, b = value(f1(x)), value(f2(x))
            worst = max(worst, abs(a - b) / (1.0 + abs(a) + abs(b)))
    return worst


# -- matrices ----------------------------------------------------------

class OperatorMatrix:
    """Square matrix of scalar-factor operators (difference or differential)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = entries

    @property
    def m(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @staticmethod
    def diagonal(scalar_op, m):
        zero = scalar_op - scalar_op
        return OperatorMatrix([[scalar_op if i == j else zero for j in range(m)]
                               for i in range(m)])

    def __add__(self, other):
        return OperatorMatrix([[a + b for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return OperatorMatrix([[a - b for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.entries, other.entries)])

    def scale(self, z):
        return OperatorMatrix([[a.scale(z) for a in row] for row in self.entries])

    def __mul__(self, other):
        m = self.m
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = None
                for k in range(m):
                    prod = self.entries[i][k] * other.entries[k][j]
                    acc = prod if acc is None else acc + prod
                row.append(acc)
            out.append(row)
        return OperatorMatrix(out)

    def commutator(self, other):
        return self * other - other * self

    def power(self, k):
        assert k >= 1
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def apply_vector(self, fields):
        return [nsum([self.entries[i][j].apply_field(fields[j])
                      for j in range(self.m)]) for i in range(self.m)]

    def trace_op(self):
        acc = None
        for i in range(self.m):
            acc = self.entries[i][i] if acc is None else acc + self.entries[i][i]
        return acc


def check_wprime_invariance(op, tbl, probes, points, columns=None):
    """Max residual of (1 - w) op e' on probe module vectors, w in W'."""
    n = len(tbl.xi)
    apply_mod = module_apply_wop if isinstance(op, WOp) else module_apply_diffop
    worst = 0.0
    cols = range(tbl.m) if columns is None else columns
    for f in probes:
        for j in cols:
            vec = [Const(0j)] * tbl.m
            vec[j] = f
            melem = module_inject(tbl, vec, n)
            image = apply_mod(op, melem)
            for wp in tbl.stabilizer:
                if wp.is_identity():
                    continue
                moved = module_group_act(wp, image)
                worst = max(worst, module_residual(image, moved, points))
    return worst


def restrict_to_matrix(op, tbl, probes=None, points=None, inv_tol=1e-9):
    """Matrix of the action on M' = e'M, with an optional invariance gate."""
    if probes is not None and points is not None:
        res = check_wprime_invariance(op, tbl, probes, points)
        if res > inv_tol:
            raise RestrictionError(
                f"operator is not W'-invariant on M' (worst residual {res:.3e})")
    return op.restrict(tbl)


# -- residual evaluation ------------------------------------------------

def residual_pair(lhs_val, rhs_val):
    return abs(lhs_val - rhs_val) / (1.0 + abs(lhs_val) + abs(rhs_val))


def op_residual(op1, op2, probes, points) -> float:
    """Scale-free max residual of (op1 - op2) applied to probes at points."""
    worst = 0.0
    for f in probes:
        g1 = op1.apply_field(f)
        g2 = op2.apply_field(f)
        for x in points:
            worst = max(worst, residual_pair(value(g1(x)), value(g2(x))))
    return worst


def op_equal(op1, op2, probes, points, tol, name="op-equal"):
    """Named pass/fail check of operator equality on probes."""
    from .verify import CheckResult
    residual = op_residual(op1, op2, probes, points)
    return CheckResult(name, residual, tol, residual < tol)


def commutator_residual(op1, op2, probes, points) -> float:
    """Residual of [op1, op2] = 0, normalized by the product magnitudes."""
    return op_residual(op1 * op2, op2 * op1, probes, points)


def classical_op_residual(op1: WOp, op2: WOp, zpoints, beta=1.0) -> float:
    """Componentwise symbol residual of two classical (c = 0) operators."""
    ws = {w for (w, _l) in op1.terms} | {w for (w, _l) in op2.terms}
    n = op1.n
    worst = 0.0
    for z in zpoints:
        x, p = z[:n], z[n:]
        for w in ws:
            a = op1.symbol_component(w, x, p, beta)
            b = op2.symbol_component(w, x, p, beta)
            worst = max(worst, residual_pair(a, b))
    return worst


def op_is_zero_residual(op, probes, points) -> float:
    worst = 0.0
    for f in probes:
        g = op.apply_field(f)
        for x in points:
            v = value(g(x))
            worst = max(worst, abs(v) / (1.0 + abs(v)))
    return worst


def matrix_residual(m1: OperatorMatrix, m2: OperatorMatrix, probes, points) -> float:
    worst = 0.0
    for i in range(m1.m):
        for j in range(m1.m):
            worst = max(worst, op_residual(m1.entries[i][j], m2.entries[i][j],
                                           probes, points))
    return worst


def make_probes(n, count, rng, scale=1.0):
    """Exponential probes e^{<k,x>} with seeded complex-Gaussian k."""
    out = []
    for _ in range(count):
        k = tuple(complex(rng.gauss(0, scale), rng.gauss(0, scale)) for _ in range(n))
        out.append(exp_lin(k))
    return out


def symmetric_probe(probe, group):
    return symmetrized(probe, group)
