"""Scalar fields on C^n with exact directional derivatives.

A field is a small expression tree whose leaves are Dual-safe callables;
evaluating with dual-seeded points gives exact derivatives of any order,
so operator calculus below never needs symbolic differentiation.  The
workhorse leaf is ``LinArg`` (a univariate function of an affine-linear
form), which is closed under composition with x -> w x + v: exactly the
substitutions generated by group-algebra arithmetic.
"""

from __future__ import annotations

from .dual import d_exp, directional


class PoleError(ArithmeticError):
    """Evaluation too close to a pole; the message names the factor."""


class Field:
    __slots__ = ()

    def __call__(self, x):
        raise NotImplementedError

    def __add__(self, other):
        return nsum([self, as_field(other)])

    def __radd__(self, other):
        return nsum([as_field(other), self])

    def __sub__(self, other):
        return nsum([self, -as_field(other)])

    def __rsub__(self, other):
        return nsum([as_field(other), -self])

    def __neg__(self):
        return Scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(other, self)
        return Prod(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(other, self)
        return Prod(as_field(other), self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(1.0 / other, self)
        return Quot(self, other)

    def __rtruediv__(self, other):
        return Quot(as_field(other), self)

    def o_affine(self, w, v):
        """The field x -> f(w x + v); w is a SignedPerm or None."""
        if (w is None or w.is_identity()) and (v is None or not any(v)):
            return self
        return Affine(self, w, v)

    def o_group(self, w):
        return self.o_affine(w, None)

    def deriv(self, direction):
        """Directional derivative field along the vector ``direction``."""
        return Deriv(self, (tuple(direction),))


def as_field(x):
    if isinstance(x, Field):
        return x
    return Const(complex(x))


class Const(Field):
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    def __call__(self, x):
        return self.c

    def o_affine(self, w, v):
        return self


ZERO = Const(0j)
ONE = Const(1.0 + 0j)


class Coord(Field):
    __slots__ = ("i",)

    def __init__(self, i):
        self.i = i

    def __call__(self, x):
        return x[self.i]

    def o_affine(self, w, v):
        k = [0.0] * (self.i + 1)
        k[self.i] = 1.0
        return LinArg(None, tuple(k), 0j).o_affine(w, v)


class LinArg(Field):
    """fn(<k, x> + c0); fn=None means the linear form itself."""

    __slots__ = ("fn", "k", "c0")

    def __init__(self, fn, k, c0=0j):
        self.fn = fn
        self.k = tuple(k)
        self.c0 = c0

    def __call__(self, x):
        z = self.c0
        for ki, xi in zip(self.k, x):
            if ki != 0:
                z = z + ki * xi
        return z if self.fn is None else self.fn(z)

    def o_affine(self, w, v):
        k = self.k
        if w is not None and not w.is_identity():
            # <k, w x> = <w^{-1} k, x>
            k = w.inverse().apply_vec(k + (0,) * (w.n - len(k)))
        c0 = self.c0
        if v is not None:
            for ki, vi in zip(self.k, v):
                if ki != 0:
                    c0 = c0 + ki * vi
        return LinArg(self.fn, k, c0)


def exp_lin(k, c0=0j):
    """e^{<k,x> + c0}."""
    return LinArg(d_exp, k, c0)


def inv_form(k, c0=0j, guard=1e-3, name="linear form"):
    """1/(<k,x> + c0) with a pole guard on the denominator."""
    from .dual import value

    def fn(z):
        if abs(value(z)) < guard:
            raise PoleError(f"|{name}| = {abs(value(z)):.2e} below pole guard {guard}")
        return 1.0 / z
    return LinArg(fn, k, c0)



def linear_form(k, c0=0j):
    return LinArg(None, k, c0)


def coord(i, n=None):
    if n is None:
        return Coord(i)
    k = [0.0] * n
    k[i] = 1.0
    return LinArg(None, tuple(k), 0j)


class BiArg(Field):
    """fn(<ka,x> + ca, <kb,x> + cb) for a Dual-safe two-argument kernel.

    Used for dynamical R-matrix coefficients, where both the spectral
    argument and the spatial argument are affine-linear in the combined
    (xi, x) coordinates.
    """

    __slots__ = ("fn", "ka", "ca", "kb", "cb")

    def __init__(self, fn, ka, kb, ca=0j, cb=0j):
        self.fn = fn
        self.ka = tuple(ka)
        self.kb = tuple(kb)
        self.ca = ca
        self.cb = cb

    def __call__(self, x):
        za = self.ca
        for ki, xi in zip(self.ka, x):
            if ki != 0:
                za = za + ki * xi
        zb = self.cb
        for ki, xi in zip(self.kb, x):
            if ki != 0:
                zb = zb + ki * xi
        return self.fn(za, zb)

    def o_affine(self, w, v):
        ka, kb = self.ka, self.kb
        ca, cb = self.ca, self.cb
        if v is not None:
            for ki, vi in zip(ka, v):
                if ki != 0:
                    ca = ca + ki * vi
            for ki, vi in zip(kb, v):
                if ki != 0:
                    cb = cb + ki * vi
        if w is not None and not w.is_identity():
            winv = w.inverse()
            ka = winv.apply_vec(ka + (0,) * (w.n - len(ka)))
            kb = winv.apply_vec(kb + (0,) * (w.n - len(kb)))
        return BiArg(self.fn, ka, kb, ca, cb)


class Scale(Field):
    __slots__ = ("c", "f")

    def __init__(self, c, f):
        if isinstance(f, Scale):
            c, f = c * f.c, f.f
        self.c = c
        self.f = f

    def __call__(self, x):
        return self.c * self.f(x)

    def o_affine(self, w, v):
        return Scale(self.c, self.f.o_affine(w, v))


class NSum(Field):
    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = parts

    def __call__(self, x):
        out = 0j
        for p in self.parts:
            out = out + p(x)
        return out

    def o_affine(self, w, v):
        return NSum([p.o_affine(w, v) for p in self.parts])


def nsum(parts):
    flat = []
    const = 0j
    for p in parts:
        if isinstance(p, NSum):
            flat.extend(p.parts)
        elif isinstance(p, Const):
            const += p.c
        else:
            flat.append(p)
    if const != 0:
        flat.append(Const(const))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return NSum(flat)


class Prod(Field):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __call__(self, x):
        return self.a(x) * self.b(x)

    def o_affine(self, w, v):
        return Prod(self.a.o_affine(w, v), self.b.o_affine(w, v))


class Quot(Field):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __call__(self, x):
        return self.a(x) / self.b(x)

    def o_affine(self, w, v):
        return Quot(self.a.o_affine(w, v), self.b.o_affine(w, v))


class Affine(Field):
    __slots__ = ("base", "w", "v")

    def __init__(self, base, w, v):
        if isinstance(base, Affine):
            # f((w' y + v') with y = w x + v) -> combine maps
            w2, v2 = base.w, base.v
            if v is not None:
                inner = w2.apply_vec(v) if w2 is not None else tuple(v)
                v2 = tuple(a + b for a, b in zip(inner, v2)) if v2 is not None else inner
            w2 = w2 if w is None else (w2 * w if w2 is not None else w)
            base, w, v = base.base, w2, v2
        self.base = base
        self.w = w
        self.v = v

    def __call__(self, x):
        if self.w is not None:
            x = self.w.apply_vec(x)
        if self.v is not None:
            x = tuple(a + b for a, b in zip(x, self.v))
        return self.base(x)


class Deriv(Field):
    __slots__ = ("base", "dirs")

    def __init__(self, base, dirs):
        if isinstance(base, Deriv):
            dirs = base.dirs + tuple(dirs)
            base = base.base
        self.base = base
        self.dirs = tuple(dirs)

    def __call__(self, x):
        return directional(self.base, tuple(x), self.dirs)

    def deriv(self, direction):
        return Deriv(self.base, self.dirs + (tuple(direction),))


class FuncField(Field):
    """Arbitrary Dual-safe callable on points."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, x):
        return self.fn(x)


def symmetrized(field, group_elements):
    """Average of f over x -> w^{-1} x, i.e. the W-invariant projection."""
    parts = [field.o_group(w.inverse()) for w in group_elements]
    return Scale(1.0 / len(parts), nsum(parts))
