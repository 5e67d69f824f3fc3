"""Forward-mode dual scalars over the complex numbers.

A ``Dual`` carries a value and one infinitesimal component; nesting duals
inside duals yields exact higher-order and mixed directional derivatives.
Every special function in this package is written against the small generic
API here (``d_exp``, ``d_sin``, ...), so any expression built from them can
be differentiated to arbitrary depth without symbolic calculus.
"""

from __future__ import annotations

import cmath


class Dual:
    """val + eps * (infinitesimal); val/eps may themselves be Dual."""

    __slots__ = ("val", "eps")

    def __init__(self, val, eps=0j):
        self.val = val
        self.eps = eps

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val,
                        self.val * other.eps + self.eps * other.val)
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            q = self.val / other.val
            return Dual(q, (self.eps - q * other.eps) / other.val)
        return Dual(self.val / other, self.eps / other)

    def __rtruediv__(self, other):
        return Dual(other, 0j) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("Dual powers are integer only")
        if k < 0:
            return (Dual(1.0 + 0j, 0j) / self) ** (-k)
        out = 1.0 + 0j
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Dual) and self.val == other.val and self.eps == other.eps

    def __hash__(self):
        return hash((self.val, self.eps))


def value(x):
    """Strip all infinitesimal parts, returning the underlying complex."""
    while isinstance(x, Dual):
        x = x.val
    return x


def d_exp(x):
    if isinstance(x, Dual):
        e = d_exp(x.val)
        return Dual(e, e * x.eps)
    return cmath.exp(x)


def d_sin(x):
    if isinstance(x, Dual):
        return Dual(d_sin(x.val), d_cos(x.val) * x.eps)
    return cmath.sin(x)


def d_cos(x):
    if isinstance(x, Dual):
        return Dual(d_cos(x.val), -d_sin(x.val) * x.eps)
    return cmath.cos(x)


def seed(point, direction):
    """Seed one infinitesimal along ``direction`` at ``point`` (tuples)."""
    return tuple(Dual(p, d) for p, d in zip(point, direction))


def extract(x):
    """First-order infinitesimal part of a (possibly plain) scalar."""
    return x.eps if isinstance(x, Dual) else 0j


def directional(f, point, directions):
    """Mixed directional derivative of ``f`` at ``point``.

    ``directions`` is a sequence of direction vectors; each adds one level
    of dual nesting, so the result is the coefficient of eps_1*...*eps_k.
    """
    if not directions:
        return f(point)
    d, rest = directions[0], directions[1:]
    pt = seed(point, d)
    return extract(directional(f, pt, rest))


def gradient(f, point):
    """All first partials of ``f`` at ``point`` (n separate seeded passes)."""
    n = len(point)
    out = []
    for k in range(n):
        e = tuple(1.0 if i == k else 0.0 for i in range(n))
        out.append(extract(f(seed(point, e))))
    return out


def gradient_vec(f, point):
    """All first partials in one pass, using an array-valued eps."""
    import numpy as np
    n = len(point)
    basis = np.eye(n, dtype=complex)
    pt = tuple(Dual(p, basis[k]) for k, p in enumerate(point))
    out = f(pt)
    if isinstance(out, Dual):
        e = out.eps
        if isinstance(e, np.ndarray):
            return e
        return np.full(n, 0j) + e
    return np.zeros(n, dtype=complex)
