"""Exact arithmetic in the ring generated by square roots of integers.

Ladder normalizations produce scalars of the form sum_s c_s * sqrt(s) with
rational c_s and squarefree s.  Sums and products of these stay in the same
ring, so every operator identity downstream can be checked with zero
floating-point tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def square_free_split(n: int) -> tuple[int, int]:
    """Write n = g*g*s with s squarefree and return (g, s)."""
    if n < 1:
        raise ValueError("square_free_split needs a positive integer, got %r" % (n,))
    g, s = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            g *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    s *= m
    return g, s


class Rad:
    """A finite sum of c * sqrt(s) terms, keyed by squarefree s."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms: dict[int, Fraction] = {}
        if terms:
            for s, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[s] = c

    @classmethod
    def rational(cls, q) -> "Rad":
        return cls({1: Fraction(q)})

    @classmethod
    def sqrt(cls, q) -> "Rad":
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("cannot take a real square root of %s" % q)
        if q == 0:
            return cls()
        g, s = square_free_split(q.numerator * q.denominator)
        return cls({s: Fraction(g, q.denominator)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(s == 1 for s in self.terms)

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("%r is not rational" % self)
        return self.terms[1]

    def value(self) -> float:
        return sum(float(c) * s ** 0.5 for s, c in self.terms.items())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> "Rad":
        return Rad({s: -c for s, c in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, Rad):
            return other
        if isinstance(other, (int, Fraction)):
            return Rad.rational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, Fraction(0)) + c
        return Rad(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Rad()
            return Rad({s: c * other for s, c in self.terms.items()})
        if not isinstance(other, Rad):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for s, c in self.terms.items():
            for t, d in other.terms.items():
                g = gcd(s, t)
                key = (s // g) * (t // g)
                out[key] = out.get(key, Fraction(0)) + c * d * g
        return Rad(out)

    __rmul__ = __mul__

    def inverse(self) -> "Rad":
        """Exact inverse; implemented for single-term elements c*sqrt(s)."""
        if len(self.terms) != 1:
            raise NotImplementedError("inverse only for single-term radicals, got %r" % self)
        (s, c), = self.terms.items()
        return Rad({s: Fraction(1) / (c * s)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError
            return Rad({s: c / other for s, c in self.terms.items()})
        if isinstance(other, Rad):
            return self * other.inverse()
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "Rad(0)"
        parts = []
        for s in sorted(self.terms):
            c = self.terms[s]
            parts.append(str(c) if s == 1 else "%s*sqrt(%d)" % (c, s))
        return "Rad(%s)" % " + ".join(parts)


class CRad:
    """Complex scalar with exact Rad real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=None, im=None):
        self.re = re if isinstance(re, Rad) else Rad.rational(re or 0)
        self.im = im if isinstance(im, Rad) else Rad.rational(im or 0)

    @classmethod
    def of(cls, x) -> "CRad":
        """Coerce an exact scalar: int, Fraction, Rad, CRad, or a complex/float
        whose components are integer-valued.  Inexact floats are rejected."""
        if isinstance(x, CRad):
            return x
        if isinstance(x, Rad):
            return cls(x, Rad())
        if isinstance(x, (int, Fraction)):
            return cls(Rad.rational(x), Rad())
        if isinstance(x, complex):
            if x.real.is_integer() and x.imag.is_integer():
                return cls(Rad.rational(int(x.real)), Rad.rational(int(x.imag)))
            raise TypeError("exact mode needs rational scalars, got %r" % (x,))
        if isinstance(x, float):
            if x.is_integer():
                return cls(Rad.rational(int(x)), Rad())
            raise TypeError("exact mode needs rational scalars, got %r" % (x,))
        raise TypeError("cannot coerce %r to an exact scalar" % (x,))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def value(self) -> complex:
        return complex(self.re.value(), self.im.value())

    def conjugate(self) -> "CRad":
        return CRad(self.re, -self.im)

    def __neg__(self) -> "CRad":
        return CRad(-self.re, -self.im)

    def __add__(self, other):
        try:
            other = CRad.of(other)
        except TypeError:
            return NotImplemented
        return CRad(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = CRad.of(other)
        except TypeError:
            return NotImplemented
        return CRad(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = CRad.of(other)
        except TypeError:
            return NotImplemented
        return CRad(self.re * other.re - self.im * other.im,
                    self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = CRad.of(other)
        except TypeError:
            return NotImplemented
        if other.im.is_zero():
            inv = other.re.inverse()
            return CRad(self.re * inv, self.im * inv)
        # 1/(a+bi) = (a-bi)/(a^2+b^2); only needed when the modulus is a
        # single-term radical, which covers every scalar this package produces.
        norm = other.re * other.re + other.im * other.im
        inv = norm.inverse()
        num = self * other.conjugate()
        return CRad(num.re * inv, num.im * inv)

    def __eq__(self, other) -> bool:
        try:
            other = CRad.of(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return "CRad(%r, %r)" % (self.re, self.im)
