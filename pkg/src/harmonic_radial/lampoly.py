"""Univariate polynomials in the eigenvalue symbol with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["LamPoly", "LAM", "as_fraction"]


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class LamPoly:
    """Dense polynomial ``c[0] + c[1]*lam + ...``.

    Coefficients are Fractions, stored by degree with no trailing zeros, so
    the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c: list) -> LamPoly:
        while c and c[-1] == 0:
            c.pop()
        p = object.__new__(cls)
        p.c = tuple(c)
        return p

    @classmethod
    def const(cls, x) -> LamPoly:
        return cls((x,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, d: int) -> Fraction:
        return self.c[d] if 0 <= d < len(self.c) else Fraction(0)

    def constant(self) -> Fraction:
        return self.coeff(0)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, LamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LamPoly._raw([Fraction(other)])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return LamPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LamPoly._raw([-x for x in self.c])

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LamPoly._raw([])
            return LamPoly._raw([x * other for x in self.c])
        if not isinstance(other, LamPoly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return LamPoly._raw([])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return LamPoly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a lambda-polynomial by zero")
            return LamPoly._raw([x / other for x in self.c])
        if isinstance(other, LamPoly) and other.is_constant():
            if other.is_zero():
                raise ZeroDivisionError("division by the zero lambda-polynomial")
            return self / other.c[0]
        if isinstance(other, LamPoly):
            q, rem = self.divmod(other)
            if not rem.is_zero():
                raise ArithmeticError(f"{self} is not divisible by {other}")
            return q
        return NotImplemented

    def __rtruediv__(self, other):
        if self.is_constant() and isinstance(other, (int, Fraction)):
            return LamPoly._raw([Fraction(other)]) / self
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = LamPoly._raw([Fraction(1)])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: LamPoly):
        """Polynomial long division, returning ``(quotient, remainder)``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero lambda-polynomial")
        rem = list(self.c)
        dd = other.degree
        lead = other.c[-1]
        q = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1 - dd, -1, -1):
            t = rem[k + dd] / lead
            q[k] = t
            if t:
                for i, y in enumerate(other.c):
                    rem[k + i] -= t * y
        return LamPoly._raw(q), LamPoly._raw(rem[:dd] if dd > 0 else [])

    def div_lambda(self) -> LamPoly:
        """Exact division by the indeterminate; raises if the constant term is nonzero."""
        if self.c and self.c[0] != 0:
            raise ArithmeticError(f"{self} is not divisible by lambda")
        return LamPoly._raw(list(self.c[1:]))

    def __call__(self, v):
        """Horner evaluation at ``v`` (exact for rational ``v``)."""
        acc = 0 * v if not isinstance(v, (int, Fraction)) else Fraction(0)
        for x in reversed(self.c):
            acc = acc * v + x
        return acc

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.constant())
        return hash(self.c)

    def __bool__(self):
        return bool(self.c)

    # presentation ---------------------------------------------------------

    def to_json(self) -> list[str]:
        return [str(x) for x in self.c]

    @classmethod
    def from_json(cls, data) -> LamPoly:
        return cls(as_fraction(x) for x in data)

    def __repr__(self):
        return f"LamPoly({list(map(str, self.c))})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for d in range(len(self.c) - 1, -1, -1):
            x = self.c[d]
            if x == 0:
                continue
            sign = "-" if x < 0 else "+"
            a = abs(x)
            mono = "" if d == 0 else ("λ" if d == 1 else f"λ^{d}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out


LAM = LamPoly((0, 1))
