"""Truncated power series in ``r`` over pluggable coefficient rings.

A :class:`TruncSeries` stores ``r**offset * (c[0] + c[1] r + ... + c[N] r**N)``
known modulo ``r**(offset + N + 1)``.  Three coefficient rings are supported:

* ``Ring.QQ``   -- exact rationals (:class:`fractions.Fraction`)
* ``Ring.QLAM`` -- polynomials in the eigenvalue symbol (:class:`LamPoly`)
* ``Ring.F64``  -- binary64 floats

Orders combine by taking the minimum absolute precision, so mixing series of
different orders truncates silently instead of raising.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction

from .lampoly import LamPoly, as_fraction

__all__ = [
    "Ring",
    "RingMismatch",
    "SeriesError",
    "TruncSeries",
    "series",
    "monomial",
    "one",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 40


class Ring(str, enum.Enum):
    QQ = "RationalExact"
    QLAM = "RationalPolyLambda"
    F64 = "Float64"

    def zero(self):
        if self is Ring.QQ:
            return Fraction(0)
        if self is Ring.QLAM:
            return LamPoly()
        return 0.0

    def one(self):
        if self is Ring.QQ:
            return Fraction(1)
        if self is Ring.QLAM:
            return LamPoly((1,))
        return 1.0

    def coerce(self, x):
        if self is Ring.QQ:
            if isinstance(x, LamPoly):
                if not x.is_constant():
                    raise TypeError(f"{x} is not a rational constant")
                return x.constant()
            return as_fraction(x)
        if self is Ring.QLAM:
            if isinstance(x, LamPoly):
                return x
            return LamPoly((as_fraction(x),))
        if isinstance(x, LamPoly):
            if not x.is_constant():
                raise TypeError(f"{x} has no float value")
            return float(x.constant())
        return float(x)

    def is_zero(self, x) -> bool:
        return x == 0


class SeriesError(ValueError):
    """Violated precondition of a series operation."""


class RingMismatch(SeriesError):
    pass


def _ring_of_scalar(x):
    if isinstance(x, LamPoly):
        return Ring.QLAM
    if isinstance(x, float):
        return Ring.F64
    return Ring.QQ


@dataclass(frozen=True)
class TruncSeries:
    coeffs: tuple
    ring: Ring = Ring.QQ
    offset: int = 0

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise SeriesError("a truncated series needs at least one coefficient")

    # basic properties ----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def precision(self) -> int:
        """Exponent of the first unknown power of r."""
        return self.offset + len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, power: int):
        """Coefficient of ``r**power`` (absolute exponent)."""
        i = power - self.offset
        if i < 0:
            return self.ring.zero()
        if i >= len(self.coeffs):
            raise IndexError(f"coefficient of r^{power} is beyond the truncation order")
        return self.coeffs[i]

    def coefficient(self, power: int):
        return self[power]

    def valuation(self):
        """Exponent of the first nonzero coefficient, or None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return self.offset + i
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_even(self) -> bool:
        return all(c == 0 for i, c in enumerate(self.coeffs) if (i + self.offset) % 2)

    def is_odd(self) -> bool:
        return all(c == 0 for i, c in enumerate(self.coeffs) if (i + self.offset) % 2 == 0)

    # construction helpers ------------------------------------------------

    def _new(self, coeffs, offset=None):
        return TruncSeries(tuple(coeffs), self.ring, self.offset if offset is None else offset)

    def truncate(self, order: int) -> TruncSeries:
        if order < 0:
            raise SeriesError("truncation order must be non-negative")
        if order > self.order:
            raise SeriesError(f"cannot raise order {self.order} to {order}")
        return self._new(self.coeffs[: order + 1])

    def normalized(self) -> TruncSeries:
        """Strip leading zero coefficients into the offset (keeps the precision)."""
        i = 0
        while i < len(self.coeffs) - 1 and self.coeffs[i] == 0:
            i += 1
        if i == 0:
            return self
        return self._new(self.coeffs[i:], self.offset + i)

    def shift(self, k: int) -> TruncSeries:
        """Multiply by ``r**k``."""
        return self._new(self.coeffs, self.offset + k)

    def with_offset(self, offset: int) -> TruncSeries:
        """Re-express with a given offset; lowering pads zeros, raising needs zero coefficients."""
        d = offset - self.offset
        if d == 0:
            return self
        if d < 0:
            return self._new((self.ring.zero(),) * (-d) + self.coeffs, offset)
        if d >= len(self.coeffs):
            raise SeriesError("offset change would leave no known coefficients")
        if any(c != 0 for c in self.coeffs[:d]):
            raise SeriesError(f"series has nonzero terms below r^{offset}")
        return self._new(self.coeffs[d:], offset)

    def to_ring(self, ring: Ring) -> TruncSeries:
        ring = Ring(ring)
        if ring is self.ring:
            return self
        return TruncSeries(tuple(ring.coerce(c) for c in self.coeffs), ring, self.offset)

    def to_float(self) -> TruncSeries:
        return self.to_ring(Ring.F64)

    def map(self, fn, ring: Ring | None = None) -> TruncSeries:
        return TruncSeries(tuple(fn(c) for c in self.coeffs), ring or self.ring, self.offset)

    # arithmetic ----------------------------------------------------------

    def _check(self, other: TruncSeries):
        if other.ring is not self.ring:
            raise RingMismatch(f"ring mismatch: {self.ring.value} vs {other.ring.value}")

    def _scalar(self, x):
        if _ring_of_scalar(x) is Ring.QLAM and self.ring is not Ring.QLAM:
            raise RingMismatch("lambda-polynomial scalar on a non-lambda series")
        if self.ring is Ring.QLAM and not isinstance(x, LamPoly):
            return as_fraction(x)
        return self.ring.coerce(x)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            try:
                x = self._scalar(other)
            except TypeError:
                return NotImplemented
            prec = self.precision
            if prec <= 0:
                return self
            other = TruncSeries((x,) + (self.ring.zero(),) * (prec - 1), self.ring, 0)
        self._check(other)
        lo = min(self.offset, other.offset)
        hi = min(self.precision, other.precision)
        if hi <= lo:
            raise SeriesError("sum has no known coefficients")
        z = self.ring.zero()
        out = [z] * (hi - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                p = s.offset + i
                if p >= hi:
                    break
                out[p - lo] = out[p - lo] + c
        return TruncSeries(tuple(out), self.ring, lo)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, TruncSeries):
            return self + (-other)
        try:
            return self + (-self._scalar(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            try:
                x = self._scalar(other)
            except TypeError:
                return NotImplemented
            return self._new(c * x for c in self.coeffs)
        self._check(other)
        n = min(self.order, other.order) + 1
        a, b = self.coeffs, other.coeffs
        z = self.ring.zero()
        out = []
        for k in range(n):
            acc = z
            for i in range(k + 1):
                ai = a[i]
                if ai == 0:
                    continue
                bj = b[k - i]
                if bj == 0:
                    continue
                acc = acc + ai * bj
            out.append(acc)
        return TruncSeries(tuple(out), self.ring, self.offset + other.offset)

    __rmul__ = __mul__

    def inverse(self) -> TruncSeries:
        """Multiplicative inverse; the offset is negated."""
        s = self.normalized()
        c0 = s.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("division by the zero series")
        if isinstance(c0, LamPoly) and not c0.is_constant():
            raise SeriesError(f"leading coefficient {c0} is not invertible")
        inv0 = self.ring.one() / c0
        out = [inv0]
        a = s.coeffs
        for k in range(1, len(a)):
            acc = self.ring.zero()
            for i in range(1, k + 1):
                if a[i] != 0:
                    acc = acc + a[i] * out[k - i]
            out.append(-acc * inv0)
        return TruncSeries(tuple(out), self.ring, -s.offset)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return self * other.inverse()
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            if self.ring is Ring.F64:
                return self._new(c / other for c in self.coeffs)
            return self._new(c / Fraction(other) for c in self.coeffs)
        try:
            x = self._scalar(other)
        except TypeError:
            return NotImplemented
        if x == 0:
            raise ZeroDivisionError("division by zero")
        return self._new(c / x for c in self.coeffs)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = TruncSeries((self.ring.one(),) + (self.ring.zero(),) * self.order, self.ring, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # calculus -------------------------------------------------------------

    def differentiate(self) -> TruncSeries:
        """Term-wise derivative; the precision drops by one."""
        e = self.offset
        out = [c * (e + i) for i, c in enumerate(self.coeffs)]
        if e != 0:
            return self._new(out, e - 1)
        if len(out) == 1:
            return self._new((self.ring.zero(),), 0)
        return self._new(out[1:], 0)

    def integrate(self) -> TruncSeries:
        """Antiderivative with zero constant term."""
        e = self.offset
        out = []
        for i, c in enumerate(self.coeffs):
            p = e + i
            if p == -1:
                if c != 0:
                    raise SeriesError("cannot integrate an r^-1 term")
                out.append(self.ring.zero())
            elif self.ring is Ring.F64:
                out.append(c / (p + 1))
            else:
                out.append(c / Fraction(p + 1))
        return self._new(out, e + 1)

    def exp(self) -> TruncSeries:
        """Formal exponential of a series with zero constant term (cost quadratic in order)."""
        a = self.with_offset(0).coeffs
        if a[0] != 0:
            raise SeriesError("exp requires a zero constant term")
        f = [self.ring.one()]
        for n in range(1, len(a)):
            acc = self.ring.zero()
            for k in range(1, n + 1):
                if a[k] != 0:
                    acc = acc + a[k] * f[n - k] * k
            f.append(acc / n if self.ring is Ring.F64 else acc / Fraction(n))
        return TruncSeries(tuple(f), self.ring, 0)

    def log(self) -> TruncSeries:
        """Formal logarithm of a series with constant term 1 and offset 0."""
        if self.offset != 0:
            raise SeriesError("log requires offset 0")
        a = self.coeffs
        if a[0] != 1:
            raise SeriesError("log requires constant term 1")
        g = [self.ring.zero()]
        for n in range(1, len(a)):
            acc = a[n] * n
            for k in range(1, n):
                if g[k] != 0 and a[n - k] != 0:
                    acc = acc - g[k] * a[n - k] * k
            g.append(acc / n if self.ring is Ring.F64 else acc / Fraction(n))
        return TruncSeries(tuple(g), self.ring, 0)

    def pow_rational(self, q) -> TruncSeries:
        """``self**q`` for rational ``q`` via ``exp(q log self)``."""
        if self.offset != 0 or self.coeffs[0] != 1:
            raise SeriesError("rational powers need constant term 1 and offset 0")
        if self.ring is Ring.F64:
            return (self.log() * float(q)).exp()
        return (self.log() * as_fraction(q)).exp()

    def compose(self, inner: TruncSeries) -> TruncSeries:
        """``self(inner(r))`` by Horner's rule; ``inner`` must vanish at 0."""
        self._check(inner)
        if inner.offset < 0 or (inner.offset == 0 and inner.coeffs[0] != 0):
            raise SeriesError("inner series must have zero constant term")
        if self.offset < 0:
            raise SeriesError("outer series must be a power series")
        outer = self.with_offset(0)
        inner0 = inner.with_offset(0)
        n = min(outer.order, inner0.order)
        inner0 = inner0.truncate(n)
        z = self.ring.zero()
        acc = TruncSeries((z,) * (n + 1), self.ring, 0)
        for c in reversed(outer.coeffs[: n + 1]):
            acc = acc * inner0
            acc = TruncSeries((acc.coeffs[0] + c,) + acc.coeffs[1:], self.ring, 0)
        return acc

    def __call__(self, x):
        """Evaluate at a number (floats for float ``x``); Laurent offsets applied as powers."""
        if isinstance(x, TruncSeries):
            return self.compose(x)
        acc = 0
        if isinstance(x, float):
            cs = [float(c) for c in self.coeffs]
            acc = 0.0
        else:
            cs = self.coeffs
        for c in reversed(cs):
            acc = acc * x + c
        return acc * x**self.offset if self.offset else acc

    def revert(self) -> TruncSeries:
        """Compositional inverse by Newton iteration: ``compose(self, g) == r``."""
        s = self.with_offset(0)
        if s.coeffs[0] != 0:
            raise SeriesError("reversion needs a zero constant term")
        if len(s.coeffs) < 2 or s.coeffs[1] == 0:
            raise SeriesError("reversion needs a nonzero linear coefficient")
        c1 = s.coeffs[1]
        if isinstance(c1, LamPoly) and not c1.is_constant():
            raise SeriesError(f"linear coefficient {c1} is not invertible")
        n = s.order
        ring = self.ring
        z, o = ring.zero(), ring.one()
        ident = TruncSeries((z, o) + (z,) * (n - 1), ring, 0)
        g = TruncSeries((z, o / c1) + (z,) * (n - 1), ring, 0)
        ds = s.differentiate()
        for _ in range(n.bit_length() + 2):
            resid = (s.compose(g) - ident).normalized()
            if resid.is_zero():
                break
            step = resid * ds.compose(g.truncate(ds.order)).inverse()
            g = (g - step).with_offset(0).truncate(n)
        return g

    def specialize_lambda(self, v) -> TruncSeries:
        """Evaluate every lambda-polynomial coefficient at ``lam = v``."""
        if self.ring is not Ring.QLAM:
            raise RingMismatch("specialize_lambda needs a RationalPolyLambda series")
        v = as_fraction(v)
        return TruncSeries(tuple(c(v) for c in self.coeffs), Ring.QQ, self.offset)

    def lift_lambda(self) -> TruncSeries:
        """Embed a rational series into the lambda-polynomial ring."""
        return self.to_ring(Ring.QLAM)

    # comparison and serialization -------------------------------------------

    def equals(self, other: TruncSeries, order: int | None = None) -> bool:
        """Coefficient equality up to the common precision (or an explicit absolute order)."""
        diff = self - other
        if order is not None:
            return all(diff[p] == 0 for p in range(diff.offset, min(order + 1, diff.precision)))
        return diff.is_zero()

    def to_json(self) -> dict:
        if self.ring is Ring.QQ:
            cs = [str(c) for c in self.coeffs]
        elif self.ring is Ring.QLAM:
            cs = [c.to_json() for c in self.coeffs]
        else:
            cs = [float(c) for c in self.coeffs]
        return {"ring": self.ring.value, "offset": self.offset, "order": self.order, "coeffs": cs}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> TruncSeries:
        if isinstance(data, str):
            data = json.loads(data)
        ring = Ring(data.get("ring", Ring.QQ.value))
        raw = data["coeffs"]
        if ring is Ring.QLAM:
            cs = tuple(LamPoly.from_json(c) for c in raw)
        else:
            cs = tuple(ring.coerce(c) for c in raw)
        s = cls(cs, ring, int(data.get("offset", 0)))
        if "order" in data and int(data["order"]) != s.order:
            raise SeriesError(f"order field {data['order']} disagrees with {len(cs)} coefficients")
        return s

    def pretty(self, var: str = "r") -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            p = self.offset + i
            mono = "" if p == 0 else (var if p == 1 else f"{var}^{p}")
            cs = str(c)
            if isinstance(c, LamPoly) and len(c.c) > 1:
                cs = f"({cs})"
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def series(coeffs, ring: Ring | str = Ring.QQ, offset: int = 0, order: int | None = None) -> TruncSeries:
    """Build a series, coercing coefficients into ``ring`` and zero-padding to ``order``."""
    ring = Ring(ring)
    cs = [ring.coerce(c) for c in coeffs]
    if order is not None:
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        cs += [ring.zero()] * (order + 1 - len(cs))
    return TruncSeries(tuple(cs), ring, offset)


def monomial(power: int, order: int, ring: Ring | str = Ring.QQ, coeff=1) -> TruncSeries:
    """``coeff * r**power`` known modulo ``r**(order+1)``."""
    ring = Ring(ring)
    if power > order:
        return series([], ring, order=order)
    return series([0] * power + [coeff], ring, order=order)


def one(order: int, ring: Ring | str = Ring.QQ) -> TruncSeries:
    return monomial(0, order, ring)
