"""Frobenius-series solutions of the radial eigenvalue equation.

The operator is

    P psi = psi'' + ((m-1)/r + xi(r)) psi' + lam psi,

with ``xi`` the regular (odd, vanishing at 0) part of the drift.  The
indicial roots at ``r = 0`` are ``0`` and ``2 - m``.  The regular solution is
an even power series with ``psi(0) = 1``; the singular one is

    r**(2-m) sigma(r) + (C / (m-2)) * phi0(r) * log(r)        (m >= 3)
    sigma(r) + phi0(r) * log(r)                                (m == 2)

where ``C`` is the log constant: the obstruction met by the recursion at the
resonant index ``j = m - 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .lampoly import LAM, LamPoly, as_fraction
from .series import DEFAULT_ORDER, Ring, SeriesError, TruncSeries, one
from .spaces import ModelSpace, xi_series

__all__ = [
    "RadialOperator",
    "LogSeries",
    "SingularSolution",
    "EigenBasis",
    "KappaCertificate",
    "coerce_lambda",
    "solve_regular",
    "log_source",
    "solve_singular",
    "log_constant",
    "eigenbasis",
    "apply_operator",
    "kappa_certificate",
]

NORMALIZATION_NOTE = "coefficient of r^0 in r^(m-2)*singular part (the resonant index) fixed to {value}"


def coerce_lambda(lam):
    """Map user input to a ring element: ``"symbolic"``/LamPoly stay symbolic, numbers become exact."""
    if isinstance(lam, LamPoly):
        return lam
    if isinstance(lam, str) and lam.strip().lower() in ("symbolic", "lambda", "λ", "lam"):
        return LAM
    if isinstance(lam, float):
        return lam
    return as_fraction(lam)


@dataclass(frozen=True)
class RadialOperator:
    m: int
    lam: object
    xi: TruncSeries

    def __post_init__(self):
        if self.m < 2:
            raise SeriesError("dimension must be at least 2")
        object.__setattr__(self, "lam", coerce_lambda(self.lam))
        if self.xi.offset < 0 or (self.xi.offset == 0 and self.xi.coeffs[0] != 0):
            raise SeriesError("the regular drift must vanish at r = 0")
        if not self.xi.is_odd():
            raise SeriesError("the regular drift must be odd (density harmonic at the centre)")
        if isinstance(self.lam, float) and self.xi.ring is not Ring.F64:
            object.__setattr__(self, "xi", self.xi.to_float())

    @classmethod
    def for_space(cls, sp: ModelSpace, lam, N: int = DEFAULT_ORDER) -> RadialOperator:
        return cls(sp.m, lam, xi_series(sp, N))

    @property
    def ring(self) -> Ring:
        if isinstance(self.lam, LamPoly):
            return Ring.QLAM
        if isinstance(self.lam, float):
            return Ring.F64
        return self.xi.ring

    @property
    def symbolic(self) -> bool:
        return isinstance(self.lam, LamPoly)

    def with_lambda(self, lam) -> RadialOperator:
        return replace(self, lam=lam)

    def xi_coeffs(self, n: int) -> list:
        """``xi_0 .. xi_{n-1}`` (absolute powers), raising if the drift is too short."""
        xi = self.xi.with_offset(0)
        if xi.order < n - 1:
            raise SeriesError(f"drift known to order {xi.order}, need {n - 1}")
        return list(xi.coeffs[:n])

    def lifted_xi(self) -> TruncSeries:
        return self.xi.with_offset(0).to_ring(self.ring)


@dataclass(frozen=True)
class LogSeries:
    """``head(r) + tail(r) * log(r)``; ``head`` may carry a negative offset."""

    head: TruncSeries
    tail: TruncSeries

    @property
    def ring(self) -> Ring:
        return self.head.ring

    def differentiate(self) -> LogSeries:
        # d/dr (B log r) = B/r + B' log r
        return LogSeries(self.head.differentiate() + self.tail.shift(-1), self.tail.differentiate())

    def specialize_lambda(self, v) -> LogSeries:
        return LogSeries(self.head.specialize_lambda(v), self.tail.specialize_lambda(v))

    def has_log(self) -> bool:
        return not self.tail.is_zero()

    def value(self, r: float) -> float:
        """Float value; the power, series and log factors are evaluated separately."""
        return float(self.head(float(r))) + float(self.tail(float(r))) * math.log(r)

    def derivative_value(self, r: float) -> float:
        return self.differentiate().value(r)

    def to_json(self) -> dict:
        return {"head": self.head.to_json(), "log": self.tail.to_json()}


@dataclass(frozen=True)
class SingularSolution:
    m: int
    sigma: TruncSeries
    logC: object
    log_coefficient: object
    phi0: TruncSeries
    resonant_value: object = 0

    @property
    def normalization(self) -> str:
        return NORMALIZATION_NOTE.format(value=self.resonant_value)

    def assembled(self) -> LogSeries:
        return LogSeries(self.sigma, self.phi0 * self.log_coefficient)


@dataclass(frozen=True)
class EigenBasis:
    m: int
    lam: object
    f0: TruncSeries
    f1: LogSeries
    w0: TruncSeries
    w1: LogSeries
    logC: object
    normalization: str

    def specialize(self, v) -> EigenBasis:
        """Exact evaluation of a symbolic basis at ``lam = v``."""
        if not isinstance(self.lam, LamPoly):
            raise SeriesError("basis is already numeric")
        v = as_fraction(v)
        return EigenBasis(
            self.m,
            v,
            self.f0.specialize_lambda(v),
            self.f1.specialize_lambda(v),
            self.w0.specialize_lambda(v),
            self.w1.specialize_lambda(v),
            self.logC(v) if isinstance(self.logC, LamPoly) else self.logC,
            self.normalization,
        )

    def to_json(self) -> dict:
        lc = self.logC.to_json() if isinstance(self.logC, LamPoly) else str(self.logC)
        lam = self.lam.to_json() if isinstance(self.lam, LamPoly) else str(self.lam)
        return {
            "m": self.m,
            "lambda": lam,
            "logC": lc,
            "normalization": self.normalization,
            "f0": self.f0.to_json(),
            "f1": self.f1.to_json(),
            "w0": self.w0.to_json(),
            "w1": self.w1.to_json(),
        }


def _recurse_regular(op: RadialOperator, eta, N: int, start):
    ring = op.ring
    z = ring.zero()
    m, lam = op.m, op.lam
    xi = op.xi_coeffs(max(N, 1))
    if eta is not None:
        eta = eta.with_offset(0)
        if eta.order < N - 2:
            raise SeriesError(f"source known to order {eta.order}, need {N - 2}")
        et = eta.coeffs
    psi = [ring.coerce(start) if not isinstance(start, LamPoly) else start, z]
    for k in range(2, N + 1):
        acc = lam * psi[k - 2]
        if eta is not None:
            acc = acc - et[k - 2]
        # sum over i + j = k - 1 with i >= 1 (xi_i is the coefficient of r^i)
        for j in range(2, k - 1):
            x = xi[k - 1 - j]
            if x != 0 and psi[j] != 0:
                acc = acc + psi[j] * (x * j)
        psi.append(-acc / (k * (m + k - 2)))
    return TruncSeries(tuple(psi[: N + 1]), ring, 0)


def solve_regular(op: RadialOperator, eta: TruncSeries | None = None, N: int = DEFAULT_ORDER) -> TruncSeries:
    """Analytic ``psi`` with ``psi(0)=1``, ``psi'(0)=0`` and ``P psi = eta`` (``eta=None`` means 0)."""
    if N < 2:
        raise SeriesError("order must be at least 2")
    return _recurse_regular(op, eta, N, 1)


def log_source(op: RadialOperator, phi0: TruncSeries) -> TruncSeries:
    """Analytic part ``eta`` of ``P(phi0 log r) = (m-2) r^-2 + eta``.

    Regrouped as ``2 phi0'/r + phi0 xi/r + (m-2)(phi0 - 1)/r^2`` so that every
    division by a power of r is an exact shift.
    """
    m = op.m
    xi = op.lifted_xi()
    t1 = phi0.differentiate().shift(-1).with_offset(0) * 2
    t2 = (phi0 * xi).shift(-1).with_offset(0)
    t3 = (phi0 - 1).shift(-2).with_offset(0) * (m - 2)
    return t1 + t2 + t3


def solve_singular(op: RadialOperator, N: int = DEFAULT_ORDER, resonant_value=0) -> SingularSolution:
    """Second solution, with the log constant read off at the resonant index."""
    m, lam, ring = op.m, op.lam, op.ring
    if N < m:
        raise SeriesError(f"order must be at least m = {m}")
    phi0 = solve_regular(op, None, N)
    eta = log_source(op, phi0)
    res = ring.coerce(resonant_value) if not isinstance(resonant_value, LamPoly) else resonant_value

    if m == 2:
        sigma = _recurse_regular(op, -eta, N, res)
        o = ring.one()
        return SingularSolution(m, sigma, o, o, phi0, resonant_value)

    z = ring.zero()
    xi = op.xi_coeffs(N)
    et = eta.coeffs
    sigma = [ring.one()]
    logC = z
    logcoef = None
    for j in range(1, N + 1):
        acc = lam * sigma[j - 2] if j >= 2 else z
        for jp in range(0, j - 1):
            x = xi[j - 1 - jp]
            if x != 0 and sigma[jp] != 0:
                acc = acc + sigma[jp] * (x * (2 - m + jp))
        if logcoef is not None and j - m >= 0:
            acc = acc + logcoef * et[j - m]
        if j == m - 2:
            logC = -acc
            logcoef = logC / (m - 2)
            sigma.append(res)
        else:
            sigma.append(-acc / (j * (j + 2 - m)))
    return SingularSolution(
        m, TruncSeries(tuple(sigma), ring, 2 - m), logC, logcoef, phi0, resonant_value
    )


def log_constant(op: RadialOperator, N: int | None = None):
    """The log constant ``C``: zero for odd m, a polynomial in lambda when lambda is symbolic.

    For ``m = 2`` the log term is always present and its coefficient is
    normalized to one, which is what is returned.
    """
    if N is None:
        N = max(op.m, 2)
    return solve_singular(op, N).logC


def apply_operator(op: RadialOperator, f) -> LogSeries:
    """Apply P term by term to a series or a ``head + tail log r`` pair."""
    if isinstance(f, TruncSeries):
        f = LogSeries(f, f.map(lambda c: c * 0))
    ring = op.ring
    xi = op.lifted_xi()
    lam = op.lam
    m = op.m

    def plain(a: TruncSeries) -> TruncSeries:
        a = a.to_ring(ring) if a.ring is not ring else a
        da = a.differentiate()
        return da.differentiate() + da.shift(-1) * (m - 1) + xi * da + a * lam

    A, B = f.head, f.tail
    extra = B.differentiate().shift(-1) * 2 + B.shift(-2) * (m - 2) + (xi * B).shift(-1)
    return LogSeries(plain(A) + extra, plain(B))


def eigenbasis(op: RadialOperator, N: int = DEFAULT_ORDER) -> EigenBasis:
    """Function and 1-form bases; numeric lambda is handled by exact specialization."""
    if not op.symbolic:
        if op.ring is Ring.F64:
            raise SeriesError("eigenbasis needs an exact eigenvalue")
        return eigenbasis(op.with_lambda(LAM), N).specialize(op.lam)
    if op.lam != LAM:
        raise SeriesError("symbolic eigenbasis needs the bare indeterminate as eigenvalue")
    m = op.m
    sing = solve_singular(op, N)
    f0 = sing.phi0
    f1 = sing.assembled()
    df0 = f0.differentiate()
    try:
        w0 = df0.map(lambda c: c.div_lambda()) * (-m)
    except ArithmeticError as exc:  # pragma: no cover - would be an implementation bug
        raise SeriesError("derivative of the regular solution is not divisible by lambda") from exc
    w1 = f1.differentiate()
    return EigenBasis(m, LAM, f0, f1, w0, w1, sing.logC, sing.normalization)


@dataclass(frozen=True)
class KappaCertificate:
    kappa: int
    verdict: bool
    worst_index: int | None
    worst_ratio: Fraction


def kappa_certificate(op: RadialOperator, eta: TruncSeries | None = None, N: int = DEFAULT_ORDER) -> KappaCertificate:
    """Inductive bound ``|psi_k| <= kappa**(k+1)`` for the regular solution.

    ``kappa`` is the smallest power of two exceeding one that dominates the
    drift and source coefficients (``|c_nu| <= kappa**(nu+1)``) and ``|lam|``.
    """
    if op.symbolic:
        raise SeriesError("the convergence certificate needs a numeric eigenvalue")
    xi = op.xi_coeffs(N + 1)
    et = list(eta.with_offset(0).coeffs[: N + 1]) if eta is not None else []
    kappa = 2
    while True:
        ok = abs(op.lam) <= kappa and all(
            abs(c) <= Fraction(kappa) ** (nu + 1) for seq in (xi, et) for nu, c in enumerate(seq)
        )
        if ok:
            break
        kappa *= 2
    psi = solve_regular(op, eta, N)
    worst, worst_k = Fraction(0), None
    for k, c in enumerate(psi.coeffs):
        ratio = abs(Fraction(c)) / Fraction(kappa) ** (k + 1)
        if ratio > worst:
            worst, worst_k = ratio, k
    return KappaCertificate(kappa, worst <= 1, worst_k, worst)
