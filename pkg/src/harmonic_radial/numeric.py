"""Binary64 evaluation and adaptive ODE integration away from the centre.

The integrator is the Dormand-Prince 5(4) embedded pair with local error
control; the fifth-order solution is propagated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .frobenius import EigenBasis, LogSeries, RadialOperator
from .series import TruncSeries
from .spaces import Family, ModelSpace, SpaceError, closed_form_xi, injectivity_radius

__all__ = [
    "OdeState",
    "IntegrationError",
    "Drift",
    "drift_for_space",
    "drift_from_series",
    "integrate",
    "residual_one_form",
    "cross_validate",
    "series_tail",
    "CrossValidation",
    "cross_validate_space",
    "TAIL_TOL",
]

TAIL_TOL = 1e-14

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class OdeState:
    r: float
    y: float
    dy: float

    def __post_init__(self):
        if not self.r > 0:
            raise IntegrationError(f"state radius must be positive, got {self.r}")


@dataclass(frozen=True)
class Drift:
    """Full drift ``Xi(r) = (m-1)/r + xi(r)`` and its derivative as float callables."""

    m: int
    xi_tilde: Callable[[float], float]
    dxi: Callable[[float], float] | None = None
    r_max: float = math.inf

    def full(self, r: float) -> float:
        return (self.m - 1) / r + self.xi_tilde(r)


def drift_for_space(sp: ModelSpace) -> Drift:
    """Closed-form drift for the flat, trigonometric and hyperbolic families."""
    m, k, c = sp.m, sp.k, float(sp.c)
    if sp.family is Family.CUSTOM:
        from .spaces import xi_series

        return drift_from_series(m, xi_series(sp, sp.density.order - 1))
    if sp.family is Family.FLAT:
        return Drift(m, lambda r: 0.0, lambda r: -(m - 1) / r**2)

    def xt(r):
        return closed_form_xi(sp, r) - (m - 1) / r

    if sp.family is Family.TRIG:
        def dxi(r):
            x = c * r
            return -(m - 1) * c * c / math.sin(x) ** 2 - k * c * c / math.cos(x) ** 2
    else:
        def dxi(r):
            x = c * r
            return -(m - 1) * c * c / math.sinh(x) ** 2 + k * c * c / math.cosh(x) ** 2

    return Drift(m, xt, dxi, injectivity_radius(sp))


def drift_from_series(m: int, xi: TruncSeries) -> Drift:
    xf = xi.to_float()
    dxf = xi.differentiate().to_float()
    return Drift(m, lambda r: float(xf(float(r))), lambda r: -(m - 1) / r**2 + float(dxf(float(r))))


def integrate(
    op: RadialOperator,
    start: OdeState,
    r1: float,
    tol: float = 1e-10,
    drift: Drift | None = None,
    one_form: bool = False,
    max_steps: int = 200_000,
    trace: list | None = None,
) -> OdeState:
    """Integrate the radial eigenvalue ODE from ``start`` to ``r1``.

    Functions solve ``y'' = -Xi y' - lam y``; with ``one_form=True`` the
    1-form coefficient equation ``y'' = -Xi y' - (Xi' + lam) y`` is used.
    ``trace``, when given, collects every accepted ``OdeState``.
    """
    if tol <= 0:
        raise IntegrationError("tolerance must be positive")
    if not r1 > 0:
        raise IntegrationError(f"target radius must be positive, got {r1}")
    if drift is None:
        drift = drift_from_series(op.m, op.xi)
    if max(start.r, r1) >= drift.r_max:
        raise IntegrationError(f"radius beyond the injectivity range {drift.r_max}")
    if op.symbolic:
        raise IntegrationError("numeric integration needs a numeric eigenvalue")
    lam = float(op.lam)
    if one_form and drift.dxi is None:
        raise IntegrationError("1-form integration needs the drift derivative")

    def rhs(r, y, v):
        xi = drift.full(r)
        if one_form:
            return v, -xi * v - (drift.dxi(r) + lam) * y
        return v, -xi * v - lam * y

    r, y, v = start.r, start.y, start.dy
    if trace is not None:
        trace.append(start)
    span = r1 - r
    if span == 0:
        return start
    direction = 1.0 if span > 0 else -1.0
    h = direction * min(abs(span), 1e-2)
    steps = 0
    while direction * (r1 - r) > 0:
        if steps >= max_steps:
            raise IntegrationError("maximum number of steps exceeded")
        if abs(h) < 1e-14 * max(abs(r), 1.0):
            raise IntegrationError(f"step size underflow at r={r}")
        if direction * (r + h - r1) > 0:
            h = r1 - r
        ky, kv = [], []
        for s in range(7):
            ys, vs = y, v
            for a, dy_, dv_ in zip(_A[s], ky, kv):
                ys += h * a * dy_
                vs += h * a * dv_
            fy, fv = rhs(r + _C[s] * h, ys, vs)
            ky.append(fy)
            kv.append(fv)
        y5 = y + h * sum(b * k for b, k in zip(_B5, ky))
        v5 = v + h * sum(b * k for b, k in zip(_B5, kv))
        ey = h * sum(e * k for e, k in zip(_E, ky))
        ev = h * sum(e * k for e, k in zip(_E, kv))
        err = max(abs(ey) / (tol * max(1.0, abs(y), abs(y5))), abs(ev) / (tol * max(1.0, abs(v), abs(v5))))
        steps += 1
        if err <= 1.0:
            r, y, v = r + h, y5, v5
            if trace is not None:
                trace.append(OdeState(r, y, v))
        fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** (-0.2)))
        h *= fac
    return OdeState(r1, y, v)


def residual_one_form(sp: ModelSpace, r: float) -> float:
    """Residual of ``psi' + Xi psi = 0`` for ``psi = t(cr)**-k s(cr)**(1-m)``.

    ``psi'`` comes from the product rule and ``Xi`` from the density, so the
    two sides are computed independently.  The residual is reported for
    ``psi`` rescaled to ``|psi(r)| = 1``; the 1-form is only defined up to scale.
    """
    if sp.family not in (Family.TRIG, Family.HYPERBOLIC):
        raise SpaceError("closed-form harmonic 1-forms exist for the trig and hyperbolic families")
    xi = closed_form_xi(sp, r)
    m, k, c = sp.m, sp.k, float(sp.c)
    x = c * r
    if sp.family is Family.TRIG:
        s, t, ds, dt = math.sin(x), math.cos(x), c * math.cos(x), -c * math.sin(x)
    else:
        s, t, ds, dt = math.sinh(x), math.cosh(x), c * math.cosh(x), c * math.sinh(x)
    psi = t ** (-k) * s ** (1 - m)
    dpsi = -k * t ** (-k - 1) * dt * s ** (1 - m) + (1 - m) * t ** (-k) * s ** (-m) * ds
    return abs(dpsi + xi * psi) / abs(psi)


def series_tail(f: TruncSeries, r: float) -> float:
    """Last-term heuristic ``max(|c_{N-1}| r^(N-1), |c_N| r^N) / |partial sum|`` at ``r``.

    Two terms are used so that even and odd series are both covered.
    """
    r = float(r)
    cs = [float(c) for c in f.coeffs]
    total = abs(sum(c * r**i for i, c in enumerate(cs)))
    last = max(abs(c) * r**i for i, c in list(enumerate(cs))[-2:])
    if total == 0:
        return 0.0 if last == 0 else math.inf
    return last / total


@dataclass
class MemberReport:
    name: str
    y_series: float
    dy_series: float
    y_ode: float
    dy_ode: float
    rel_err: float
    rel_err_dy: float
    tail_r0: float
    tail_r1: float

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class CrossValidation:
    r0: float
    r1: float
    tol: float
    members: dict = field(default_factory=dict)

    def max_rel_err(self, name: str) -> float:
        rep = self.members[name]
        return max(rep.rel_err, rep.rel_err_dy)

    def to_json(self) -> dict:
        return {
            "r0": self.r0,
            "r1": self.r1,
            "tol": self.tol,
            "members": {k: v.to_json() for k, v in self.members.items()},
        }


def _as_log(f) -> LogSeries:
    if isinstance(f, LogSeries):
        return f
    return LogSeries(f, f.map(lambda c: c * 0))


def _tail(f: LogSeries, r: float) -> float:
    t = series_tail(f.head, r)
    if f.has_log():
        t = max(t, series_tail(f.tail, r))
    return t


def cross_validate(
    op: RadialOperator,
    basis: EigenBasis,
    r0: float = 0.5,
    r1: float = 1.0,
    tol: float = 1e-12,
    drift: Drift | None = None,
    members=("f0", "f1"),
) -> CrossValidation:
    """Propagate series data at ``r0`` with the integrator and compare with the series at ``r1``.

    Members ``f0``/``f1`` use the function equation, ``w0``/``w1`` the 1-form
    equation (which needs ``drift.dxi``).
    """
    if not 0 < r0 < r1:
        raise IntegrationError("need 0 < r0 < r1")
    report = CrossValidation(r0, r1, tol)
    for name in members:
        f = _as_log(getattr(basis, name))
        df = f.differentiate()
        start = OdeState(r0, f.value(r0), df.value(r0))
        end = integrate(op, start, r1, tol, drift=drift, one_form=name.startswith("w"))
        ys, dys = f.value(r1), df.value(r1)
        report.members[name] = MemberReport(
            name,
            ys,
            dys,
            end.y,
            end.dy,
            abs(end.y - ys) / max(abs(ys), 1e-300),
            abs(end.dy - dys) / max(abs(dys), 1e-300),
            _tail(f, r0),
            _tail(f, r1),
        )
    return report


def cross_validate_space(
    sp: ModelSpace,
    lam,
    r0: float = 0.5,
    r1: float = 1.0,
    tol: float = 1e-12,
    order: int = 40,
    members=("f0", "f1"),
    tail_tol: float = TAIL_TOL,
    max_order: int = 320,
) -> tuple[CrossValidation, int]:
    """Cross-validate on a model space, raising the series order until the tail guard passes.

    Returns the report and the order actually used.  Custom spaces cannot go
    beyond the order of their density.
    """
    from .frobenius import eigenbasis

    drift = drift_for_space(sp)
    N = order
    cap = max_order if sp.family is not Family.CUSTOM else min(max_order, sp.density.order - 1)
    while True:
        op = RadialOperator.for_space(sp, lam, N)
        basis = eigenbasis(op, N)
        tails = [_tail(_as_log(getattr(basis, name)), r1) for name in members]
        if max(tails) <= tail_tol or N >= cap:
            break
        N = min(N + max(N // 2, 20), cap)
    return cross_validate(op, basis, r0, r1, tol, drift=drift, members=members), N
