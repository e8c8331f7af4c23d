"""Radial conformal deformations ``g -> exp(2 phi(r)) g`` and density flattening.

Under the deformation the new geodesic radius is ``rho(r) = int_0^r exp(phi)``
and the density in the new polar coordinates is

    Theta_new(rho) = exp((m-1) phi(r(rho))) * Theta(r(rho)).

Since ``exp(phi(0))`` is irrational for rational nonzero ``phi(0)``, a factor
is stored as ``scale * exp(phi_hat)`` with ``phi_hat(0) = 0`` and rational
``scale = exp(phi(0))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy import integrate as _quad

from .lampoly import as_fraction
from .series import DEFAULT_ORDER, Ring, SeriesError, TruncSeries, monomial
from .spaces import ModelSpace, closed_form_theta, custom, density_series

__all__ = [
    "RadialConformalFactor",
    "DeformedSpace",
    "deform",
    "flatten",
    "is_even",
    "flatness_defect",
]


def is_even(phi: TruncSeries) -> bool:
    """True iff every odd coefficient is exactly zero."""
    return phi.is_even()


@dataclass(frozen=True)
class RadialConformalFactor:
    phi: TruncSeries
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.phi.ring is not Ring.QQ:
            raise SeriesError("conformal factors need exact rational coefficients")
        if self.phi.offset < 0:
            raise SeriesError("conformal factor must be smooth at the centre")
        if self.phi.with_offset(0).coeffs[0] != 0:
            raise SeriesError("store exp(phi(0)) in `scale`; phi itself must vanish at 0")
        if not self.phi.is_even():
            raise SeriesError("radial conformal factors must be even")
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if self.scale <= 0:
            raise SeriesError("scale exp(phi(0)) must be positive")

    @property
    def order(self) -> int:
        return self.phi.precision - 1

    def phi0(self) -> float:
        return math.log(self.scale)

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(), "scale": str(self.scale)}

    @classmethod
    def from_json(cls, data) -> RadialConformalFactor:
        if "phi" in data:
            return cls(TruncSeries.from_json(data["phi"]).to_ring(Ring.QQ), as_fraction(data.get("scale", 1)))
        return cls(TruncSeries.from_json(data).to_ring(Ring.QQ))


@dataclass(frozen=True)
class DeformedSpace:
    base: ModelSpace
    factor: RadialConformalFactor
    rho_of_r: TruncSeries
    r_of_rho: TruncSeries
    theta_tilde: TruncSeries

    @property
    def m(self) -> int:
        return self.base.m

    def as_space(self, name: str = "") -> ModelSpace:
        return custom(self.m, self.theta_tilde, name or f"deformed({self.base.label})")

    def to_json(self) -> dict:
        return {
            "base": self.base.label,
            "m": self.m,
            "phi": self.factor.to_json(),
            "rho_of_r": self.rho_of_r.to_json(),
            "r_of_rho": self.r_of_rho.to_json(),
            "theta_tilde": self.theta_tilde.to_json(),
        }


def deform(base: ModelSpace, factor: RadialConformalFactor, N: int = DEFAULT_ORDER) -> DeformedSpace:
    """Density of ``exp(2 phi) g`` in its own geodesic radius, exactly to order ``N``."""
    if N < 4:
        raise SeriesError("deformation needs order at least 4")
    if factor.order < N:
        raise SeriesError(f"conformal factor known to order {factor.order}, need {N}")
    m, a = base.m, factor.scale
    phi = factor.phi.with_offset(0).truncate(N)
    rho = (phi.exp().integrate() * a).with_offset(0)  # order N+1
    r_of = rho.revert()
    ratio = r_of.with_offset(1).shift(-1)  # r(rho)/rho, constant 1/a
    theta = density_series(base, N)
    out = (phi.compose(r_of) * (m - 1)).exp() * ratio ** (m - 1) * theta.compose(r_of) * a ** (m - 1)
    return DeformedSpace(base, factor, rho, r_of, out.truncate(N))


def flatten(base: ModelSpace, N: int = DEFAULT_ORDER, literal: bool = False) -> RadialConformalFactor:
    """Conformal factor whose deformation has density ``rho**(m-1)``.

    The new radius ``u = rho(r)`` must satisfy ``(u')**(m-1) Theta(r) = u**(m-1)``,
    which integrates to

        u(r) = r * exp(int_0^r (Theta~(t)**(-1/(m-1)) - 1) / t dt),   exp(phi) = u'.

    ``literal=True`` instead returns ``phi = -log(Theta~)/(m-1)``, the choice
    that cancels the density in the old radius; its deformation is not flat
    in the new radius unless ``phi`` vanishes.
    """
    m = base.m
    theta = density_series(base, N)
    if literal:
        return RadialConformalFactor(theta.log() * Fraction(-1, m - 1))
    g = theta.pow_rational(Fraction(-1, m - 1)) - 1
    integrand = g.shift(-1).with_offset(0)
    u = integrand.integrate().with_offset(0).exp().shift(1)
    phi = u.differentiate().log()
    return RadialConformalFactor(phi.truncate(N))


def flatness_defect(base: ModelSpace, factor: RadialConformalFactor, rho_max: float = 1.0, points: int = 20) -> float:
    """Float check of flattening independent of the series truncation of the density.

    ``rho(r)`` comes from adaptive quadrature of ``exp(phi)``, the density from
    its closed form; returns ``max |exp((m-1) phi(r)) Theta(r) / rho**(m-1) - 1|``
    over a grid of radii with ``rho <= rho_max``.
    """
    m = base.m
    phi = factor.phi.with_offset(0).to_float()
    a = float(factor.scale)

    def e_phi(t):
        return a * math.exp(phi(t))

    # largest r with rho(r) <= rho_max, by bisection on the quadrature
    def rho(r):
        val, _ = _quad.quad(e_phi, 0.0, r, epsabs=1e-15, epsrel=1e-13, limit=200)
        return val

    lo, hi = 0.0, rho_max / a
    while rho(hi) < rho_max:
        hi *= 1.5
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if rho(mid) <= rho_max:
            lo = mid
        else:
            hi = mid
    worst = 0.0
    for i in range(1, points + 1):
        r = lo * i / points
        p = rho(r)
        val = a ** (m - 1) * math.exp((m - 1) * phi(r)) * closed_form_theta(base, r) / p ** (m - 1)
        worst = max(worst, abs(val - 1.0))
    return worst


def identity_factor(N: int = DEFAULT_ORDER) -> RadialConformalFactor:
    return RadialConformalFactor(monomial(0, N, coeff=0))
