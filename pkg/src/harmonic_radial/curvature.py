"""Density asymptotics from traces of the Jacobi operator and its covariant derivatives."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from .lampoly import as_fraction
from .spaces import JacobiSpectrum

__all__ = ["CurvatureTraces", "h_coefficients", "h4_point_harmonic", "traces_from_spectrum"]


@dataclass(frozen=True)
class CurvatureTraces:
    """Traces along a unit direction xi.

    ``J = J(xi)``, ``J1 = nabla_xi J``, ``J2 = nabla_xi^2 J``.  Field names:
    ``trJp = Tr J^p``, ``trJ1sq = Tr J1^2``, ``trJJ1sq = Tr J J1^2``,
    ``trJ2sqJ2 = Tr J^2 J2``, ``trJ2sq = Tr J2^2`` and ``trJ2op = Tr J2``.
    """

    trJ: Fraction = Fraction(0)
    trJ2: Fraction = Fraction(0)
    trJ3: Fraction = Fraction(0)
    trJ4: Fraction = Fraction(0)
    trJ1sq: Fraction = Fraction(0)
    trJJ1sq: Fraction = Fraction(0)
    trJ2sqJ2: Fraction = Fraction(0)
    trJ2sq: Fraction = Fraction(0)
    trJ2op: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, as_fraction(getattr(self, f.name)))

    @classmethod
    def from_json(cls, data) -> CurvatureTraces:
        if isinstance(data, str):
            data = json.loads(data)
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown trace fields: {sorted(extra)}")
        return cls(**{k: as_fraction(v) for k, v in data.items()})

    def to_json(self) -> dict:
        return {k: str(v) for k, v in asdict(self).items()}


def h_coefficients(t: CurvatureTraces) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``(H2, H4, H6, H8)`` of a harmonic space from its curvature traces."""
    a1, a2, a3, a4 = t.trJ, t.trJ2, t.trJ3, t.trJ4
    F = Fraction
    h2 = -a1 / 6
    h4 = a1**2 / 72 - a2 / 180
    h6 = -a1**3 / 1296 + a1 * a2 / 1080 - a3 / 2835 + t.trJ1sq / 10080
    h8 = (
        a1**4 / 31104
        - a1**2 * a2 / 12960
        + a1 * a3 / 17010
        - a1 * t.trJ1sq / 60480
        + a2**2 / 64800
        - a4 / 37800
        - t.trJ2sqJ2 / 340200
        + t.trJJ1sq / 54432
        - t.trJ2sq / 907200
    )
    return F(h2), F(h4), F(h6), F(h8)


def h4_point_harmonic(t: CurvatureTraces) -> Fraction:
    """H4 for a space harmonic only at one point; carries the extra ``Tr J2`` term."""
    return t.trJ**2 / 72 - t.trJ2 / 180 - t.trJ2op / 40


def traces_from_spectrum(s: JacobiSpectrum) -> CurvatureTraces:
    """Power sums of a parallel Jacobi operator; all derivative traces vanish."""
    return CurvatureTraces(
        trJ=s.power_sum(1), trJ2=s.power_sum(2), trJ3=s.power_sum(3), trJ4=s.power_sum(4)
    )
