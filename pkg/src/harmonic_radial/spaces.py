"""Model spaces that are harmonic at a point, with their volume densities.

The density in geodesic polar coordinates is ``Theta(r) = r**(m-1) * Theta~(r)``
where ``Theta~`` is even with ``Theta~(0) = 1``.  For the trigonometric and
hyperbolic families

    Theta(r) = (s(c r) / c)**(m-1) * t(c r)**k,    (s, t) = (sin, cos) or (sinh, cosh),

which for ``c = 1`` is the familiar ``sin(r)**(m-1) cos(r)**k``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .lampoly import as_fraction
from .series import Ring, SeriesError, TruncSeries, one, series

__all__ = [
    "Family",
    "ModelSpace",
    "JacobiSpectrum",
    "SpaceError",
    "density_series",
    "xi_series",
    "closed_form_theta",
    "closed_form_xi",
    "injectivity_radius",
    "catalog",
    "CATALOG_NAMES",
    "resolve",
    "jacobi_spectrum",
    "flat",
    "custom",
]


class SpaceError(ValueError):
    pass


class Family(str, enum.Enum):
    FLAT = "Flat"
    TRIG = "Trig"
    HYPERBOLIC = "Hyperbolic"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class ModelSpace:
    family: Family
    m: int
    k: int = 0
    c: Fraction = Fraction(1)
    density: TruncSeries | None = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if self.m < 2:
            raise SpaceError(f"dimension must be at least 2, got {self.m}")
        if self.k < 0:
            raise SpaceError("the cut-locus exponent k must be non-negative")
        if self.c <= 0:
            raise SpaceError("scale must be positive")
        if self.family is Family.CUSTOM:
            d = self.density
            if d is None:
                raise SpaceError("a custom space needs a density series")
            if d.ring is not Ring.QQ:
                raise SpaceError("custom densities must have exact rational coefficients")
            if d.offset != 0 or d.coeffs[0] != 1:
                raise SpaceError("custom density must have constant term 1")
            if not d.is_even():
                raise SpaceError("custom density must be even (harmonic at the centre)")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.family is Family.FLAT:
            return f"Flat{self.m}"
        if self.family is Family.CUSTOM:
            return f"custom{self.m}"
        return f"{self.family.value}(m={self.m},k={self.k},c={self.c})"

    @property
    def symmetric(self) -> bool:
        """True for flat space and the rank-one symmetric models (parallel Jacobi operator)."""
        if self.family is Family.FLAT:
            return True
        if self.family is Family.CUSTOM:
            return False
        m, k = self.m, self.k
        return (
            k == 0
            or (k == 1 and m % 2 == 0 and m >= 4)
            or (k == 3 and m % 4 == 0 and m >= 8)
            or (k == 7 and m == 16)
        )


@dataclass(frozen=True)
class JacobiSpectrum:
    pairs: tuple  # ((eigenvalue, multiplicity), ...)

    def __post_init__(self):
        for _, mult in self.pairs:
            if mult <= 0:
                raise SpaceError("multiplicities must be positive")

    @property
    def total_multiplicity(self) -> int:
        return sum(mult for _, mult in self.pairs)

    def power_sum(self, p: int) -> Fraction:
        return sum((Fraction(mult) * Fraction(ev) ** p for ev, mult in self.pairs), Fraction(0))


def flat(m: int) -> ModelSpace:
    return ModelSpace(Family.FLAT, m, name=f"Flat{m}")


def custom(m: int, density: TruncSeries, name: str = "") -> ModelSpace:
    return ModelSpace(Family.CUSTOM, m, density=density, name=name)


def _trig_parts(n: int, c: Fraction, hyperbolic: bool):
    """Even series (sin(cx)/(cx)) and cos(cx) (or the hyperbolic versions) to order n."""
    sinc = [Fraction(0)] * (n + 1)
    cos = [Fraction(0)] * (n + 1)
    c2 = c * c
    fact = Fraction(1)  # (2j)!
    for j in range(0, n // 2 + 1):
        if j:
            fact *= (2 * j - 1) * (2 * j)
        sign = 1 if hyperbolic or j % 2 == 0 else -1
        cos[2 * j] = sign * c2**j / fact
        sinc[2 * j] = sign * c2**j / (fact * (2 * j + 1))
    return series(sinc), series(cos)


def density_series(sp: ModelSpace, N: int = 40) -> TruncSeries:
    """Exact even series of the normalized density ``Theta~`` to order ``N``."""
    if N < 0:
        raise SeriesError("order must be non-negative")
    if sp.family is Family.FLAT:
        return one(N)
    if sp.family is Family.CUSTOM:
        d = sp.density
        if d.order >= N:
            return d.truncate(N)
        raise SeriesError(f"custom density known only to order {d.order}, {N} requested")
    sinc, cos = _trig_parts(N, sp.c, sp.family is Family.HYPERBOLIC)
    out = sinc ** (sp.m - 1)
    if sp.k:
        out = out * cos**sp.k
    return out


def xi_series(sp: ModelSpace, N: int = 40) -> TruncSeries:
    """Regular part of the log-derivative of the density, ``d/dr log Theta~``, to order ``N``."""
    return density_series(sp, N + 1).log().differentiate()


def injectivity_radius(sp: ModelSpace) -> float:
    if sp.family is Family.TRIG:
        return math.pi / float(sp.c) / (2 if sp.k else 1)
    return math.inf


def _check_range(sp: ModelSpace, r: float):
    if not r > 0:
        raise SpaceError(f"radius must be positive, got {r}")
    if r >= injectivity_radius(sp):
        raise SpaceError(f"r={r} is at or beyond the cut locus of {sp.label}")


def closed_form_theta(sp: ModelSpace, r: float) -> float:
    """Binary64 value of the density ``Theta(r)``."""
    _check_range(sp, r)
    m, k, c = sp.m, sp.k, float(sp.c)
    if sp.family is Family.FLAT:
        return r ** (m - 1)
    if sp.family is Family.CUSTOM:
        return float(sp.density(float(r))) * r ** (m - 1)
    x = c * r
    if sp.family is Family.TRIG:
        return (math.sin(x) / c) ** (m - 1) * math.cos(x) ** k
    return (math.sinh(x) / c) ** (m - 1) * math.cosh(x) ** k


def closed_form_xi(sp: ModelSpace, r: float) -> float:
    """Binary64 value of the full drift ``Xi = d/dr log Theta``."""
    _check_range(sp, r)
    m, k, c = sp.m, sp.k, float(sp.c)
    if sp.family is Family.FLAT:
        return (m - 1) / r
    if sp.family is Family.CUSTOM:
        xi = xi_series(sp, sp.density.order - 1).to_float()
        return (m - 1) / r + xi(float(r))
    x = c * r
    if sp.family is Family.TRIG:
        return (m - 1) * c / math.tan(x) - k * c * math.tan(x)
    return (m - 1) * c / math.tanh(x) + k * c * math.tanh(x)


def jacobi_spectrum(sp: ModelSpace) -> JacobiSpectrum:
    """Eigenvalues of the (parallel) Jacobi operator with multiplicities."""
    if sp.family is Family.CUSTOM:
        raise SpaceError("custom spaces carry no Jacobi spectrum")
    if not sp.symmetric:
        raise SpaceError(f"{sp.label} is not a rank-one symmetric model")
    m, k, c2 = sp.m, sp.k, sp.c * sp.c
    if sp.family is Family.FLAT:
        return JacobiSpectrum(((Fraction(0), m - 1),))
    sign = 1 if sp.family is Family.TRIG else -1
    if k == 0:
        return JacobiSpectrum(((sign * c2, m - 1),))
    return JacobiSpectrum(((sign * 4 * c2, k), (sign * c2, m - 1 - k)))


def _sym(name, family, m, k):
    return ModelSpace(family, m, k, name=name)


_T, _H = Family.TRIG, Family.HYPERBOLIC

CATALOG_NAMES = (
    "S4", "H4", "CP2", "CP2~",
    "S6", "H6", "CP3", "CP3~",
    "S8", "H8", "CP4", "CP4~",
    "HP2", "HP2~",
)


def catalog() -> dict[str, ModelSpace]:
    """The fourteen low-dimensional rank-one symmetric spaces, keyed by name."""
    out = {}
    for n in (4, 6, 8):
        out[f"S{n}"] = _sym(f"S{n}", _T, n, 0)
        out[f"H{n}"] = _sym(f"H{n}", _H, n, 0)
        out[f"CP{n // 2}"] = _sym(f"CP{n // 2}", _T, n, 1)
        out[f"CP{n // 2}~"] = _sym(f"CP{n // 2}~", _H, n, 1)
    out["HP2"] = _sym("HP2", _T, 8, 3)
    out["HP2~"] = _sym("HP2~", _H, 8, 3)
    return {name: out[name] for name in CATALOG_NAMES}


def _parse_custom(payload: str, m: int | None) -> ModelSpace:
    if m is None:
        raise SpaceError("custom densities need an explicit dimension (--m)")
    data = json.loads(payload)
    if isinstance(data, list):
        d = series(data)
    else:
        d = TruncSeries.from_json(data)
        if d.ring is not Ring.QQ:
            d = d.to_ring(Ring.QQ)
    return custom(m, d)


def resolve(name: str, m: int | None = None) -> ModelSpace:
    """Look up a space by CLI name.

    Accepted forms: catalog names (``S4``, ``CP2~``, ...), generic ``S<m>``,
    ``H<m>``, ``CP<n>``, ``HP<n>``, ``OP2`` and their ``~`` duals, ``Flat``
    (needs ``m``), ``DR:m,k`` for the hyperbolic family with free exponent,
    and ``custom:<json>`` for a user density (needs ``m``).
    """
    name = name.strip()
    cat = catalog()
    if name in cat:
        return cat[name]
    low = name.lower()
    if low == "flat" or low.startswith("flat"):
        dim = m if low == "flat" else int(name[4:])
        if dim is None:
            raise SpaceError("flat space needs an explicit dimension (--m)")
        return flat(dim)
    if low.startswith("custom:"):
        return _parse_custom(name[len("custom:"):], m)
    if low.startswith("dr:"):
        try:
            dm, dk = (int(x) for x in name[3:].split(","))
        except ValueError as exc:
            raise SpaceError(f"malformed Damek-Ricci spec {name!r}; expected DR:m,k") from exc
        return ModelSpace(Family.HYPERBOLIC, dm, dk, name=f"DR:{dm},{dk}")
    dual = name.endswith("~")
    base = name[:-1] if dual else name
    fam = _H if dual else _T
    try:
        if base.startswith("CP"):
            n = int(base[2:])
            return ModelSpace(fam, 2 * n, 1, name=name)
        if base.startswith("HP"):
            n = int(base[2:])
            return ModelSpace(fam, 4 * n, 3, name=name)
        if base == "OP2":
            return ModelSpace(fam, 16, 7, name=name)
        if base.startswith("S") and not dual:
            return ModelSpace(_T, int(base[1:]), 0, name=name)
        if base.startswith("H") and not dual:
            return ModelSpace(_H, int(base[1:]), 0, name=name)
    except ValueError:
        pass
    raise SpaceError(f"unknown space {name!r}")


def scaled(sp: ModelSpace, c) -> ModelSpace:
    """Same family with curvature scale ``c``."""
    return ModelSpace(sp.family, sp.m, sp.k, as_fraction(c), sp.density, sp.name)
