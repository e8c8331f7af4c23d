import math
from fractions import Fraction

import pytest

from harmonic_radial.series import Ring, series
from harmonic_radial.spaces import (
    CATALOG_NAMES,
    Family,
    JacobiSpectrum,
    ModelSpace,
    SpaceError,
    catalog,
    closed_form_theta,
    closed_form_xi,
    custom,
    density_series,
    flat,
    injectivity_radius,
    jacobi_spectrum,
    resolve,
    xi_series,
)

F = Fraction


def test_catalog_has_fourteen_entries():
    cat = catalog()
    assert len(cat) == 14 and tuple(cat) == tuple(CATALOG_NAMES)
    assert (cat["CP2"].family, cat["CP2"].m, cat["CP2"].k) == (Family.TRIG, 4, 1)
    assert (cat["HP2"].family, cat["HP2"].m, cat["HP2"].k) == (Family.TRIG, 8, 3)
    assert (cat["S4"].family, cat["S4"].m, cat["S4"].k) == (Family.TRIG, 4, 0)


def test_density_examples():
    assert density_series(flat(7), 10).coeffs == (1,) + (0,) * 10
    assert density_series(catalog()["S4"], 4).coeffs == (1, 0, F(-1, 2), 0, F(13, 120))
    cp2 = density_series(catalog()["CP2"], 4)
    assert cp2[2] == -1


def test_xi_examples():
    assert xi_series(flat(3), 8).is_zero()
    assert xi_series(catalog()["S4"], 5).coeffs == (0, -1, 0, F(-1, 15), 0, F(-2, 315))
    h2 = F(3, 7)
    sp = custom(5, series([1, 0, h2], order=6))
    xi = xi_series(sp, 3)
    assert xi[1] == 2 * h2 and xi[3] == -2 * h2**2


def test_xi_is_log_derivative():
    for sp in catalog().values():
        assert xi_series(sp, 20) == density_series(sp, 21).log().differentiate()


def test_closed_form_values():
    assert closed_form_theta(flat(3), 2.0) == pytest.approx(4.0, abs=0)
    assert closed_form_theta(catalog()["S4"], math.pi / 4) == pytest.approx((math.sqrt(2) / 2) ** 3, rel=1e-15)
    assert closed_form_theta(catalog()["H4"], 1.0) == pytest.approx(math.sinh(1.0) ** 3, rel=1e-15)


def test_series_agrees_with_closed_form():
    for sp in catalog().values():
        d = density_series(sp, 40).to_float()
        for r in (0.1, 0.25, 0.5):
            assert abs(d(r) * r ** (sp.m - 1) - closed_form_theta(sp, r)) <= 1e-10


def test_closed_form_xi_matches_series():
    for sp in catalog().values():
        xi = xi_series(sp, 40).to_float()
        r = 0.3
        assert abs((sp.m - 1) / r + xi(r) - closed_form_xi(sp, r)) < 1e-12


def test_trig_hyperbolic_parity():
    cat = catalog()
    for name in CATALOG_NAMES:
        if name.endswith("~") or name.startswith("H"):
            continue
        sp = cat[name]
        dual = ModelSpace(Family.HYPERBOLIC, sp.m, sp.k)
        a, b = density_series(sp, 16), density_series(dual, 16)
        assert all(b[2 * n] == (-1) ** n * a[2 * n] for n in range(9))


def test_jacobi_spectra():
    assert jacobi_spectrum(catalog()["S4"]).pairs == ((1, 3),)
    assert sorted(jacobi_spectrum(catalog()["CP2"]).pairs) == [(1, 2), (4, 1)]
    s = JacobiSpectrum(((4, 1), (1, 2)))
    assert [s.power_sum(p) for p in (1, 2, 3, 4)] == [6, 18, 66, 258]


def test_injectivity_radius():
    assert injectivity_radius(catalog()["S4"]) == pytest.approx(math.pi)
    assert injectivity_radius(catalog()["CP2"]) == pytest.approx(math.pi / 2)
    assert math.isinf(injectivity_radius(catalog()["H4"]))


def test_resolve():
    assert resolve("CP2") == catalog()["CP2"]
    assert resolve("Flat", 5).m == 5
    assert resolve("OP2").m == 16
    assert resolve("DR:7,3").k == 3 and resolve("DR:7,3").family is Family.HYPERBOLIC
    assert resolve("custom:[1, 0, -2]", 3).density[2] == -2
    with pytest.raises(SpaceError):
        resolve("Q7")
    with pytest.raises(SpaceError):
        resolve("Flat")


def test_custom_density_validation():
    with pytest.raises(SpaceError):
        custom(3, series([1, 1]))
    with pytest.raises(SpaceError):
        custom(3, series([2, 0, 1]))
    with pytest.raises(SpaceError):
        custom(3, series([1.0, 0.0], ring=Ring.F64))


def test_symmetric_flag():
    assert catalog()["HP2"].symmetric
    assert not ModelSpace(Family.HYPERBOLIC, 7, 3).symmetric
    with pytest.raises(SpaceError):
        jacobi_spectrum(ModelSpace(Family.HYPERBOLIC, 7, 3))
