import random
from fractions import Fraction

import pytest

from harmonic_radial.conformal import RadialConformalFactor, deform, flatness_defect, flatten, identity_factor, is_even
from harmonic_radial.frobenius import RadialOperator, eigenbasis
from harmonic_radial.lampoly import LAM
from harmonic_radial.series import SeriesError, series
from harmonic_radial.spaces import catalog, density_series, flat, xi_series

F = Fraction
N = 12


def rand_phi(rng, n=N):
    return series([0] + [F(rng.randint(-5, 5), rng.randint(1, 6)) if i % 2 == 0 else 0 for i in range(1, n + 1)])


def test_identity_deformation():
    sp = catalog()["CP2"]
    d = deform(sp, identity_factor(N), N)
    assert d.theta_tilde == density_series(sp, N)
    assert d.rho_of_r.coeffs == series([0, 1], order=N + 1).coeffs


def test_homothety_keeps_flat_density():
    d = deform(flat(5), RadialConformalFactor(series([0], order=N), F(3)), N)
    assert d.theta_tilde.coeffs == (1,) + (0,) * N


def test_flat_generic_factor_order_two():
    # rho = r + p2 r^3/3, so (r/rho)^(m-1) exp((m-1) p2 r^2) = 1 + (2/3)(m-1) p2 rho^2 + ...
    for m, p2 in ((4, F(1)), (6, F(-2, 5))):
        d = deform(flat(m), RadialConformalFactor(series([0, 0, p2], order=N)), N)
        assert d.theta_tilde[2] == F(2, 3) * (m - 1) * p2
        assert d.theta_tilde.is_even() and d.theta_tilde[0] == 1


def test_flatten_flat_is_trivial():
    assert flatten(flat(4), N).phi.is_zero()


def test_round_trip_all_catalog():
    for sp in catalog().values():
        factor = flatten(sp, 16)
        assert is_even(factor.phi)
        assert deform(sp, factor, 16).theta_tilde.coeffs == (1,) + (0,) * 16


def test_literal_flag_gives_non_flat_density():
    # literal phi ~ -h2 r^2/(m-1) leaves (r/rho)^(m-1) = 1 + h2 rho^2/3 + ...
    sp = catalog()["CP2"]
    d = deform(sp, flatten(sp, N, literal=True), N)
    assert d.theta_tilde[2] == F(-1, 3)


def test_reversion_identity():
    d = deform(catalog()["HP2"], flatten(catalog()["HP2"], N), N)
    ident = d.rho_of_r.compose(d.r_of_rho)
    assert ident.coeffs == series([0, 1], order=ident.order).coeffs


def test_composition_coherence():
    rng = random.Random(7)
    base = catalog()["S6"]
    for _ in range(3):
        p1, p2 = rand_phi(rng), rand_phi(rng)
        d1 = deform(base, RadialConformalFactor(p1), N)
        d2 = deform(d1.as_space(), RadialConformalFactor(p2), N)
        combined = p1 + p2.compose(d1.rho_of_r.truncate(N))
        d12 = deform(base, RadialConformalFactor(combined.truncate(N)), N)
        assert d12.theta_tilde == d2.theta_tilde


def test_is_even():
    assert is_even(series([1, 0, 1]))
    assert not is_even(series([0, 1]))


def test_quadrature_check_and_flat_basis():
    sp = catalog()["CP2"]
    factor = flatten(sp, 40)
    assert flatness_defect(sp, factor) <= 1e-10
    assert flatness_defect(sp, flatten(sp, 40, literal=True)) > 1e-3
    d = deform(sp, factor, 20)
    b = eigenbasis(RadialOperator(4, LAM, xi_series(d.as_space(), 19)), 19)
    assert b.logC == -LAM


def test_factor_validation():
    with pytest.raises(SeriesError):
        RadialConformalFactor(series([1, 0, 1]))
    with pytest.raises(SeriesError):
        RadialConformalFactor(series([0, 1]))
    with pytest.raises(SeriesError):
        deform(flat(3), RadialConformalFactor(series([0, 0, 1])), 10)
