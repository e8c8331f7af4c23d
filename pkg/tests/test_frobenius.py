import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from harmonic_radial.acceptance import expected_f0, general_log_constant, random_density, residual_zero
from harmonic_radial.frobenius import (
    RadialOperator,
    apply_operator,
    eigenbasis,
    kappa_certificate,
    log_constant,
    solve_regular,
    solve_singular,
)
from harmonic_radial.lampoly import LAM, LamPoly
from harmonic_radial.series import SeriesError, monomial, series
from harmonic_radial.spaces import catalog, custom, flat, xi_series

F = Fraction


def op_for_density(m, d, lam=LAM):
    return RadialOperator(m, lam, d.log().differentiate())


densities = st.builds(
    lambda seed, m: (m, random_density(random.Random(seed), 14)),
    st.integers(0, 10**6),
    st.integers(2, 10),
)


def test_flat_regular_is_one():
    psi = solve_regular(RadialOperator.for_space(flat(5), 0, 10), None, 10)
    assert psi.coeffs == (1,) + (0,) * 10


def test_sphere_cos():
    psi = solve_regular(RadialOperator.for_space(catalog()["S4"], 4, 12), None, 12)
    assert psi[4] == F(1, 24) and psi[6] == F(-1, 720)


def test_symbolic_leading_terms():
    h2 = F(2, 5)
    d = series([1, 0, h2, 0, F(-3, 7)], order=10)
    for m in (3, 6):
        f0 = solve_regular(op_for_density(m, d), None, 6)
        assert f0[2] == -LAM / (2 * m)
        assert f0[4] == LAM * (LAM + 4 * h2) / (8 * m * (m + 2))


def test_flat_singular():
    sing = solve_singular(RadialOperator.for_space(flat(3), 0, 8), 8)
    assert sing.logC == 0
    assert sing.sigma.offset == -1 and sing.sigma.coeffs == (1,) + (0,) * 8


def test_m4_log_constant_from_drift():
    xi1 = F(-3, 4)
    xi = series([0, xi1, 0, F(5, 2)], order=5)
    assert log_constant(RadialOperator(4, LAM, xi)) == 2 * xi1 - LAM


def test_sphere_and_flat_log_constants():
    assert log_constant(RadialOperator.for_space(catalog()["S4"], LAM, 4)) == -(LAM + 2)
    assert log_constant(RadialOperator.for_space(flat(4), LAM, 4)) == -LAM


def test_m6_formula():
    rng = random.Random(6)
    for _ in range(5):
        d = random_density(rng, 8)
        assert log_constant(op_for_density(6, d)) == general_log_constant(6, d[2], d[4])


@settings(max_examples=15, deadline=None)
@given(densities)
def test_odd_dimensions_have_no_log_term(md):
    _, d = md
    for m in (3, 5, 7, 9):
        assert log_constant(op_for_density(m, d)).is_zero()


@settings(max_examples=15, deadline=None)
@given(densities)
def test_log_constant_is_normalization_independent(md):
    m, d = md
    op = op_for_density(m, d)
    N = max(m, 2) + 4
    a, b = solve_singular(op, N, 0), solve_singular(op, N, 1)
    assert a.logC == b.logC
    # and both choices still solve the equation
    for s in (a, b):
        res = apply_operator(op, s.assembled())
        assert res.head.is_zero() and res.tail.is_zero()


@settings(max_examples=15, deadline=None)
@given(densities, st.integers(-5, 5))
def test_specialization_commutes(md, v):
    m, d = md
    sym = solve_regular(op_for_density(m, d), None, 12).specialize_lambda(v)
    assert sym == solve_regular(op_for_density(m, d, F(v)), None, 12)


@settings(max_examples=15, deadline=None)
@given(densities)
def test_lambda_divisibility_and_parity(md):
    m, d = md
    b = eigenbasis(op_for_density(m, d), 12)
    for c in b.f0.differentiate().coeffs:
        assert c.constant() == 0
    assert b.f0.is_even() and b.w0.is_odd()


@settings(max_examples=10, deadline=None)
@given(densities)
def test_residual_vanishes(md):
    m, d = md
    assert residual_zero(op_for_density(m, d), 12)


def test_residual_detects_a_wrong_solution():
    op = RadialOperator.for_space(catalog()["S4"], LAM, 10)
    f0 = solve_regular(op, None, 10)
    res = apply_operator(op, f0 + monomial(6, 10, f0.ring, LamPoly((1,))))
    assert not res.head.is_zero()


def test_one_form_examples():
    h2 = F(-1, 3)
    d = series([1, 0, h2, 0, F(1, 11)], order=12)
    for m in (3, 4, 7):
        b = eigenbasis(op_for_density(m, d), max(m, 8))
        assert b.w0[1] == 1
        assert b.w0[3] == -(LAM + 4 * h2) / (2 * (m + 2))
        assert [b.f0[2 * n] for n in range(4)] == expected_f0(m, h2, d[4])
    flat_b = eigenbasis(RadialOperator.for_space(flat(5), LAM, 8), 8).specialize(0)
    assert flat_b.w0.coeffs == monomial(1, flat_b.w0.order).coeffs


def test_numeric_lambda_eigenbasis_matches_specialization():
    sp = catalog()["CP2"]
    b = eigenbasis(RadialOperator.for_space(sp, 3, 10), 10)
    assert b.lam == 3 and b.logC == -7
    with pytest.raises(SeriesError):
        eigenbasis(RadialOperator.for_space(sp, 3.0, 10), 10)


def test_m2_has_log_with_unit_coefficient():
    b = eigenbasis(RadialOperator.for_space(catalog()["S4"].__class__(catalog()["S4"].family, 2, 0), LAM, 10), 10)
    assert b.logC == 1 and b.f1.has_log()


def test_kappa_examples():
    c = kappa_certificate(RadialOperator.for_space(flat(4), 0, 40), None, 40)
    assert c.kappa == 2 and c.verdict
    assert kappa_certificate(RadialOperator.for_space(catalog()["S4"], 2, 40), None, 40).verdict
    assert kappa_certificate(RadialOperator.for_space(catalog()["S8"], 5, 40), None, 40).verdict
    with pytest.raises(SeriesError):
        kappa_certificate(RadialOperator.for_space(flat(4), LAM, 10), None, 10)


def test_operator_validation():
    with pytest.raises(SeriesError):
        RadialOperator(4, LAM, series([0, 0, 1]))
    with pytest.raises(SeriesError):
        RadialOperator(4, LAM, series([1, 1]))
