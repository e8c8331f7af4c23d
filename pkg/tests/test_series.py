import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from harmonic_radial.lampoly import LAM
from harmonic_radial.series import Ring, RingMismatch, SeriesError, TruncSeries, monomial, one, series

from conftest import small_q

F = Fraction
N = 12
r = monomial(1, N)


def rand_series(n=N):
    return st.lists(small_q, min_size=n + 1, max_size=n + 1).map(series)


def unit_series(n=N):
    return st.lists(small_q, min_size=n, max_size=n).map(lambda cs: series([F(1)] + cs))


def nilpotent(n=N):
    return st.lists(small_q, min_size=n, max_size=n).map(lambda cs: series([F(0)] + cs))


def test_difference_of_squares():
    assert ((1 + r) * (1 - r)).truncate(2).coeffs == (1, 0, -1)


def test_geometric_series():
    assert (1 / (1 - r)).coeffs == (1,) * (N + 1)


def test_sinc_cubed():
    # sin(r)/r = 1 - r^2/6 + r^4/120; cubed by hand: 1 - r^2/2 + 13 r^4/120
    sinc = series([(-1) ** (n // 2) * F(1, math.factorial(n + 1)) if n % 2 == 0 else 0 for n in range(5)])
    assert (sinc**3).coeffs == (1, 0, F(-1, 2), 0, F(13, 120))


def test_calculus_examples():
    assert series([1, 0, F(-1, 2)]).differentiate().coeffs[:2] == (0, -1)
    assert series([0, 1], order=2).integrate()[2] == F(1, 2)
    d = monomial(0, 4, coeff=1).with_offset(0).shift(-2).differentiate()
    assert d.offset == -3 and d.coeffs[0] == -2


def test_exp_log_examples():
    assert monomial(0, 6, coeff=0).exp().coeffs == (1,) + (0,) * 6
    assert series([1, 1], order=5).log().coeffs == (0, 1, F(-1, 2), F(1, 3), F(-1, 4), F(1, 5))
    assert series([1, 1, 1], order=6).log().exp().coeffs == (1, 1, 1, 0, 0, 0, 0)


def test_binomial_series():
    got = series([1, 0, -1], order=8).pow_rational(F(-1, 2))
    # comb(2k, k) / 4^k at n = 2k
    want = [F(math.comb(2 * (n // 2), n // 2), 4 ** (n // 2)) if n % 2 == 0 else 0 for n in range(9)]
    assert list(got.coeffs) == want
    assert series([1, 1], order=4).pow_rational(1).coeffs == (1, 1, 0, 0, 0)
    assert one(5).pow_rational(F(3, 7)).coeffs == one(5).coeffs


def test_compose_examples():
    assert series([1, 1], order=6).compose(r * r).truncate(6).coeffs == (1, 0, 1, 0, 0, 0, 0)
    u_over = (r / (1 + r))
    assert u_over.compose(r).coeffs[:5] == (0, 1, -1, 1, -1)
    log1p = series([1, 1], order=N).log()
    assert (r.exp() - 1).compose(log1p).coeffs == r.coeffs


def test_revert_catalan():
    # Lagrange inversion of r + r^2: coefficients (-1)^(n-1) Catalan(n-1)
    inv = (r + r * r).revert()
    cat = [math.comb(2 * k, k) // (k + 1) for k in range(N)]
    assert list(inv.coeffs) == [0] + [(-1) ** (n - 1) * cat[n - 1] for n in range(1, N + 1)]
    assert r.revert().coeffs == r.coeffs


def test_specialize_examples():
    f = 1 - monomial(2, 4, Ring.QLAM, LAM / 8)
    assert f.specialize_lambda(0).coeffs == (1, 0, 0, 0, 0)
    assert monomial(0, 0, Ring.QLAM, -LAM).specialize_lambda(3).coeffs == (-3,)


def test_order_bookkeeping_and_errors():
    a, b = one(8), one(5)
    assert (a + b).order == 5 and (a * b).order == 5
    with pytest.raises(RingMismatch):
        one(3) + one(3, Ring.F64)
    with pytest.raises(SeriesError):
        r.log()
    with pytest.raises(SeriesError):
        one(3).compose(one(3))


def test_json_round_trip():
    s = series([F(1, 3), 0, -2], offset=-1)
    assert TruncSeries.from_json(s.to_json()) == s
    q = monomial(2, 4, Ring.QLAM, LAM + 1)
    assert TruncSeries.from_json(q.to_json()) == q


@settings(max_examples=40)
@given(rand_series(), rand_series(), rand_series())
def test_ring_axioms(a, b, c):
    assert ((a + b) + c) == (a + (b + c))
    assert ((a * b) * c) == (a * (b * c))
    assert (a * (b + c)) == (a * b + a * c)
    assert a * b == b * a


@settings(max_examples=40)
@given(rand_series())
def test_multiplicative_inverse(a):
    assume(a.coeffs[0] != 0)
    assert (a * (1 / a)).coeffs == one(N).coeffs


@settings(max_examples=30)
@given(nilpotent(), unit_series())
def test_exp_log_inverse(x, u):
    assert x.exp().log() == x
    assert u.log().exp() == u


@settings(max_examples=30)
@given(st.lists(small_q, min_size=7, max_size=7))
def test_compose_revert(cs):
    a = series([0, 1] + cs)
    inv = a.revert()
    assert a.compose(inv).coeffs == series([0, 1], order=8).coeffs
    assert inv.compose(a).coeffs == series([0, 1], order=8).coeffs


@settings(max_examples=40)
@given(nilpotent())
def test_differentiate_after_integrate(a):
    assert a.integrate().differentiate().equals(a)


@settings(max_examples=40)
@given(rand_series(), rand_series())
def test_parity(a, b):
    ea = series([c if i % 2 == 0 else 0 for i, c in enumerate(a.coeffs)])
    eb = series([c if i % 2 == 0 else 0 for i, c in enumerate(b.coeffs)])
    assert (ea * eb).is_even()
    assert ea.differentiate().is_odd()


@settings(max_examples=30)
@given(unit_series(), rand_series())
def test_float_agrees_with_exact(u, a):
    exact = (u.log() + a * a).coeffs
    approx = (u.to_float().log() + a.to_float() * a.to_float()).coeffs
    for e, f in zip(exact, approx):
        assert abs(float(e) - f) <= 1e-12 * max(1.0, abs(float(e)))


def test_float_evaluation_matches_closed_form():
    sinc = series([(-1) ** (n // 2) * F(1, math.factorial(n + 1)) if n % 2 == 0 else 0 for n in range(31)])
    x = 0.3
    assert abs((sinc**3).to_float()(x) - (math.sin(x) / x) ** 3) < 1e-14
