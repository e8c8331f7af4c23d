import math

import pytest

from harmonic_radial.acceptance import bessel_j0
from harmonic_radial.frobenius import RadialOperator, eigenbasis, solve_regular
from harmonic_radial.numeric import (
    IntegrationError,
    OdeState,
    cross_validate,
    cross_validate_space,
    drift_for_space,
    integrate,
    residual_one_form,
    series_tail,
)
from harmonic_radial.series import monomial, one
from harmonic_radial.spaces import catalog, flat


def test_flat_inverse_r():
    sp = flat(3)
    op = RadialOperator.for_space(sp, 0, 4)
    end = integrate(op, OdeState(0.5, 2.0, -4.0), 1.0, tol=1e-12, drift=drift_for_space(sp))
    assert abs(end.y - 1.0) < 1e-9 and abs(end.dy + 1.0) < 1e-9


def test_sphere_cos():
    sp = catalog()["S4"]
    op = RadialOperator.for_space(sp, 4, 40)
    f = solve_regular(op, None, 40).to_float()
    start = OdeState(0.5, f(0.5), f.differentiate()(0.5))
    end = integrate(op, start, 1.0, tol=1e-12, drift=drift_for_space(sp))
    assert abs(end.y - math.cos(1.0)) < 1e-8


def test_bessel_j0():
    sp = flat(2)
    op = RadialOperator.for_space(sp, 1, 40)
    f = solve_regular(op, None, 40).to_float()
    end = integrate(op, OdeState(0.3, f(0.3), f.differentiate()(0.3)), 1.0, tol=1e-12, drift=drift_for_space(sp))
    # J0(1) = 0.7651976865579666 (tabulated)
    assert abs(bessel_j0(1.0) - 0.7651976865579666) < 1e-15
    assert abs(end.y - bessel_j0(1.0)) < 1e-8


def test_step_count_scales_like_fifth_order():
    sp = flat(3)
    op = RadialOperator.for_space(sp, 0, 4)
    counts, errors = [], []
    for tol in (1e-5, 1e-10):
        trace = []
        end = integrate(op, OdeState(0.5, 2.0, -4.0), 2.0, tol=tol, drift=drift_for_space(sp), trace=trace)
        counts.append(len(trace))
        errors.append(abs(end.y - 0.5))
    assert errors[1] < errors[0]
    # steps grow like tol^(-1/5): a factor ~10 for five decades
    assert 4 < counts[1] / counts[0] < 25


def test_integrator_guards():
    sp = catalog()["CP2"]
    op = RadialOperator.for_space(sp, 1, 10)
    with pytest.raises(IntegrationError):
        integrate(op, OdeState(0.5, 1.0, 0.0), 2.0, drift=drift_for_space(sp))
    with pytest.raises(IntegrationError):
        OdeState(0.0, 1.0, 0.0)


@pytest.mark.parametrize("name,r", [("S4", 0.7), ("H8", 1.2), ("CP3", 0.9)])
def test_one_form_residual(name, r):
    assert residual_one_form(catalog()[name], r) <= 1e-12


def test_cross_validate_examples():
    rep, _ = cross_validate_space(catalog()["S4"], 2, 0.5, 1.0, members=("f0",))
    assert rep.members["f0"].rel_err <= 1e-8
    rep, _ = cross_validate_space(catalog()["S6"], 0, 0.4, 0.8, members=("f1",))
    assert rep.members["f1"].rel_err <= 1e-7
    sp = flat(4)
    op = RadialOperator.for_space(sp, 0, 10)
    b = eigenbasis(op, 10)
    assert b.f1.head.offset == -2 and not b.f1.has_log()
    rep = cross_validate(op, b, 0.3, 1.7, drift=drift_for_space(sp), members=("f1",))
    assert rep.members["f1"].rel_err <= 1e-10
    assert rep.members["f1"].y_series == pytest.approx(1.7**-2, rel=1e-15)


def test_one_form_members():
    rep, _ = cross_validate_space(catalog()["CP2"], 1, members=("w0", "w1"))
    assert rep.max_rel_err("w0") < 1e-8 and rep.max_rel_err("w1") < 1e-7


def test_series_tail():
    assert series_tail(one(10).to_float(), 1.0) == 0.0
    geo = (1 / (1 - monomial(1, 10))).to_float()
    assert series_tail(geo, 0.5) == pytest.approx(0.5**9 / (sum(0.5**i for i in range(11))))
