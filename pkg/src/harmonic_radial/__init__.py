"""Exact radial eigenfunction series on harmonic model spaces."""

from .conformal import DeformedSpace, RadialConformalFactor, deform, flatness_defect, flatten
from .curvature import CurvatureTraces, h4_point_harmonic, h_coefficients, traces_from_spectrum
from .frobenius import (
    EigenBasis,
    LogSeries,
    RadialOperator,
    apply_operator,
    eigenbasis,
    kappa_certificate,
    log_constant,
    solve_regular,
    solve_singular,
)
from .lampoly import LAM, LamPoly
from .numeric import OdeState, cross_validate, cross_validate_space, integrate, residual_one_form
from .series import DEFAULT_ORDER, Ring, SeriesError, TruncSeries, series
from .spaces import Family, ModelSpace, catalog, density_series, resolve, xi_series

__version__ = "0.1.0"
