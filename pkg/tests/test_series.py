"""Asymptotic expansions: recurrences, optimal truncation, Wronskians."""

import math

import numpy as np
import pytest

from heun_spectra import (
    AsymptoticRegimeError,
    DomainError,
    ProblemParams,
    SeriesKind,
    asym_coeffs_infinity,
    asym_coeffs_zero,
    choose_z_far,
    choose_z_near,
    derive_exponents,
    dominant_coeffs,
    eval_asymptotic,
)
from heun_spectra.series import _eval_second_derivative

P10 = ProblemParams(A=10.0, Z=1.0, l=0)
E10 = -0.093111277969


def infinity_residual(series):
    """Re-substitute every coefficient into its defining recurrence."""
    p = series.params
    alpha, mu, _ = series.signed_exponents()
    L = p.centrifugal
    a = series.coefficients
    worst = 0.0
    for m in range(1, len(a)):
        lhs = -2.0 * alpha * m * a[m]
        rhs = ((m - mu) * (m - 1 - mu) - L) * a[m - 1]
        if m >= 3:
            rhs -= p.A * a[m - 3]
        scale = max(abs(lhs), abs(rhs), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def zero_residual(series):
    p = series.params
    _, _, beta = series.signed_exponents()
    L = p.centrifugal
    b = series.coefficients
    worst = 0.0
    for m in range(1, len(b)):
        lhs = -2.0 * beta * m * b[m]
        rhs = (m * (m - 1) - L) * b[m - 1]
        if m >= 2:
            rhs += p.Z * b[m - 2]
        if m >= 3:
            rhs += series.E * b[m - 3]
        scale = max(abs(lhs), abs(rhs), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def test_first_coefficient_infinity():
    params = ProblemParams(A=3.0, Z=1.0, l=1)
    E = -0.04
    ex = derive_exponents(params, E)
    s = asym_coeffs_infinity(params, E, 1.0, 5)
    expected = -(ex.mu**2 - ex.mu - params.centrifugal) / (2.0 * ex.alpha)
    assert s.coefficients[1] == pytest.approx(expected, rel=1e-14)


def test_first_coefficients_zero():
    params = ProblemParams(A=3.0, Z=1.0, l=1)
    E = -0.04
    ex = derive_exponents(params, E)
    s = asym_coeffs_zero(params, E, 1.0, 5)
    assert s.coefficients[1] == pytest.approx(params.centrifugal / (2.0 * ex.beta), rel=1e-14)
    # l = 0: b1 = 0 and b2 = -Z/(4 beta)
    p0 = ProblemParams(A=3.0, Z=1.0, l=0)
    s0 = asym_coeffs_zero(p0, E, 1.0, 5)
    ex0 = derive_exponents(p0, E)
    assert s0.coefficients[1] == 0.0
    assert s0.coefficients[2] == pytest.approx(-p0.Z / (4.0 * ex0.beta), rel=1e-14)


def test_dominant_first_coefficients():
    params = ProblemParams(A=3.0, Z=1.0, l=1)
    E = -0.04
    ex = derive_exponents(params, E)
    d = dominant_coeffs(SeriesKind.INFINITY_DOMINANT, params, E, 1.0, 5)
    expected = (ex.mu**2 + ex.mu - params.centrifugal) / (2.0 * ex.alpha)
    assert d.coefficients[1] == pytest.approx(expected, rel=1e-14)
    d0 = dominant_coeffs(SeriesKind.ZERO_DOMINANT, params, E, 1.0, 5)
    assert d0.coefficients[1] == pytest.approx(-params.centrifugal / (2.0 * ex.beta), rel=1e-14)
    with pytest.raises(DomainError):
        dominant_coeffs(SeriesKind.INFINITY_RECESSIVE, params, E, 1.0, 5)


def test_recurrence_residuals():
    s = asym_coeffs_infinity(P10, E10, 1.0, 60)
    assert infinity_residual(s) < 1e-12
    s = asym_coeffs_zero(P10, E10, 1.0, 60)
    assert zero_residual(s) < 1e-12
    d = dominant_coeffs(SeriesKind.INFINITY_DOMINANT, P10, E10, 1.0, 60)
    assert infinity_residual(d) < 1e-12
    d = dominant_coeffs(SeriesKind.ZERO_DOMINANT, P10, E10, 1.0, 60)
    assert zero_residual(d) < 1e-12


def test_eval_leading_behaviour():
    # ratio to the pure prefactor approaches 1 as the singular point nears
    ex = derive_exponents(P10, E10)
    rec0 = asym_coeffs_zero(P10, E10, 1.0, 60)

    def ratio_zero(z):
        ev = eval_asymptotic(rec0, z, 1e-6)
        return ev.value.real / (math.exp(-ex.beta / z) * z)

    r1, r2 = ratio_zero(ex.beta / 14.0), ratio_zero(ex.beta / 28.0)
    assert abs(r2 - 1.0) < abs(r1 - 1.0)
    assert abs(r2 - 1.0) < 0.05

    rec_inf = asym_coeffs_infinity(P10, E10, 1.0, 60)

    def ratio_inf(z):
        ev = eval_asymptotic(rec_inf, z, 1e-6)
        return ev.value.real * math.exp(ex.alpha * z) * z ** (-ex.mu)

    r1, r2 = ratio_inf(14.0 / ex.alpha), ratio_inf(28.0 / ex.alpha)
    assert abs(r2 - 1.0) < abs(r1 - 1.0)
    assert abs(r2 - 1.0) < 0.05


def test_eval_regime_error_carries_estimate():
    rec = asym_coeffs_infinity(P10, E10, 1.0, 60)
    with pytest.raises(AsymptoticRegimeError) as err:
        eval_asymptotic(rec, 1.0, 1e-10)  # far outside the asymptotic regime
    assert err.value.error_estimate is not None
    assert err.value.error_estimate > 1e-10


def test_worked_example_point_accuracy():
    # optimal truncation of the infinity-side series at z = 20: the relative
    # estimate is ~ exp(-2 alpha z) damped by the index-dependent algebraic
    # factor (about 1e-8 here), and falls steeply as z grows
    rec = asym_coeffs_infinity(P10, E10, 1.0, 60)
    ev20 = eval_asymptotic(rec, 20.0, 1e-6)
    rel20 = ev20.error_estimate / abs(ev20.value)
    assert rel20 < 1e-8
    assert ev20.truncation_index == pytest.approx(12, abs=5)
    ev30 = eval_asymptotic(rec, 30.0, 1e-6)
    assert ev30.error_estimate / abs(ev30.value) < 0.05 * rel20


def test_truncation_index_scales_with_z():
    rec = asym_coeffs_infinity(P10, E10, 1.0, 72)
    ex = derive_exponents(P10, E10)
    z = 12.0 / ex.alpha
    m1 = eval_asymptotic(rec, z, 1e-4).truncation_index
    m2 = eval_asymptotic(rec, 2.0 * z, 1e-4).truncation_index
    assert m1 >= 1 and m2 >= 1
    assert 1.5 <= m2 / m1 <= 2.5


def test_ode_residual_of_truncated_series():
    """Analytic second derivative of the evaluated truncation obeys the ODE."""
    for kind, builder in [
        (SeriesKind.INFINITY_RECESSIVE, lambda: asym_coeffs_infinity(P10, E10, 1.0, 60)),
        (SeriesKind.ZERO_RECESSIVE, lambda: asym_coeffs_zero(P10, E10, 1.0, 60)),
    ]:
        series = builder()
        ex = derive_exponents(P10, E10)
        z = 14.0 / ex.alpha if kind.at_infinity else ex.beta / 14.0
        ev = eval_asymptotic(series, z, 1e-6)
        d2 = _eval_second_derivative(series, z)
        F = P10.A / z**4 + P10.centrifugal / z**2 - P10.Z / z - E10
        resid_rel = abs(d2 - F * ev.value) / abs(F * ev.value)
        err_rel = ev.error_estimate / abs(ev.value)
        assert resid_rel < 30.0 * err_rel + 1e-15


def test_wronskian_of_recessive_dominant_pair():
    """Constant in z and equal to 2 alpha (infinity) / -2 beta (zero)."""
    ex = derive_exponents(P10, E10)
    rec = asym_coeffs_infinity(P10, E10, 1.0, 90)
    dom = dominant_coeffs(SeriesKind.INFINITY_DOMINANT, P10, E10, 1.0, 90)
    values = []
    for z in (20.0 / ex.alpha, 26.0 / ex.alpha):
        r = eval_asymptotic(rec, z, 1e-8)
        d = eval_asymptotic(dom, z, 1e-3)
        values.append(r.value * d.derivative - r.derivative * d.value)
    assert abs(values[0] - values[1]) < 1e-9 * abs(values[0])
    assert values[0] == pytest.approx(2.0 * ex.alpha, rel=1e-8)

    rec0 = asym_coeffs_zero(P10, E10, 1.0, 90)
    dom0 = dominant_coeffs(SeriesKind.ZERO_DOMINANT, P10, E10, 1.0, 90)
    values = []
    for z in (ex.beta / 20.0, ex.beta / 26.0):
        r = eval_asymptotic(rec0, z, 1e-8)
        d = eval_asymptotic(dom0, z, 1e-3)
        values.append(r.value * d.derivative - r.derivative * d.value)
    assert abs(values[0] - values[1]) < 1e-9 * abs(values[0])
    assert values[0] == pytest.approx(-2.0 * ex.beta, rel=1e-8)


def test_choosers_meet_tolerance():
    z_far = choose_z_far(P10, E10, 72, 1e-11)
    ex = derive_exponents(P10, E10)
    assert z_far >= 10.0 / ex.alpha
    ev = eval_asymptotic(asym_coeffs_infinity(P10, E10, 1.0, 72), z_far, 1e-11)
    assert ev.error_estimate / abs(ev.value) < 1e-11
    z_near = choose_z_near(P10, E10, 72, 1e-11)
    assert z_near <= ex.beta / 10.0
    ev = eval_asymptotic(asym_coeffs_zero(P10, E10, 1.0, 72), z_near, 1e-11)
    assert ev.error_estimate / abs(ev.value) < 1e-11


def test_zero_side_requires_positive_A():
    with pytest.raises(DomainError):
        asym_coeffs_zero(ProblemParams(A=0.0, Z=1.0, l=0), -0.25, 1.0, 10)
    with pytest.raises(DomainError):
        choose_z_near(ProblemParams(A=0.0, Z=1.0, l=0), -0.25)


def test_coefficients_stored_complex():
    s = asym_coeffs_infinity(P10, E10, 1.0, 10)
    assert np.iscomplexobj(s.coefficients)
    assert s.leading_coefficient == 1.0 + 0.0j
