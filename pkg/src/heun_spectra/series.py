"""Asymptotic expansions of the reduced wave function at the singular points.

Near infinity the two formal solutions behave like

    exp(-alpha z) z**(+mu) * sum a_m z**(-m)     (recessive)
    exp(+alpha z) z**(-mu) * sum a~_m z**(-m)    (dominant)

and near zero like

    exp(-beta/z) z * sum b_m z**m                (recessive)
    exp(+beta/z) z * sum b~_m z**m               (dominant).

All four coefficient families obey three-term-with-gap recurrences obtained
by substituting the prefactored ansatz into the differential equation; the
dominant families are the recessive ones with (alpha, mu) or beta negated.
The series are divergent asymptotic series: they are summed to the smallest
term (optimal truncation) and the magnitude of the first omitted term is
reported as the error estimate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AsymptoticRegimeError, DomainError
from .model import ProblemParams, derive_exponents

__all__ = [
    "SeriesKind",
    "AsymptoticSeries",
    "SeriesEvaluation",
    "asym_coeffs_infinity",
    "asym_coeffs_zero",
    "dominant_coeffs",
    "eval_asymptotic",
    "choose_z_far",
    "choose_z_near",
]


class SeriesKind(enum.Enum):
    INFINITY_RECESSIVE = "infinity_recessive"
    INFINITY_DOMINANT = "infinity_dominant"
    ZERO_RECESSIVE = "zero_recessive"
    ZERO_DOMINANT = "zero_dominant"

    @property
    def at_infinity(self) -> bool:
        return self in (SeriesKind.INFINITY_RECESSIVE, SeriesKind.INFINITY_DOMINANT)

    @property
    def dominant(self) -> bool:
        return self in (SeriesKind.INFINITY_DOMINANT, SeriesKind.ZERO_DOMINANT)


@dataclass(frozen=True)
class AsymptoticSeries:
    """Coefficients of one formal solution, leading index 0.

    Coefficients are stored as complex even when real so that complex-weighted
    combinations downstream can consume them uniformly.
    """

    kind: SeriesKind
    coefficients: np.ndarray
    params: ProblemParams
    E: float

    @property
    def leading_coefficient(self) -> complex:
        return complex(self.coefficients[0])

    def signed_exponents(self) -> tuple[float, float, float]:
        """(alpha_eff, mu_eff, beta_eff) with dominant kinds sign-flipped."""
        ex = derive_exponents(self.params, self.E)
        if self.kind.dominant:
            return -ex.alpha, -ex.mu, -ex.beta
        return ex.alpha, ex.mu, ex.beta


@dataclass(frozen=True)
class SeriesEvaluation:
    value: complex
    derivative: complex
    truncation_index: int
    error_estimate: float


def _infinity_coeffs(params, E, leading, M, dominant):
    """Coefficient chain at infinity: -2 a m a_m = ((m-u)(m-1-u)-l(l+1)) a_{m-1} - A a_{m-3}."""
    ex = derive_exponents(params, E)
    alpha, mu = (-ex.alpha, -ex.mu) if dominant else (ex.alpha, ex.mu)
    if alpha == 0.0:
        raise DomainError("alpha = 0: not a bound-state candidate")
    L = params.centrifugal
    a = np.zeros(M + 1, dtype=complex)
    a[0] = leading
    top = M
    for m in range(1, M + 1):
        t = ((m - mu) * (m - 1 - mu) - L) * a[m - 1]
        if m >= 3:
            t -= params.A * a[m - 3]
        a[m] = t / (-2.0 * alpha * m)
        if abs(a[m]) > 1e250:  # divergent tail beyond any usable truncation
            top = m
            break
    return a[: top + 1]


def _zero_coeffs(params, E, leading, M, dominant):
    """Coefficient chain at zero: -2 b m b_m = (m(m-1)-l(l+1)) b_{m-1} + Z b_{m-2} + E b_{m-3}."""
    ex = derive_exponents(params, E)
    beta = -ex.beta if dominant else ex.beta
    if beta == 0.0:
        raise DomainError("beta = 0 (A = 0): zero-side expansion degenerates")
    L = params.centrifugal
    b = np.zeros(M + 1, dtype=complex)
    b[0] = leading
    top = M
    for m in range(1, M + 1):
        t = (m * (m - 1) - L) * b[m - 1]
        if m >= 2:
            t += params.Z * b[m - 2]
        if m >= 3:
            t += E * b[m - 3]
        b[m] = t / (-2.0 * beta * m)
        if abs(b[m]) > 1e250:  # divergent tail beyond any usable truncation
            top = m
            break
    return b[: top + 1]


def asym_coeffs_infinity(params: ProblemParams, E: float, a0: complex = 1.0, M: int = 60) -> AsymptoticSeries:
    """Recessive series at infinity, M coefficients beyond the leading one."""
    if M < 1:
        raise DomainError("M must be >= 1")
    coeffs = _infinity_coeffs(params, E, a0, M, dominant=False)
    return AsymptoticSeries(SeriesKind.INFINITY_RECESSIVE, coeffs, params, E)


def asym_coeffs_zero(params: ProblemParams, E: float, b0: complex = 1.0, M: int = 60) -> AsymptoticSeries:
    """Recessive series at zero; requires A > 0."""
    if M < 1:
        raise DomainError("M must be >= 1")
    if params.A <= 0.0:
        raise DomainError("zero-side series requires A > 0")
    coeffs = _zero_coeffs(params, E, b0, M, dominant=False)
    return AsymptoticSeries(SeriesKind.ZERO_RECESSIVE, coeffs, params, E)


def dominant_coeffs(kind: SeriesKind, params: ProblemParams, E: float, leading: complex = 1.0, M: int = 60) -> AsymptoticSeries:
    """Growing counterpart at either singular point (sign-flipped recurrence)."""
    if M < 1:
        raise DomainError("M must be >= 1")
    if kind is SeriesKind.INFINITY_DOMINANT:
        coeffs = _infinity_coeffs(params, E, leading, M, dominant=True)
    elif kind is SeriesKind.ZERO_DOMINANT:
        if params.A <= 0.0:
            raise DomainError("zero-side series requires A > 0")
        coeffs = _zero_coeffs(params, E, leading, M, dominant=True)
    else:
        raise DomainError(f"dominant_coeffs expects a dominant kind, got {kind}")
    return AsymptoticSeries(kind, coeffs, params, E)


def _terms(series: AsymptoticSeries, z: float) -> np.ndarray:
    m = np.arange(len(series.coefficients))
    if series.kind.at_infinity:
        return series.coefficients * np.power(z, -m.astype(float))
    return series.coefficients * np.power(z, m.astype(float))


def _optimal_truncation(terms: np.ndarray) -> tuple[int, float]:
    """Index of the first omitted term and its magnitude.

    The cut is placed where max(|t_m|, |t_{m+1}|) is smallest; pairing the
    magnitudes keeps isolated zero coefficients (e.g. b_1 at l=0) from being
    mistaken for the smallest term.
    """
    mags = np.abs(terms)
    if len(mags) < 2:
        return 1, float(mags[-1])
    pair = np.maximum(mags[:-1], mags[1:])
    mstar = int(np.argmin(pair))
    cut = mstar + 1  # include terms 0..mstar
    return cut, float(mags[cut])


def eval_asymptotic(series: AsymptoticSeries, z: float, tol: float = 1e-6) -> SeriesEvaluation:
    """Value and derivative of the prefactored expression, optimally truncated.

    Raises AsymptoticRegimeError when the first-omitted-term estimate exceeds
    tol relative to the value, so callers can move z and retry.
    """
    if not z > 0.0:
        raise DomainError("z must be positive")
    alpha, mu, beta = series.signed_exponents()
    terms = _terms(series, z)
    cut, omitted = _optimal_truncation(terms)
    c = series.coefficients[:cut]
    m = np.arange(cut)
    if series.kind.at_infinity:
        s = np.sum(c * np.power(z, -m.astype(float)))
        sp = np.sum(-m[1:] * c[1:] * np.power(z, -(m[1:] + 1.0)))
        pre = math.exp(-alpha * z) * z**mu
        value = pre * s
        derivative = pre * (sp + (mu / z - alpha) * s)
        scale = abs(pre)
    else:
        s = np.sum(c * np.power(z, m.astype(float)))
        sp = np.sum(m[1:] * c[1:] * np.power(z, m[1:] - 1.0))
        pre = math.exp(-beta / z)
        value = pre * z * s
        derivative = pre * ((beta / z) * s + s + z * sp)
        scale = abs(pre * z)
    err = omitted * scale
    rel = err / abs(value) if value != 0 else math.inf
    if rel > tol:
        raise AsymptoticRegimeError(
            f"asymptotic regime not reached at z={z:g} "
            f"(relative error estimate {rel:.2e} > {tol:.2e})",
            z=z,
            error_estimate=rel,
        )
    return SeriesEvaluation(
        value=complex(value),
        derivative=complex(derivative),
        truncation_index=cut,
        error_estimate=err,
    )


def _eval_second_derivative(series: AsymptoticSeries, z: float) -> complex:
    """Second derivative of the truncated expression (for residual checks)."""
    alpha, mu, beta = series.signed_exponents()
    terms = _terms(series, z)
    cut, _ = _optimal_truncation(terms)
    c = series.coefficients[:cut]
    m = np.arange(cut)
    if series.kind.at_infinity:
        s = np.sum(c * np.power(z, -m.astype(float)))
        sp = np.sum(-m * c * np.power(z, -(m + 1.0)))
        spp = np.sum(m * (m + 1.0) * c * np.power(z, -(m + 2.0)))
        pre = math.exp(-alpha * z) * z**mu
        g = mu / z - alpha
        return complex(pre * (spp + 2.0 * g * sp + (g * g - mu / (z * z)) * s))
    s = np.sum(c * np.power(z, m.astype(float)))
    sp = np.sum(m * c * np.power(z, m - 1.0))
    spp = np.sum(m * (m - 1.0) * c * np.power(z, m - 2.0))
    pre = math.exp(-beta / z)
    return complex(pre * ((beta * beta / z**3) * s + 2.0 * (1.0 + beta / z) * sp + z * spp))


def choose_z_far(params: ProblemParams, E: float, M: int = 60, tol: float = 1e-11) -> float:
    """Smallest z >= 10/alpha where the infinity-side series meets tol.

    The optimal-truncation error scales like exp(-2 alpha z), so z grows
    geometrically until the bound is met.
    """
    ex = derive_exponents(params, E)
    series = asym_coeffs_infinity(params, E, 1.0, M)
    z = 10.0 / ex.alpha
    for _ in range(200):
        try:
            eval_asymptotic(series, z, tol)
            return z
        except AsymptoticRegimeError:
            z *= 1.1
    raise AsymptoticRegimeError(
        f"could not reach tolerance {tol:g} at infinity with M={M} terms", z=z
    )


def choose_z_near(params: ProblemParams, E: float, M: int = 60, tol: float = 1e-11, z_floor: float = 0.0) -> float:
    """Largest z <= beta/10 where the zero-side series meets tol.

    The error scales like exp(-2 beta / z); z shrinks geometrically until the
    bound is met, never below z_floor.
    """
    ex = derive_exponents(params, E)
    if ex.beta == 0.0:
        raise DomainError("beta = 0 (A = 0): no zero-side asymptotic regime")
    series = asym_coeffs_zero(params, E, 1.0, M)
    z = ex.beta / 10.0
    for _ in range(200):
        if z_floor and z < z_floor:
            z = z_floor
        try:
            eval_asymptotic(series, z, tol)
            return z
        except AsymptoticRegimeError:
            if z_floor and z <= z_floor:
                raise
            z *= 0.9
    raise AsymptoticRegimeError(
        f"could not reach tolerance {tol:g} at zero with M={M} terms", z=z
    )
