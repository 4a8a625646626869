"""Exact supersingular intensities admitting quasi-polynomial bound states.

A quasi-polynomial solution has the closed form

    w(z) = exp(-alpha z - beta/z) * z * v(z),    v a polynomial of degree p-1,

which forces mu = Z/(2 alpha) to be a positive integer p, hence
E = -Z**2/(4 p**2) and alpha = Z/(2 p).  The admissible beta = sqrt(A) are
the positive roots of a polynomial obtained by any of three equivalent
procedures:

  via_xi   propagate the closed three-term recurrence for the v-coefficients
           symbolically in beta and demand xi_p = 0;
  via_a    build xi backwards from the infinity-side coefficient chain and
           close the system at order p;
  via_b    the mirror construction from the zero-side chain.

Polynomials in beta are dense coefficient lists over fractions.Fraction
when Z is rational (Table-style exact results), else over floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .model import ProblemParams

__all__ = [
    "QuasiPolyProblem",
    "BetaPolynomial",
    "QuasiPolyResult",
    "xi_chain_from_a",
    "xi_chain_from_b",
    "beta_polynomial_via_xi",
    "solve_quasipoly",
    "validate_quasipoly",
]


@dataclass(frozen=True)
class QuasiPolyProblem:
    """Integer level p (so E = -Z**2/(4 p**2), mu = p) and angular momentum."""

    p: int
    l: int
    Z: float = 1.0

    def __post_init__(self):
        if self.p < 1:
            raise DomainError("p must be a positive integer")
        if self.l < 0:
            raise DomainError("l must be non-negative")
        if not self.Z > 0:
            raise DomainError("Z must be positive")

    @property
    def energy(self) -> float:
        return -float(self.Z) ** 2 / (4.0 * self.p * self.p)

    @property
    def alpha(self):
        return _ratio(self.Z, 2 * self.p)


def _exact(Z) -> bool:
    return isinstance(Z, (int, Fraction))


def _ratio(num, den):
    if _exact(num):
        return Fraction(num, den)
    return num / den


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient index = power of beta)

def _padd(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return out


def _pscale(p, s):
    return [c * s for c in p]


def _pshift(p, k):
    return [0] * k + list(p)


def _ptrim(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return list(p)


def _peval(p, x):
    acc = 0.0
    for c in reversed(p):
        acc = acc * x + float(c)
    return acc


@dataclass(frozen=True)
class BetaPolynomial:
    """Closure polynomial in beta whose positive roots give admissible A."""

    coefficients: tuple
    provenance: str

    @property
    def degree(self) -> int:
        return len(_ptrim(list(self.coefficients))) - 1

    def __call__(self, beta: float) -> float:
        return _peval(self.coefficients, beta)

    def positive_roots(self) -> list[float]:
        return _positive_roots(list(self.coefficients))

    def all_roots(self) -> list[complex]:
        c = np.array([float(x) for x in _ptrim(list(self.coefficients))])
        if len(c) < 2:
            return []
        return [complex(r) for r in np.polynomial.polynomial.polyroots(c)]


def _positive_roots(poly) -> list[float]:
    c = np.array([float(x) for x in _ptrim(poly)])
    if len(c) < 2:
        return []
    roots = np.polynomial.polynomial.polyroots(c)
    out = []
    for r in roots:
        if abs(r.imag) < 1e-9 * max(1.0, abs(r)) and r.real > 1e-9:
            out.append(_newton_polish(poly, float(r.real)))
    out.sort()
    # merge near-duplicates from the eigenvalue solver
    merged: list[float] = []
    for r in out:
        if not merged or abs(r - merged[-1]) > 1e-9 * max(1.0, abs(r)):
            merged.append(r)
    return merged


def _newton_polish(poly, x0, iters=60):
    dpoly = [i * poly[i] for i in range(1, len(poly))]
    x = x0
    for _ in range(iters):
        fx = _peval(poly, x)
        dfx = _peval(dpoly, x)
        if dfx == 0.0:
            break
        step = fx / dfx
        x -= step
        if abs(step) < 1e-15 * max(1.0, abs(x)):
            break
    return x


# ---------------------------------------------------------------------------
# the three procedures

def _infinity_chain_sym(p: int, l: int, Z, M: int):
    """Infinity-side coefficients a_m as polynomials in beta (A = beta**2)."""
    alpha = _ratio(Z, 2 * p)
    L = l * (l + 1)
    a = [[_one(Z)]]
    for m in range(1, M + 1):
        t = _pscale(a[m - 1], (m - p) * (m - 1 - p) - L)
        if m >= 3:
            t = _padd(t, _pscale(_pshift(a[m - 3], 2), -1))
        a.append(_pscale(t, -1 / (2 * alpha * m)))
    return a


def _zero_chain_sym(p: int, l: int, Z, M: int):
    """Zero-side coefficients scaled by beta**m: b_m = B_m(beta)/beta**m."""
    E = _ratio(-(Z * Z), 4 * p * p)
    L = l * (l + 1)
    B = [[_one(Z)]]
    for m in range(1, M + 1):
        t = _pscale(B[m - 1], m * (m - 1) - L)
        if m >= 2:
            t = _padd(t, _pscale(_pshift(B[m - 2], 1), Z))
        if m >= 3:
            t = _padd(t, _pscale(_pshift(B[m - 3], 2), E))
        B.append(_pscale(t, _ratio(-1, 2 * m)))
    return B


def _one(Z):
    return Fraction(1) if _exact(Z) else 1.0


def xi_chain_from_a(p: int, l: int, Z=1, beta: float | None = None):
    """v-coefficients from the infinity-side chain, plus the closure equation.

    With beta=None the xi are returned as polynomials in beta (coefficient
    lists) and the closure as a BetaPolynomial; with a numeric beta both are
    evaluated.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    a = _infinity_chain_sym(p, l, Z, p)
    xi: dict[int, list] = {}
    for k in range(p):
        t = list(a[k])
        for s in range(1, k + 1):
            fac = _ratio((-1) ** s, math.factorial(s))
            t = _padd(t, _pscale(_pshift(xi[p - 1 - k + s], s), -fac))
        xi[p - 1 - k] = t
    closure = list(a[p])
    for s in range(1, p + 1):
        fac = _ratio((-1) ** s, math.factorial(s))
        closure = _padd(closure, _pscale(_pshift(xi[s - 1], s), -fac))
    xis = [xi[j] for j in range(p)]
    poly = BetaPolynomial(tuple(_ptrim(closure)), provenance="via_a")
    if beta is None:
        return xis, poly
    return [_peval(x, beta) for x in xis], poly(beta)


def xi_chain_from_b(p: int, l: int, Z=1, beta: float | None = None):
    """v-coefficients from the zero-side chain, plus the closure equation.

    Internally every xi_k is scaled by beta**k so all algebra stays
    polynomial; the closure is returned cleared of denominators.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    alpha = _ratio(Z, 2 * p)
    B = _zero_chain_sym(p, l, Z, p)
    xi_hat: dict[int, list] = {}  # xi_k * beta**k
    for k in range(p):
        t = list(B[k])
        for s in range(1, k + 1):
            fac = (-alpha) ** s / math.factorial(s)
            t = _padd(t, _pscale(_pshift(xi_hat[k - s], s), -fac))
        xi_hat[k] = t
    closure = list(B[p])
    for s in range(1, p + 1):
        fac = (-alpha) ** s / math.factorial(s)
        closure = _padd(closure, _pscale(_pshift(xi_hat[p - s], s), -fac))
    poly = BetaPolynomial(tuple(_ptrim(closure)), provenance="via_b")
    if beta is None:
        return [xi_hat[j] for j in range(p)], poly
    vals = [_peval(xi_hat[j], beta) / beta**j for j in range(p)]
    return vals, poly(beta)


def beta_polynomial_via_xi(p: int, l: int, Z=1) -> BetaPolynomial:
    """Closure polynomial from the closed v-coefficient recurrence.

    xi_0 = 1 and
    -2 beta j xi_j = (j(j-1) - l(l+1) - 2 alpha beta) xi_{j-1}
                     + (Z - 2 alpha (j-1)) xi_{j-2};
    the numerator of xi_p (with xi_j = N_j(beta)/beta**j) is returned.  Its
    degree follows from the propagation and is never assumed.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    alpha = _ratio(Z, 2 * p)
    L = l * (l + 1)
    two_alpha = 2 * alpha
    N = [[_one(Z)], _padd([_ratio(L, 2)], _pshift([alpha], 1))]
    for j in range(2, p + 1):
        t1 = _padd(
            _pscale(N[j - 1], j * (j - 1) - L),
            _pscale(_pshift(N[j - 1], 1), -two_alpha),
        )
        t2 = _pscale(_pshift(N[j - 2], 1), Z - two_alpha * (j - 1))
        N.append(_pscale(_padd(t1, t2), _ratio(-1, 2 * j)))
    return BetaPolynomial(tuple(_ptrim(N[p])), provenance="via_xi")


def xi_values(p: int, l: int, Z: float, beta: float, extra: int = 0) -> list[float]:
    """Numeric xi_0..xi_{p-1+extra} from the closed recurrence at given beta."""
    alpha = float(Z) / (2 * p)
    L = l * (l + 1)
    xi = [1.0, L / (2.0 * beta) + alpha]
    for j in range(2, p + extra):
        t = (j * (j - 1) - L - 2.0 * alpha * beta) * xi[j - 1]
        t += (float(Z) - 2.0 * alpha * (j - 1)) * xi[j - 2]
        xi.append(t / (-2.0 * beta * j))
    return xi[: p + extra]


@dataclass(frozen=True)
class QuasiPolyResult:
    """Admissible beta roots with v-coefficients; rejected roots kept aside."""

    p: int
    l: int
    Z: float
    E: float
    beta_roots: tuple[float, ...]
    A_values: tuple[float, ...]
    xi: tuple[tuple[float, ...], ...]
    rejected_roots: tuple[complex, ...]
    note: str = ""


def solve_quasipoly(p: int, l: int, Z=1) -> QuasiPolyResult:
    """Positive beta roots by companion-matrix eigenvalues plus Newton polish.

    The three procedures are cross-checked against each other; only real
    beta > 0 roots are reported as A values, everything else lands in
    rejected_roots.  p = 1 has no positive root for any l >= 0 (the closure
    forces beta = -l(l+1)/(2 alpha) <= 0) and returns an empty result.
    """
    prob = QuasiPolyProblem(p=p, l=l, Z=float(Z))
    poly = beta_polynomial_via_xi(p, l, Z)
    if p == 1:
        return QuasiPolyResult(
            p=p,
            l=l,
            Z=float(Z),
            E=prob.energy,
            beta_roots=(),
            A_values=(),
            xi=(),
            rejected_roots=tuple(poly.all_roots()),
            note=(
                "p = 1 admits no quasi-polynomial state: the closure forces "
                "beta = -l(l+1)/(2 alpha) <= 0"
            ),
        )
    roots = poly.positive_roots()
    _, poly_a = xi_chain_from_a(p, l, Z)
    _, poly_b = xi_chain_from_b(p, l, Z)
    for other in (poly_a, poly_b):
        other_roots = other.positive_roots()
        if len(other_roots) != len(roots) or any(
            abs(x - y) > 1e-10 * max(1.0, abs(x)) for x, y in zip(roots, other_roots)
        ):
            raise DomainError(
                f"procedure {other.provenance} disagrees with via_xi: "
                f"{other_roots} vs {roots}"
            )
    accepted = []
    xis = []
    for r in roots:
        accepted.append(r)
        xis.append(tuple(xi_values(p, l, float(Z), r)))
    rejected = tuple(
        r
        for r in poly.all_roots()
        if not any(abs(r - a) < 1e-8 * max(1.0, abs(a)) for a in accepted)
    )
    return QuasiPolyResult(
        p=p,
        l=l,
        Z=float(Z),
        E=prob.energy,
        beta_roots=tuple(accepted),
        A_values=tuple(r * r for r in accepted),
        xi=tuple(xis),
        rejected_roots=rejected,
    )


@dataclass(frozen=True)
class QuasiPolyValidation:
    beta: float
    A: float
    ode_residual: float
    shooting_mismatch: float
    node_count: int
    physical: bool


def _closed_form_residual(p, l, Z, E, beta, xi, z_samples):
    """Residual of the scaled closed form h = z*v(z) in the reduced equation.

    With w = exp(g) h, g = -alpha z - beta/z, the equation becomes
    z^2 [(g'' + g'^2) h + 2 g' h' + h''] + B(z) h = 0, which is free of
    exponentials and safe to evaluate anywhere.
    """
    alpha = float(Z) / (2 * p)
    L = l * (l + 1)
    worst = 0.0
    v = np.polynomial.Polynomial(list(xi))
    vp = v.deriv()
    vpp = vp.deriv()
    for z in z_samples:
        h = z * v(z)
        hp = v(z) + z * vp(z)
        hpp = 2.0 * vp(z) + z * vpp(z)
        gp = -alpha + beta / z**2
        gpp = -2.0 * beta / z**3
        lhs = z * z * ((gpp + gp * gp) * h + 2.0 * gp * hp + hpp)
        rhs = (-beta * beta / z**2 - L + float(Z) * z + E * z * z) * h
        num = abs(lhs + rhs)
        den = max(abs(lhs), abs(rhs), 1e-300)
        worst = max(worst, num / den)
    return worst


def validate_quasipoly(result: QuasiPolyResult, params: ProblemParams | None = None):
    """Check each root: ODE residual, shooting mismatch, node count.

    Returns a list of QuasiPolyValidation, one per accepted root; a root is
    flagged unphysical when either residual check fails.
    """
    from .shooting import ShootingConfig, mismatch as shooting_mismatch

    reports = []
    for beta, xi in zip(result.beta_roots, result.xi):
        A = beta * beta
        run_params = params if params is not None else ProblemParams(A=A, Z=result.Z, l=result.l)
        z_samples = np.geomspace(max(0.05, beta / 50.0), 3.0 * max(beta, 1.0), 20)
        resid = _closed_form_residual(result.p, result.l, result.Z, result.E, beta, xi, z_samples)
        mm = abs(shooting_mismatch(result.E, run_params, ShootingConfig()))
        v_roots = np.polynomial.Polynomial(list(xi)).roots() if len(xi) > 1 else []
        nodes = sum(
            1
            for r in v_roots
            if abs(r.imag) < 1e-8 * max(1.0, abs(r)) and r.real > 0.0
        )
        reports.append(
            QuasiPolyValidation(
                beta=beta,
                A=A,
                ode_residual=resid,
                shooting_mismatch=mm,
                node_count=int(nodes),
                physical=bool(resid < 1e-10 and mm < 1e-9),
            )
        )
    return reports
