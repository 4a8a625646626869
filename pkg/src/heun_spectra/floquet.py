"""Floquet solutions, index search, and the two-point connection problem.

A Floquet solution is w = z**nu * sum_n c_n z**n with a two-sided Laurent
series converging on the punctured plane.  The coefficients obey the
fourth-order recurrence

    -A c_{n+2} + ((n+nu)(n-1+nu) - l(l+1)) c_n + Z c_{n-1} + E c_{n-2} = 0.

As n -> +inf the recurrence has two solutions decaying like (+/-alpha/n)**n
(and two growing ones); as n -> -inf two decay like (+/-beta/|n|)**|n|.  A
square-summable two-sided solution exists exactly when the 2-dimensional
decaying subspaces from the two sides intersect, a single scalar condition
on nu realized here as a 4x4 matching determinant built from backward-
recurrence tail states.

One numerical trap shapes the implementation: on the plus side the Coulomb
term splits the two decaying solutions by an algebraic factor n**(2 mu), so
naive backward recurrence collapses any seed pair onto the minimal solution
polynomially fast (catastrophically so for weakly bound states, where mu
reaches 5).  The running pair is therefore re-orthonormalized at every
backward step, which keeps the spanned subspace exact and the basis
well-conditioned at the matching rows.  Laurent coefficients are extracted
separately by banded inverse iteration on the truncated recurrence matrix,
which is immune to the same collapse.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._ivp import integrate_second_order
from .errors import (
    AnnulusError,
    AsymptoticRegimeError,
    DegeneracyError,
    DomainError,
    IndexSearchError,
    SolverError,
)
from .model import ProblemParams, derive_exponents
from .series import (
    asym_coeffs_infinity,
    asym_coeffs_zero,
    choose_z_far,
    choose_z_near,
    eval_asymptotic,
)

__all__ = [
    "TailBasis",
    "FloquetSolution",
    "ConnectionResult",
    "tail_basis",
    "floquet_determinant",
    "find_indices",
    "laurent_coefficients",
    "eval_floquet",
    "connection_matrix",
    "eigen_connection",
]

_MATCH_ROWS = (-2, -1, 0, 1)  # consecutive indices where the two sides are matched
_SEED_BUFFER = 12  # backward-recurrence start beyond the returned window


def _check_solver_params(params: ProblemParams, E: float) -> None:
    if params.A <= 0.0:
        raise DomainError("Floquet machinery requires A > 0")
    if E == 0.0:
        raise DomainError("Floquet machinery requires E != 0")


def default_window(params: ProblemParams, E: float) -> int:
    """Window half-width at which the recurrence tails are asymptotic."""
    return max(20, math.ceil(10.0 * math.sqrt(max(params.A, abs(E), params.Z))))


def _orthonormalize_pair(s1, s2, side):
    """Gram-Schmidt on two 4-window states, overflow-safe (scale by max first)."""
    m = max(abs(v) for v in s1)
    if m == 0.0 or math.isinf(m) or math.isnan(m):
        raise SolverError(f"{side}-side tail state degenerated")
    s1 = tuple(v / m for v in s1)
    n1 = math.sqrt(sum(abs(v) ** 2 for v in s1))
    s1 = tuple(v / n1 for v in s1)
    m = max(abs(v) for v in s2)
    if m == 0.0 or math.isinf(m) or math.isnan(m):
        raise SolverError(f"{side}-side tail pair degenerated")
    s2 = tuple(v / m for v in s2)
    dot = sum(u.conjugate() * v for u, v in zip(s1, s2))
    s2 = tuple(v - dot * u for u, v in zip(s1, s2))
    n2 = math.sqrt(sum(abs(v) ** 2 for v in s2))
    if n2 == 0.0:
        raise SolverError(f"{side}-side tail pair degenerated")
    return s1, tuple(v / n2 for v in s2)


def _tail_states(nu: complex, E: float, params: ProblemParams, N: int, side: str):
    """Final 4-windows of the two decaying solutions at the matching rows.

    Returns a 4x2 complex array: rows are values at _MATCH_ROWS, columns the
    two basis solutions, orthonormalized along the recursion.
    """
    L = params.centrifugal
    A, Z = params.A, params.Z
    M = N + _SEED_BUFFER
    nu = complex(nu)
    if side == "plus":
        # state (a, b, c, d) = values at (n+2, n+1, n, n-1)
        a1, b1, c1, d1 = 0j, 0j, 1 + 0j, 0j
        a2, b2, c2, d2 = 0j, 0j, 0j, 1 + 0j
        for n in range(M, -1, -1):
            P = (n + nu) * (n - 1 + nu) - L
            e1 = (A * a1 - P * c1 - Z * d1) / E
            e2 = (A * a2 - P * c2 - Z * d2) / E
            a1, b1, c1, d1 = b1, c1, d1, e1
            a2, b2, c2, d2 = b2, c2, d2, e2
            (a1, b1, c1, d1), (a2, b2, c2, d2) = _orthonormalize_pair(
                (a1, b1, c1, d1), (a2, b2, c2, d2), "plus"
            )
        # state is now (c[1], c[0], c[-1], c[-2]); reorder to _MATCH_ROWS
        return np.array([[d1, d2], [c1, c2], [b1, b2], [a1, a2]], dtype=complex)
    if side == "minus":
        # state (a, b, c, d) = values at (n-2, n-1, n, n+1)
        a1, b1, c1, d1 = 0j, 0j, 1 + 0j, 0j
        a2, b2, c2, d2 = 0j, 0j, 0j, 1 + 0j
        for n in range(-M, 0):
            P = (n + nu) * (n - 1 + nu) - L
            e1 = (P * c1 + Z * b1 + E * a1) / A
            e2 = (P * c2 + Z * b2 + E * a2) / A
            a1, b1, c1, d1 = b1, c1, d1, e1
            a2, b2, c2, d2 = b2, c2, d2, e2
            (a1, b1, c1, d1), (a2, b2, c2, d2) = _orthonormalize_pair(
                (a1, b1, c1, d1), (a2, b2, c2, d2), "minus"
            )
        # state is now (c[-2], c[-1], c[0], c[1])
        return np.array([[a1, a2], [b1, b2], [c1, c2], [d1, d2]], dtype=complex)
    raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")


@dataclass(frozen=True)
class TailBasis:
    """Two recurrence solutions decaying in one index direction.

    values[s, n - n_lo] is solution s at index n; each solution is
    normalized to unit maximum magnitude over the stored range.  The pair
    is kept independent by re-orthonormalization during the backward
    recursion; entries many orders below a member's peak carry the noise
    floor of that mixing.
    """

    side: str
    n_lo: int
    n_hi: int
    values: np.ndarray

    def at(self, n: int) -> np.ndarray:
        return self.values[:, n - self.n_lo]


def tail_basis(nu: complex, E: float, params: ProblemParams, N: int, side: str) -> TailBasis:
    """Basis of the decaying subspace on one side, by backward recurrence.

    Seeding starts _SEED_BUFFER indices beyond the window so contamination
    by the growing solutions (suppressed like alpha*beta/n**2 per step) dies
    before the window is reached; the running pair is re-orthonormalized at
    each step, with the same transformations applied to the stored history
    so both returned sequences are genuine recurrence solutions.
    """
    _check_solver_params(params, E)
    if N < 4:
        raise DomainError("window half-width N must be >= 4")
    L = params.centrifugal
    A, Z = params.A, params.Z
    M = N + _SEED_BUFFER
    nu = complex(nu)

    if side == "plus":
        n_lo, n_hi = -4, M + 2
        size = n_hi - n_lo + 1
        v1 = np.zeros(size, dtype=complex)
        v2 = np.zeros(size, dtype=complex)
        v1[M - n_lo] = 1.0
        v2[M - 1 - n_lo] = 1.0
        for n in range(M, n_lo + 1, -1):
            P = (n + nu) * (n - 1 + nu) - L
            i = n - n_lo
            v1[i - 2] = (A * v1[i + 2] - P * v1[i] - Z * v1[i - 1]) / E
            v2[i - 2] = (A * v2[i + 2] - P * v2[i] - Z * v2[i - 1]) / E
            s1 = np.linalg.norm(v1[i - 2 : i + 2])
            if s1 == 0.0:
                raise SolverError("plus-side tail state vanished")
            v1 /= s1
            win1 = v1[i - 2 : i + 2]
            dot = np.vdot(win1, v2[i - 2 : i + 2])
            v2 -= dot * v1
            s2 = np.linalg.norm(v2[i - 2 : i + 2])
            if s2 == 0.0:
                raise SolverError("plus-side tail pair degenerated")
            v2 /= s2
    elif side == "minus":
        n_lo, n_hi = -M - 2, 4
        size = n_hi - n_lo + 1
        v1 = np.zeros(size, dtype=complex)
        v2 = np.zeros(size, dtype=complex)
        v1[-M - n_lo] = 1.0
        v2[-M + 1 - n_lo] = 1.0
        for n in range(-M, n_hi - 1):
            P = (n + nu) * (n - 1 + nu) - L
            i = n - n_lo
            v1[i + 2] = (P * v1[i] + Z * v1[i - 1] + E * v1[i - 2]) / A
            v2[i + 2] = (P * v2[i] + Z * v2[i - 1] + E * v2[i - 2]) / A
            s1 = np.linalg.norm(v1[i - 1 : i + 3])
            if s1 == 0.0:
                raise SolverError("minus-side tail state vanished")
            v1 /= s1
            dot = np.vdot(v1[i - 1 : i + 3], v2[i - 1 : i + 3])
            v2 -= dot * v1
            s2 = np.linalg.norm(v2[i - 1 : i + 3])
            if s2 == 0.0:
                raise SolverError("minus-side tail pair degenerated")
            v2 /= s2
    else:
        raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")

    out = np.vstack([v1, v2])
    for s in range(2):
        peak = np.max(np.abs(out[s]))
        if peak == 0.0 or not np.isfinite(peak):
            raise SolverError(f"tail basis recursion degenerated on side {side!r}")
        out[s] /= peak
    return TailBasis(side=side, n_lo=n_lo, n_hi=n_hi, values=out)


def floquet_determinant(nu: complex, E: float, params: ProblemParams, N: int) -> complex:
    """Column-normalized determinant of the two-sided matching matrix.

    Columns are the two plus-side and two minus-side basis solutions at the
    four consecutive central indices; the determinant vanishes exactly when
    a two-sided decaying (Floquet) solution exists at this nu.
    """
    _check_solver_params(params, E)
    if N < 4:
        raise DomainError("window half-width N must be >= 4")
    plus = _tail_states(nu, E, params, N, "plus")
    minus = _tail_states(nu, E, params, N, "minus")
    mat = np.hstack([plus, minus])
    for j in range(4):
        nrm = np.linalg.norm(mat[:, j])
        if nrm == 0.0:
            raise SolverError("tail basis vanished at the matching rows")
        mat[:, j] /= nrm
    return complex(np.linalg.det(mat))


def _canonical_index(nu: complex) -> complex:
    """Representative with Re in [0, 1/2] and Im >= 0.

    Valid companions of a root are -nu and conj(nu) (real coefficients),
    modulo integers.
    """
    re = nu.real % 1.0
    nu = complex(re, nu.imag)
    if re > 0.5 + 1e-12:
        nu = complex(1.0 - re, -nu.imag)
    if nu.imag < 0:
        nu = nu.conjugate()
    if abs(nu.real) < 2e-10:
        nu = complex(0.0, nu.imag)
    if abs(nu.imag) < 2e-10:
        nu = complex(nu.real, 0.0)
    if abs(nu.real - 0.5) < 2e-10:
        nu = complex(0.5, nu.imag)
    return nu


def _pair_index(nu1: complex) -> complex:
    """Companion index: -nu1, or conj(nu1) = -nu1 + 1 when Re nu1 = 1/2."""
    if abs(nu1.real - 0.5) < 1e-9:
        return nu1.conjugate()
    return -nu1


def _newton_index(f, nu0, tol=1e-13, maxit=40):
    """Damped 2D real Newton on the complex determinant.

    The determinant is smooth but not holomorphic in nu (orthonormalization
    introduces norms), so the iteration treats (Re nu, Im nu) as real
    unknowns with a finite-difference Jacobian.
    """
    nu = complex(nu0)
    fval = f(nu)
    for _ in range(maxit):
        h = 1e-7 * max(1.0, abs(nu))
        fx = (f(nu + h) - fval) / h
        fy = (f(nu + 1j * h) - fval) / h
        a, b = fx.real, fy.real
        c, d = fx.imag, fy.imag
        det = a * d - b * c
        if det == 0.0:
            break
        dx = (-fval.real * d + fval.imag * b) / det
        dy = (fval.real * c - fval.imag * a) / det
        step = complex(dx, dy)
        cap = 0.3 * max(1.0, abs(nu))  # polish only; roots lie near the seeds
        if abs(step) > cap:
            step *= cap / abs(step)
        trial = nu + step
        ftrial = f(trial)
        shrink = 0
        while abs(ftrial) > 2.0 * abs(fval) and shrink < 5:
            step *= 0.5
            trial = nu + step
            ftrial = f(trial)
            shrink += 1
        nu, fval = trial, ftrial
        if abs(step) < tol * max(1.0, abs(nu)):
            break
    return nu, abs(fval)


def _seed_lines(base: int = 0):
    """Search lines at integer offset `base` from the fundamental strip.

    Near-degenerate indices (nu within ~1e-5 of 0 or 1/2) are numerically
    invisible to the determinant in the centered labeling because the +/-
    pair collides there, but resolve cleanly at an integer-shifted labeling.
    """
    t_geo = np.geomspace(1e-4, 0.05, 7)
    t_lin = np.arange(0.05, 2.75, 0.05)
    t_axis = np.concatenate([t_geo, t_lin])
    t_tiny = np.geomspace(1e-8, 0.6, 30)
    if base == 0:
        real_line = [complex(t, 0.0) for t in np.geomspace(1e-4, 0.62, 26)]
        imag_line = [complex(0.0, t) for t in t_axis]
        half_line = [complex(0.5, t) for t in t_axis]
        return [real_line, imag_line, half_line]
    real_plus = [complex(base + t, 0.0) for t in t_tiny]
    real_minus = [complex(base - t, 0.0) for t in t_tiny]
    imag_line = [complex(base, t) for t in np.geomspace(1e-8, 2.0, 30)]
    half_line = [complex(base + 0.5, t) for t in np.geomspace(1e-8, 2.0, 30)]
    return [real_plus, real_minus, imag_line, half_line]


def _locate_index_raw(E: float, params: ProblemParams, N: int) -> tuple[complex, float]:
    """Best determinant root in whatever labeling resolves it.

    First pass scans the fundamental strip; if nothing converges (the
    near-degenerate collision regime), integer-shifted labelings are tried,
    where the tiny index separates cleanly from its companion.
    """
    f = lambda nu: floquet_determinant(nu, E, params, N)
    diagnostics = []

    def sweep(bases):
        roots: list[tuple[complex, float]] = []
        for base in bases:
            for line in _seed_lines(base):
                vals = np.array([abs(f(nu)) for nu in line])
                diagnostics.append(float(vals.min()))
                cands = []
                for i in range(len(line)):
                    left = vals[i - 1] if i > 0 else math.inf
                    right = vals[i + 1] if i + 1 < len(line) else math.inf
                    if vals[i] <= left and vals[i] <= right:
                        cands.append(line[i])
                for seed in cands:
                    nu, resid = _newton_index(f, seed)
                    if resid > 1e-8:
                        continue
                    if abs(nu.imag) > 6.0 or nu.real < -1.5 or nu.real > 6.5:
                        continue
                    for k, (known, known_resid) in enumerate(roots):
                        if abs(_canonical_index(nu) - _canonical_index(known)) < 1e-7:
                            if resid < known_resid:
                                roots[k] = (nu, resid)
                            break
                    else:
                        roots.append((nu, resid))
            if roots:
                break
        return roots

    roots = sweep([0])
    if not roots:
        roots = sweep([1, 2, 3, 4])
    if not roots:
        raise IndexSearchError(
            "index search failed: no determinant root on the seed lines "
            f"(per-line minimum |det|: {diagnostics})"
        )
    roots.sort(key=lambda r: r[1])
    return roots[0]


def find_indices(E: float, params: ProblemParams, N: int | None = None) -> tuple[complex, complex]:
    """Locate the Floquet index pair (nu1, nu2) at given E < 0.

    Newton iteration on the matching determinant, seeded on the three lines
    where the indices of a real-parameter problem can lie: real nu,
    imaginary nu, and 1/2 + imaginary (integer-shifted copies serve the
    near-degenerate regime).  nu1 is reported with Re in [0, 1/2] and
    Im >= 0; nu2 is -nu1, or conj(nu1) when Re nu1 = 1/2.
    """
    if not E < 0.0:
        raise DomainError(f"index search requires E < 0, got {E}")
    _check_solver_params(params, E)
    if N is None:
        N = default_window(params, E)
    raw, _ = _locate_index_raw(E, params, N)
    nu1 = _canonical_index(raw)
    return nu1, _pair_index(nu1)


def _companion_raw(raw: complex) -> complex:
    """The other member of the index pair in the same labeling chart."""
    if abs(raw.imag) > 1e-9:
        return raw.conjugate()
    return complex(2.0 * round(raw.real) - raw.real, 0.0)


@dataclass(frozen=True)
class FloquetSolution:
    """Two-sided Laurent solution w = z**nu sum c_n z**n, c_0 = 1."""

    nu: complex
    coefficients: np.ndarray  # index n = -N .. N
    N: int
    params: ProblemParams
    E: float

    def coefficient(self, n: int) -> complex:
        if abs(n) > self.N:
            raise IndexError(f"coefficient index {n} outside window [-{self.N}, {self.N}]")
        return complex(self.coefficients[n + self.N])

    def as_dict(self) -> dict[int, complex]:
        return {n - self.N: complex(c) for n, c in enumerate(self.coefficients)}

    def recurrence_residuals(self) -> np.ndarray:
        """Residual of the defining recurrence at each interior index.

        Each row is normalized by its largest participating term.
        """
        p = self.params
        L = p.centrifugal
        c = lambda n: self.coefficients[n + self.N]
        out = []
        for n in range(-self.N + 2, self.N - 2):
            terms = np.array(
                [
                    -p.A * c(n + 2),
                    ((n + self.nu) * (n - 1 + self.nu) - L) * c(n),
                    p.Z * c(n - 1),
                    self.E * c(n - 2),
                ]
            )
            scale = np.max(np.abs(terms))
            out.append(abs(np.sum(terms)) / scale if scale > 0 else 0.0)
        return np.array(out)


def _truncated_recurrence_bands(nu, E, params, half):
    """Banded (l=2, u=2) matrix of recurrence rows n = -half..half, row-scaled."""
    L = params.centrifugal
    A, Z = params.A, params.Z
    size = 2 * half + 1
    ns = np.arange(-half, half + 1)
    P = (ns + nu) * (ns - 1 + nu) - L
    ab = np.zeros((5, size), dtype=complex)
    ab[0, 2:] = -A  # column j = row + 2
    ab[2, :] = P
    ab[3, : size - 1] = Z  # column j = row - 1
    ab[4, : size - 2] = E  # column j = row - 2
    scale = 1.0 / np.maximum(np.abs(P), max(A, abs(E), Z, 1.0))
    ab[0, 2:] *= scale[:-2]
    ab[2, :] *= scale
    ab[3, : size - 1] *= scale[1:]
    ab[4, : size - 2] *= scale[2:]
    return ab


def _banded_null_vector(ab):
    """Null vector of a nearly singular banded matrix by inverse iteration."""
    from scipy.linalg import solve_banded

    size = ab.shape[1]
    x = np.zeros(size, dtype=complex)
    x[size // 2] = 1.0
    for _ in range(3):
        try:
            x = solve_banded((2, 2), ab, x)
        except np.linalg.LinAlgError:
            jitter = ab.copy()
            jitter[2, :] += 1e-14
            x = solve_banded((2, 2), jitter, x)
        x /= np.max(np.abs(x))
    return x


def _banded_apply(ab, x):
    size = ab.shape[1]
    y = np.zeros(size, dtype=complex)
    y += ab[2, :] * x
    y[:-2] += ab[0, 2:] * x[2:]
    y[1:] += ab[3, :-1] * x[:-1]
    y[2:] += ab[4, :-2] * x[:-2]
    return y


def laurent_coefficients(
    nu: complex, E: float, params: ProblemParams, N: int | None = None
) -> FloquetSolution:
    """The two-sided decaying recurrence solution at a determinant root.

    Computed as the null vector of the truncated recurrence matrix (zero
    boundary beyond the seed buffer) by banded inverse iteration; the window
    doubles until both tails have decayed below 1e-12 of the peak.
    """
    _check_solver_params(params, E)
    nu = complex(nu)
    n_win = N if N is not None else default_window(params, E)
    for _ in range(6):
        half = n_win + _SEED_BUFFER
        ab = _truncated_recurrence_bands(nu, E, params, half)
        x = _banded_null_vector(ab)
        resid = np.max(np.abs(_banded_apply(ab, x))) / np.max(np.abs(x))
        if resid > 1e-5:
            raise DomainError(
                f"nu={nu} is not an index here (truncated-recurrence null "
                f"residual {resid:.2e})"
            )
        # second independent direction surviving inverse iteration means a
        # degenerate (non-simple) null space
        rng_probe = np.cos(0.7 * np.arange(len(x))) + 0.3
        y = rng_probe - (np.vdot(x, rng_probe) / np.vdot(x, x)) * x
        from scipy.linalg import solve_banded

        try:
            y = solve_banded((2, 2), ab, y)
        except np.linalg.LinAlgError:
            y = None
        if y is not None:
            y = y - (np.vdot(x, y) / np.vdot(x, x)) * x
            ny = np.max(np.abs(y))
            if ny > 0:
                y /= ny
                if np.max(np.abs(_banded_apply(ab, y))) < 1e-8:
                    raise DegeneracyError(
                        "two-sided null space is not one-dimensional at this index"
                    )
        coeff = x[_SEED_BUFFER : _SEED_BUFFER + 2 * n_win + 1]
        peak = np.max(np.abs(coeff))
        c0 = coeff[n_win]
        if abs(c0) < 1e-10 * peak:
            raise DegeneracyError("c_0 vanishes; the c_0 = 1 normalization fails here")
        if max(abs(coeff[0]), abs(coeff[-1])) < 1e-12 * peak:
            return FloquetSolution(
                nu=nu,
                coefficients=coeff / c0,
                N=n_win,
                params=params,
                E=E,
            )
        n_win *= 2
    raise SolverError("two-sided decay not reached; window growth exhausted")


def eval_floquet(sol: FloquetSolution, z: float) -> tuple[complex, complex]:
    """Evaluate w and w' from the Laurent window at real z > 0.

    Requires the truncated tails to be negligible at z (reliable annulus).
    """
    if not z > 0.0:
        raise DomainError("z must be positive")
    n = np.arange(-sol.N, sol.N + 1, dtype=float)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        zn = np.power(z, n)
        terms = sol.coefficients * zn
    bad = ~np.isfinite(terms)
    if np.any(bad):
        if np.max(np.abs(sol.coefficients[bad])) > 1e-100:
            raise SolverError("overflow while evaluating the Laurent series")
        terms = np.where(bad, 0.0, terms)
    total = float(np.sum(np.abs(terms)))
    tail = abs(terms[0]) + abs(terms[-1])
    if total == 0.0 or tail > 1e-10 * total:
        raise AnnulusError(
            f"annulus too narrow at z={z:g} (tail fraction "
            f"{tail / total if total else math.inf:.2e}); increase N"
        )
    znu = cmath.exp(sol.nu * math.log(z))
    w = znu * np.sum(terms)
    wp = znu / z * np.sum((n + sol.nu) * terms)
    return complex(w), complex(wp)


def _annulus_window(x: float, tol: float = 1e-12) -> int:
    """Smallest N with x**N / N! <= tol * exp(x)."""
    target = math.log(tol) + x
    n = 8
    while n * math.log(max(x, 1e-300)) - math.lgamma(n + 1) > target:
        n += 1
        if n > 100000:
            raise SolverError("annulus window estimate diverged")
    return n


@dataclass(frozen=True)
class ConnectionResult:
    """Physical (both-ends recessive) combination at an eigenvalue.

    zeta1, zeta2 weight the two Floquet solutions; a0 and b0 are the leading
    coefficients of the recessive expansions at infinity and zero in the
    normalization c_0 = 1 for both Floquet solutions.  Phase convention:
    |zeta1| = 1 with Im zeta1 > 0 and zeta2 = -conj(zeta1) for the
    conjugate-pair index families; zeta1 = 1 with real zeta2 when the index
    is real.
    """

    E: float
    nu1: complex
    nu2: complex
    zeta1: complex
    zeta2: complex
    a0: complex
    b0: complex
    floquet1: FloquetSolution
    floquet2: FloquetSolution
    residual: float


class _ConnectionWorkspace:
    """Caches nu, window size and anchor points across E evaluations."""

    def __init__(self, params, N=None, series_terms=72, strict_tol=3e-12):
        if params.A <= 0.0:
            raise DomainError("connection solver requires A > 0")
        self.params = params
        self.n_user = N
        self.series_terms = series_terms
        self.strict_tol = strict_tol
        self._nu = None
        self._nu_by_e: dict[float, complex] = {}
        self._window = 0
        self._det_window = None
        # Frozen geometry keeps det(E) reproducible during root refinement:
        # otherwise window ratchets or a projection-point jump between two
        # evaluations of the same E can flip the sign of a near-zero value.
        self._frozen = False
        self._zproj_ratio = None

    def _indices(self, E):
        """Raw-chart index at E, warm-started from the previous energy.

        Cached per exact E so repeated evaluations of the same energy (root
        bracketing) see an identical index, keeping det(E) reproducible.
        """
        cached = self._nu_by_e.get(E)
        if cached is not None:
            return cached
        raw = None
        if self._nu is not None:
            f = lambda nu: floquet_determinant(nu, E, self.params, self._det_window)
            nu, resid = _newton_index(f, self._nu)
            if resid < 1e-8 and abs(nu - self._nu) < 0.2:
                raw = nu
        if raw is None:
            raw, _ = _locate_index_raw(E, self.params, self._det_window)
        self._nu = raw
        self._nu_by_e[E] = raw
        return raw

    def _prepare(self, E):
        params = self.params
        ex = derive_exponents(params, E)
        z_far = choose_z_far(params, E, self.series_terms, self.strict_tol)
        z_near = choose_z_near(params, E, self.series_terms, self.strict_tol)
        if not self._frozen:
            self._det_window = max(self.n_user or 0, default_window(params, E))
            need = max(
                self._det_window,
                _annulus_window(ex.alpha * z_far) + 4,
                _annulus_window(ex.beta / z_near) + 4,
            )
            if need > self._window:
                self._window = need
        return z_near, z_far

    def _far_projection_point(self, E, u_rec, sols, z_far, ex):
        """Pick the infinity-side projection point by an empirical error score.

        Evaluating the Laurent sum of a recessive-dominated solution at large
        alpha*z loses exp-style precision to term cancellation (amplified by
        z**(2 mu) near integer mu), while small alpha*z inflates the truncated
        series' failure to reject recessive content.  Both effects are
        measurable: score = |u_rec| * eps * sum|c_n z^n|  +  |w| * err_abs *
        (1 + mu/(alpha z)), minimized over a geometric ladder of candidates.
        """
        best_z, best_score = z_far, math.inf
        z = z_far
        for _ in range(17):
            if ex.alpha * z < 3.0:
                break
            try:
                r = eval_asymptotic(u_rec, z, 0.05)
            except (AsymptoticRegimeError, DomainError):
                z *= 0.82
                continue
            try:
                envelope = 0.0
                wmag = 0.0
                for sol in sols:
                    w, _ = eval_floquet(sol, z)
                    n = np.arange(-sol.N, sol.N + 1, dtype=float)
                    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                        t = np.abs(sol.coefficients * np.power(z, n))
                    envelope = max(envelope, float(np.sum(t[np.isfinite(t)])))
                    wmag = max(wmag, abs(w))
            except (AnnulusError, SolverError):
                z *= 0.82
                continue
            urec_mag = abs(r.value)
            score = urec_mag * 2.2e-16 * envelope + wmag * r.error_estimate * (
                1.0 + ex.mu / (ex.alpha * z)
            )
            if score < best_score:
                best_score, best_z = score, z
            z *= 0.82
        return best_z

    def _laurent_labeled(self, nu_label, E):
        """Laurent solution at an index, retrying integer-shifted labelings.

        The c_0 = 1 anchor can vanish in an unlucky labeling (the small-A
        solution starts at z**(l+1), so the centered window may anchor below
        its natural support); shifting the labeling moves the anchor.
        """
        last = None
        for shift in (0, 1, -1, 2, -2, 3, -3):
            try:
                return laurent_coefficients(nu_label + shift, E, self.params, self._window)
            except DegeneracyError as exc:
                if "c_0 vanishes" not in str(exc):
                    raise
                last = exc
        raise last

    def state(self, E):
        # plain float throughout: np.float64 can flip borderline iteration
        # counts in the adaptive anchor loops, breaking reproducibility of
        # det(E) between bracketing and refinement
        E = float(E)
        params = self.params
        z_near, z_far = self._prepare(E)
        raw = self._indices(E)
        nu1 = _canonical_index(raw)
        nu2 = _pair_index(nu1)
        delta = nu2 - nu1
        gap = delta + round(-delta.real)
        if abs(gap) < 1e-8:
            raise DegeneracyError(
                f"index pair degenerate (gap {abs(gap):.1e}); the second "
                "solution carries a logarithm, outside this solver's scope"
            )
        # Near-degenerate index pairs (nu close to 0 or 1/2 mod 1) make the
        # two Floquet solutions nearly identical: construct them in the raw
        # (integer-shifted) chart where the determinant resolves them, and
        # use a difference basis (w1, (w2 - w1)/gap) so the matching matrix
        # stays well conditioned.  Otherwise build both solutions in the
        # canonical chart, which anchors the c_0 = 1 normalization the way
        # the reported zeta, a0, b0 expect.
        degenerate = abs(gap) < 0.1
        if degenerate:
            label1 = raw
            label2 = _companion_raw(raw)
            f = lambda nu: floquet_determinant(nu, E, params, self._det_window)
            comp_polished, resid = _newton_index(f, label2)
            if resid < 1e-8 and abs(comp_polished - label2) < 0.3 * abs(label2 - label1):
                label2 = comp_polished
            gap = label2 - label1
            if abs(gap) < 1e-8:
                raise DegeneracyError(
                    f"index pair degenerate (gap {abs(gap):.1e}); the second "
                    "solution carries a logarithm, outside this solver's scope"
                )
        else:
            label1, label2 = nu1, nu2
        try:
            sol1 = self._laurent_labeled(label1, E)
            sol2 = self._laurent_labeled(label2, E)
        except DomainError:
            if degenerate:
                raise
            # canonical chart unresolvable; fall back to the raw chart
            # (normalization anchors shift, conventions are best-effort)
            label1, label2 = raw, _companion_raw(raw)
            gap = label2 - label1
            sol1 = self._laurent_labeled(label1, E)
            sol2 = self._laurent_labeled(label2, E)

        def basis_eval(z):
            w1, wp1 = eval_floquet(sol1, z)
            w2, wp2 = eval_floquet(sol2, z)
            if degenerate:
                return ((w1, wp1), ((w2 - w1) / gap, (wp2 - wp1) / gap))
            return ((w1, wp1), (w2, wp2))

        M = self.series_terms
        ex = derive_exponents(params, E)
        u_rec = asym_coeffs_infinity(params, E, 1.0, M)
        v_rec = asym_coeffs_zero(params, E, 1.0, M)

        def project(pair, z, rec, wronskian, tol):
            # dominant content: W[rec, .] over the pair Wronskian, whose
            # asymptotically exact value (2 alpha at infinity, -2 beta at
            # zero for unit leading coefficients) is used in closed form
            r = eval_asymptotic(rec, z, tol)
            return tuple(
                (r.value * wp - r.derivative * w) / wronskian for (w, wp) in pair
            )

        if self._frozen and self._zproj_ratio is not None:
            z_proj = max(self._zproj_ratio * z_far, 3.0 / ex.alpha)
        else:
            z_proj = self._far_projection_point(E, u_rec, (sol1, sol2), z_far, ex)
            self._zproj_ratio = z_proj / z_far
        q_samples = []
        for fac in (1.0, 1.04, 1.08):
            q_samples.append(
                project(basis_eval(z_proj * fac), z_proj * fac, u_rec, 2.0 * ex.alpha, 0.05)
            )
        Q = tuple(np.mean([qs[j] for qs in q_samples]) for j in range(2))
        S = project(basis_eval(z_near), z_near, v_rec, -2.0 * ex.beta, self.strict_tol)
        mat = np.array([[Q[0], Q[1]], [S[0], S[1]]])
        return {
            "E": E,
            "nu": (nu1, nu2),
            "solutions": (sol1, sol2),
            "z": (z_near, z_far),
            "matrix": mat,
            "degenerate": degenerate,
            "gap": gap,
            "basis_eval": basis_eval,
        }

    def det_normalized(self, E):
        mat = self.state(E)["matrix"]
        r0 = np.linalg.norm(mat[0])
        r1 = np.linalg.norm(mat[1])
        if r0 == 0.0 or r1 == 0.0:
            raise SolverError("connection matrix has a vanishing row")
        return complex(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]) / (r0 * r1)

    def readout(self, state, coeffs):
        """Leading recessive coefficients a0, b0 of the physical combination.

        coeffs weight the (possibly difference-) basis returned by the
        state.  The unit-normalized recessive solutions are continued by ODE
        integration from their asymptotic anchors to a mid-annulus point,
        where the combination is projected on them; this avoids the
        exp(2 beta/z) round-off amplification of a Wronskian readout inside
        the asymptotic regime.
        """
        params = self.params
        E = state["E"]
        z_near, z_far = state["z"]
        z_mid = math.sqrt(z_near * z_far)
        (w1, wp1), (w2, wp2) = state["basis_eval"](z_mid)
        w = coeffs[0] * w1 + coeffs[1] * w2
        wp = coeffs[0] * wp1 + coeffs[1] * wp2
        A, Z, L = params.A, params.Z, params.centrifugal

        def F(z):
            z2 = z * z
            return A / (z2 * z2) + L / z2 - Z / z - E

        v_rec = asym_coeffs_zero(params, E, 1.0, self.series_terms)
        ev = eval_asymptotic(v_rec, z_near, self.strict_tol)
        u, up = integrate_second_order(
            F, z_near, z_mid, ev.value.real, ev.derivative.real, 1e-12
        )
        u_rec = asym_coeffs_infinity(params, E, 1.0, self.series_terms)
        ev = eval_asymptotic(u_rec, z_far, self.strict_tol)
        v, vp = integrate_second_order(
            F, z_far, z_mid, ev.value.real, ev.derivative.real, 1e-12
        )
        b0 = (w * u + wp * up) / (u * u + up * up)
        a0 = (w * v + wp * vp) / (v * v + vp * vp)
        return a0, b0


def _fix_phase(x1: complex, x2: complex, conjugate_family: bool):
    """Normalize the null vector to the documented phase convention."""
    if abs(x1) == 0.0 or abs(x2) == 0.0:
        raise DegeneracyError("null vector has a vanishing component")
    if conjugate_family:
        ratio = -x1.conjugate() / x2
        theta = cmath.phase(ratio) / 2.0
        z1 = cmath.exp(1j * theta) * x1
        z1 /= abs(z1)
        if z1.imag < 0:
            z1 = -z1
        return z1, -z1.conjugate()
    rot = x1.conjugate() / abs(x1)  # make zeta1 real positive
    z1 = complex(1.0, 0.0)
    z2 = x2 * rot / abs(x1)
    return z1, complex(z2.real, z2.imag)


def connection_matrix(E: float, params: ProblemParams, N: int | None = None) -> np.ndarray:
    """2x2 matrix of dominant contents of the Floquet pair at both ends.

    Row 0: dominant-at-infinity content of (w1, w2) read off by Wronskian
    projection against the series pair at z_far; row 1: dominant-at-zero
    content at z_near.  The physical combination solves M zeta = 0, which
    has a nontrivial solution exactly at bound-state energies.
    """
    ws = _ConnectionWorkspace(params, N=N)
    return ws.state(E)["matrix"]


def eigen_connection(
    params: ProblemParams,
    e_bracket: tuple[float, float],
    N: int | None = None,
) -> ConnectionResult:
    """Locate the bound-state energy in the bracket and solve the connection.

    Scans the normalized connection determinant on an energy grid, refines
    the root (sign change of the phase-aligned determinant when available,
    otherwise golden-section on its magnitude), then extracts zeta, a0, b0.
    """
    lo, hi = (float(min(e_bracket)), float(max(e_bracket)))
    if not hi < 0.0:
        raise DomainError("bracket must lie in E < 0")
    ws = _ConnectionWorkspace(params, N=N)

    npts = max(9, min(61, int(math.ceil((hi - lo) / 0.002)) + 1))
    grid = np.linspace(lo, hi, npts)
    dets = np.array([ws.det_normalized(e) for e in grid])
    # geometry settled by the scan; freeze it so refinement sees a
    # reproducible function
    ws._frozen = True

    phase = dets[int(np.argmax(np.abs(dets)))]
    phase /= abs(phase)
    aligned = dets / phase
    realish = np.max(np.abs(aligned.imag)) <= 0.2 * np.max(np.abs(aligned))

    e_star = None
    if realish:
        r = aligned.real
        for i in range(len(grid) - 1):
            if r[i] == 0.0:
                e_star = grid[i]
                break
            if r[i] * r[i + 1] < 0.0:
                from scipy.optimize import brentq

                f = lambda e: (ws.det_normalized(e) / phase).real
                # re-evaluate the endpoints: the workspace window may have
                # grown since the grid pass, shifting values near the zero
                fa, fb = f(grid[i]), f(grid[i + 1])
                if fa == 0.0:
                    e_star = grid[i]
                elif fb == 0.0:
                    e_star = grid[i + 1]
                elif fa * fb < 0.0:
                    e_star = brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=8.9e-16)
                if e_star is not None:
                    break
    if e_star is None:
        mags = np.abs(dets)
        i = int(np.argmin(mags))
        if i == 0 or i == len(grid) - 1:
            raise SolverError(
                "no eigenvalue in bracket: connection determinant has no "
                "interior sign change or magnitude minimum"
            )
        a, b = grid[i - 1], grid[i + 1]
        g = lambda e: abs(ws.det_normalized(e))
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = g(c), g(d)
        while b - a > 1e-11:
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = g(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = g(d)
        e_star = 0.5 * (a + b)

    state = ws.state(float(e_star))
    mat = state["matrix"]
    _, svals, vh = np.linalg.svd(mat)
    if svals[0] < 1e-6 * max(1.0, float(np.max(np.abs(mat)))):
        raise DegeneracyError("connection null space is not one-dimensional")
    x = vh[1].conj()
    nu1, nu2 = state["nu"]
    if state["degenerate"]:
        g = state["gap"]
        zeta_raw = (x[0] - x[1] / g, x[1] / g)
    else:
        zeta_raw = (x[0], x[1])
    conjugate_family = abs(nu1.real) < 1e-9 or abs(nu1.real - 0.5) < 1e-9
    zeta1, zeta2 = _fix_phase(zeta_raw[0], zeta_raw[1], conjugate_family)
    scale = zeta1 / zeta_raw[0]
    a0, b0 = ws.readout(state, (scale * x[0], scale * x[1]))
    r0 = np.linalg.norm(mat[0])
    r1 = np.linalg.norm(mat[1])
    residual = abs(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]) / (r0 * r1)
    sol1, sol2 = state["solutions"]
    return ConnectionResult(
        E=float(e_star),
        nu1=nu1,
        nu2=nu2,
        zeta1=zeta1,
        zeta2=zeta2,
        a0=a0,
        b0=b0,
        floquet1=sol1,
        floquet2=sol2,
        residual=float(residual),
    )
