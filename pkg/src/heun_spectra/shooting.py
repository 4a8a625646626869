"""Shooting oracle: ODE integration from both singular points, Wronskian matching.

The reduced equation is integrated as w'' = F(z) w with

    F(z) = A/z**4 + l(l+1)/z**2 - Z/z - E.

Starting data come from the recessive asymptotic series at a small z (where
exp(-beta/z) behaviour makes outward integration stable) and at a large z
(where exp(-alpha z) decay makes inward integration stable).  The two
branches are matched at an interior point; the scaled Wronskian vanishes
exactly at eigenvalues.  Eigenvalues are bracketed by Sturm node counting
of the outward branch and refined on the mismatch.

The integrator (shared module) is an embedded Dormand-Prince 5(4) pair on
Python scalars; profiles of this problem spend a few thousand steps per
traversal, which keeps a full table sweep within seconds without compiled
extensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._ivp import integrate_second_order
from .errors import DomainError, SolverError
from .model import ProblemParams, coulomb_energy, derive_exponents
from .series import asym_coeffs_infinity, asym_coeffs_zero, choose_z_far, choose_z_near, eval_asymptotic

__all__ = [
    "ShootingConfig",
    "BoundState",
    "integrate_from_zero",
    "integrate_from_infinity",
    "mismatch",
    "find_energy",
    "count_nodes",
]


@dataclass
class ShootingConfig:
    """Knobs for the two-sided integration.

    z_match defaults to the geometric midpoint of the series anchor points;
    rk_tolerance is the relative local error of the adaptive integrator.
    """

    z_match: float | None = None
    rk_tolerance: float = 1e-12
    e_bracket: tuple[float, float] | None = None
    max_bisections: int = 80
    series_tol: float = 1e-11
    series_terms: int = 72

    def __post_init__(self):
        if not 1e-14 <= self.rk_tolerance <= 1e-6:
            raise DomainError("rk_tolerance must lie in [1e-14, 1e-6]")


@dataclass(frozen=True)
class BoundState:
    """Eigenvalue with node count and a normalized sampled wave function."""

    E: float
    n: int
    l: int
    wave_samples: np.ndarray  # columns (z, w)
    norm: float


def _force_field(params: ProblemParams, E: float):
    A, Z, L = params.A, params.Z, params.centrifugal
    def F(z):
        z2 = z * z
        return A / (z2 * z2) + L / z2 - Z / z - E
    return F


def _anchors(params, E, cfg):
    ex = derive_exponents(params, E)
    z_near = choose_z_near(
        params, E, cfg.series_terms, cfg.series_tol, z_floor=ex.beta / 40.0
    )
    z_far = choose_z_far(params, E, cfg.series_terms, cfg.series_tol)
    z_match = cfg.z_match if cfg.z_match is not None else math.sqrt(z_near * z_far)
    if not z_near < z_match < z_far:
        raise DomainError(
            f"matching point {z_match:g} outside ({z_near:g}, {z_far:g})"
        )
    return z_near, z_match, z_far


def _start_from_zero(params, E, cfg, z_near):
    series = asym_coeffs_zero(params, E, 1.0, cfg.series_terms)
    ev = eval_asymptotic(series, z_near, cfg.series_tol)
    return ev.value.real, ev.derivative.real


def _start_from_infinity(params, E, cfg, z_far):
    series = asym_coeffs_infinity(params, E, 1.0, cfg.series_terms)
    ev = eval_asymptotic(series, z_far, cfg.series_tol)
    return ev.value.real, ev.derivative.real


def integrate_from_zero(E: float, params: ProblemParams, cfg: ShootingConfig | None = None):
    """Outward solution (recessive at zero) advanced to the matching point."""
    cfg = cfg or ShootingConfig()
    if params.A <= 0.0:
        raise DomainError("shooting requires A > 0")
    z_near, z_match, _ = _anchors(params, E, cfg)
    w, wp = _start_from_zero(params, E, cfg, z_near)
    return integrate_second_order(_force_field(params, E), z_near, z_match, w, wp, cfg.rk_tolerance)


def integrate_from_infinity(E: float, params: ProblemParams, cfg: ShootingConfig | None = None):
    """Inward solution (recessive at infinity) advanced to the matching point."""
    cfg = cfg or ShootingConfig()
    if params.A <= 0.0:
        raise DomainError("shooting requires A > 0")
    _, z_match, z_far = _anchors(params, E, cfg)
    w, wp = _start_from_infinity(params, E, cfg, z_far)
    return integrate_second_order(_force_field(params, E), z_far, z_match, w, wp, cfg.rk_tolerance)


def mismatch(E: float, params: ProblemParams, cfg: ShootingConfig | None = None) -> float:
    """Scaled Wronskian of the outward and inward branches at the match point.

    Zero exactly at eigenvalues; the normalization keeps it bounded.
    """
    cfg = cfg or ShootingConfig()
    wo, wpo = integrate_from_zero(E, params, cfg)
    wi, wpi = integrate_from_infinity(E, params, cfg)
    wr = wo * wpi - wpo * wi
    scale = abs(wo * wpi) + abs(wpo * wi)
    if scale == 0.0:
        raise SolverError("both branches vanished at the matching point")
    return wr / scale


def count_nodes(wave_samples: np.ndarray) -> int:
    """Strict sign changes of w over the sampled range.

    Requires adjacent sign changes to be separated by at least 3 samples,
    otherwise the sampling is too coarse to trust.
    """
    w = np.asarray(wave_samples)
    if w.ndim == 2:
        w = w[:, 1]
    sign = np.sign(w)
    nz = sign != 0
    idx = np.nonzero(nz)[0]
    s = sign[idx]
    flips = np.nonzero(s[1:] * s[:-1] < 0)[0]
    if len(flips) >= 2 and np.min(np.diff(idx[flips])) < 3:
        raise SolverError("sampling too coarse: adjacent sign changes closer than 3 samples")
    return int(len(flips))


def _outer_turning_point(params, E, z_lo, z_hi):
    """Largest zero of F on [z_lo, z_hi], or None when F > 0 throughout."""
    F = _force_field(params, E)
    zs = np.geomspace(z_lo, z_hi, 200)
    vals = np.array([F(z) for z in zs])
    neg = np.nonzero(vals < 0.0)[0]
    if len(neg) == 0:
        return None
    i = neg[-1]
    if i + 1 >= len(zs):
        return z_hi
    from scipy.optimize import brentq

    return brentq(F, zs[i], zs[i + 1], xtol=1e-10, rtol=1e-10)


def _node_count_at(params, E, cfg):
    """Sturm count: nodes of the outward branch up to beyond the turning point.

    New nodes enter from large z as E crosses an eigenvalue, so the range
    extends 10/alpha past the outer turning point; that suppresses the
    undetected-node window by exp(-2 integral sqrt(F)) to a small fraction
    of the level spacing, inside the bisection bracket.
    """
    z_near, _, z_far = _anchors(params, E, cfg)
    alpha = math.sqrt(-E)
    turn = _outer_turning_point(params, E, z_near, max(z_far, 4.0 * params.Z / abs(E)))
    z_end = max(z_far, 1.3 * turn, turn + 10.0 / alpha) if turn is not None else z_far
    w, wp = _start_from_zero(params, E, cfg, z_near)
    rec: list[tuple[float, float, float]] = []
    integrate_second_order(_force_field(params, E), z_near, z_end, w, wp, 1e-9, record=rec)
    samples = np.array([(z, wv) for z, wv, _ in rec])
    return count_nodes(samples)


def _assemble_wave(params, E, cfg):
    z_near, z_match, z_far = _anchors(params, E, cfg)
    F = _force_field(params, E)
    out_rec: list[tuple[float, float, float]] = []
    w0, wp0 = _start_from_zero(params, E, cfg, z_near)
    out_rec.append((z_near, w0, wp0))
    wo, wpo = integrate_second_order(F, z_near, z_match, w0, wp0, cfg.rk_tolerance, record=out_rec)
    in_rec: list[tuple[float, float, float]] = []
    w1, wp1 = _start_from_infinity(params, E, cfg, z_far)
    in_rec.append((z_far, w1, wp1))
    wi, wpi = integrate_second_order(F, z_far, z_match, w1, wp1, cfg.rk_tolerance, record=in_rec)
    if wi == 0.0:
        raise SolverError("inward branch vanished at the matching point")
    s = wo / wi
    zs = [p[0] for p in out_rec] + [p[0] for p in reversed(in_rec)]
    ws = [p[1] for p in out_rec] + [s * p[1] for p in reversed(in_rec)]
    samples = np.column_stack([zs, ws])
    if samples[1, 0] < samples[0, 0]:
        samples = samples[::-1]
    norm2 = float(np.trapezoid(samples[:, 1] ** 2, samples[:, 0]))
    if norm2 <= 0.0:
        raise SolverError("wave normalization failed")
    norm = math.sqrt(norm2)
    samples[:, 1] /= norm
    if samples[0, 1] < 0.0:  # sign convention: w > 0 near the origin
        samples[:, 1] *= -1.0
    return samples, norm


def find_energy(params: ProblemParams, n_target: int, cfg: ShootingConfig | None = None) -> BoundState:
    """Eigenvalue with n_target radial nodes, bracketed by Sturm counting.

    The search bracket defaults to (1.2 Z^2 coulomb(0,l), -1e-4 Z^2); node
    counts of the outward branch isolate the target level, the mismatch is
    refined by bisection/Brent on its sign change, and a final secant step
    polishes the root.
    """
    cfg = cfg or ShootingConfig()
    if params.A <= 0.0:
        raise DomainError("shooting requires A > 0")
    if n_target < 0:
        raise DomainError("node count must be non-negative")
    zsq = params.Z * params.Z
    if cfg.e_bracket is not None:
        e_lo, e_hi = (min(cfg.e_bracket), max(cfg.e_bracket))
    else:
        e_lo = 1.2 * zsq * coulomb_energy(0, params.l)
        e_hi = -1e-4 * zsq

    lo, hi = e_lo, e_hi
    c_lo = _node_count_at(params, lo, cfg)
    for _ in range(6):
        if c_lo <= n_target:
            break
        lo *= 1.5
        c_lo = _node_count_at(params, lo, cfg)
    if c_lo > n_target:
        raise SolverError(f"lower bracket still has {c_lo} nodes > target {n_target}")
    c_hi = _node_count_at(params, hi, cfg)
    if c_hi <= n_target:
        raise SolverError(
            f"no eigenvalue with {n_target} nodes in scan range "
            f"[{lo:g}, {hi:g}] (node count at top: {c_hi})"
        )
    for _ in range(cfg.max_bisections):
        if hi - lo < max(1e-4 * abs(lo), 1e-9):
            break
        mid = 0.5 * (lo + hi)
        c_mid = _node_count_at(params, mid, cfg)
        if c_mid <= n_target:
            lo = mid
        else:
            hi = mid

    # The counting range is finite, so the detected transition sits slightly
    # above the eigenvalue; widen the refinement bracket downward to be sure
    # it is contained, then pick the mismatch root with the right node count.
    width = hi - lo
    lo_ref = max(e_lo, lo - max(0.02 * abs(lo), 8.0 * width))
    scan = np.linspace(lo_ref, hi, 9)
    vals = [mismatch(e, params, cfg) for e in scan]
    roots = []
    from scipy.optimize import brentq

    for i in range(len(scan) - 1):
        if vals[i] == 0.0:
            roots.append(scan[i])
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(
                brentq(
                    lambda e: mismatch(e, params, cfg),
                    scan[i],
                    scan[i + 1],
                    xtol=1e-14,
                    rtol=8.9e-16,
                )
            )
    if not roots:
        # magnitude minimum fallback (normalization may hide the sign change)
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo_ref, hi
        g = lambda e: abs(mismatch(e, params, cfg))
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = g(c), g(d)
        while b - a > 1e-12:
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = g(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = g(d)
        roots = [0.5 * (a + b)]

    last_error = None
    for e_star in roots:
        # secant polish
        h = max(1e-11, 1e-9 * abs(e_star))
        f0 = mismatch(e_star, params, cfg)
        f1 = mismatch(e_star + h, params, cfg)
        if f1 != f0:
            cand = e_star - f0 * h / (f1 - f0)
            if lo_ref <= cand <= hi and abs(mismatch(cand, params, cfg)) < abs(f0):
                e_star = cand
        samples, norm = _assemble_wave(params, e_star, cfg)
        nodes = count_nodes(samples)
        if nodes == n_target:
            return BoundState(
                E=float(e_star), n=nodes, l=params.l, wave_samples=samples, norm=norm
            )
        last_error = SolverError(
            f"refined eigenvalue {e_star:.12g} has {nodes} nodes, expected {n_target}"
        )
    raise last_error or SolverError(
        f"no mismatch root with {n_target} nodes in [{lo_ref:.6g}, {hi:.6g}]"
    )
