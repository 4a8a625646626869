"""Embedded Dormand-Prince 5(4) integrator for w'' = F(z) w on scalars.

Shared by the shooting solver and by the connection solver's recessive-
content readout.  Python scalars keep the per-step overhead near a
microsecond, which is what lets full table sweeps run in seconds.
"""

from __future__ import annotations

import math

from .errors import SolverError

__all__ = ["integrate_second_order"]

_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def integrate_second_order(F, z0, z1, w, wp, rtol, record=None, max_steps=2_000_000):
    """Advance (w, w') of w'' = F(z) w from z0 to z1, either direction.

    record, when given, collects accepted steps as (z, w, w') tuples.
    Raises SolverError on step-size underflow or an exhausted step budget.
    """
    direc = 1.0 if z1 > z0 else -1.0
    z = z0
    k1w, k1p = wp, F(z) * w
    curv = abs(k1p / w) if w != 0 else abs(F(z0))
    h = direc * min(1e-3 * abs(z1 - z0) + 1e-300, 0.1 / math.sqrt(curv + 1.0))
    scale_w = abs(w)
    scale_p = abs(wp)
    steps = 0
    while (z1 - z) * direc > 0.0:
        if steps >= max_steps:
            raise SolverError("integration exceeded the step budget")
        if (z + h - z1) * direc > 0.0:
            h = z1 - z
        w2 = w + h * _A21 * k1w
        p2 = wp + h * _A21 * k1p
        k2w, k2p = p2, F(z + _C2 * h) * w2
        w3 = w + h * (_A31 * k1w + _A32 * k2w)
        p3 = wp + h * (_A31 * k1p + _A32 * k2p)
        k3w, k3p = p3, F(z + _C3 * h) * w3
        w4 = w + h * (_A41 * k1w + _A42 * k2w + _A43 * k3w)
        p4 = wp + h * (_A41 * k1p + _A42 * k2p + _A43 * k3p)
        k4w, k4p = p4, F(z + _C4 * h) * w4
        w5 = w + h * (_A51 * k1w + _A52 * k2w + _A53 * k3w + _A54 * k4w)
        p5 = wp + h * (_A51 * k1p + _A52 * k2p + _A53 * k3p + _A54 * k4p)
        k5w, k5p = p5, F(z + _C5 * h) * w5
        w6 = w + h * (_A61 * k1w + _A62 * k2w + _A63 * k3w + _A64 * k4w + _A65 * k5w)
        p6 = wp + h * (_A61 * k1p + _A62 * k2p + _A63 * k3p + _A64 * k4p + _A65 * k5p)
        k6w, k6p = p6, F(z + h) * w6
        w7 = w + h * (_B1 * k1w + _B3 * k3w + _B4 * k4w + _B5 * k5w + _B6 * k6w)
        p7 = wp + h * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p + _B6 * k6p)
        k7w, k7p = p7, F(z + h) * w7
        errw = h * (_E1 * k1w + _E3 * k3w + _E4 * k4w + _E5 * k5w + _E6 * k6w + _E7 * k7w)
        errp = h * (_E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p + _E6 * k6p + _E7 * k7p)
        # Running-peak scales keep the control meaningful where w crosses zero.
        sw = rtol * (abs(w) + abs(w7) + 1e-3 * scale_w + 1e-300)
        sp = rtol * (abs(wp) + abs(p7) + 1e-3 * scale_p + 1e-300)
        err = math.sqrt(0.5 * (abs(errw / sw) ** 2 + abs(errp / sp) ** 2))
        if err <= 1.0:
            z += h
            w, wp = w7, p7
            k1w, k1p = k7w, k7p
            aw, ap = abs(w), abs(wp)
            if aw > scale_w:
                scale_w = aw
            if ap > scale_p:
                scale_p = ap
            if record is not None:
                record.append((z, w, wp))
            steps += 1
        h *= min(5.0, max(0.2, 0.9 * (err + 1e-300) ** -0.2))
        if abs(h) < 1e-15 * max(abs(z), 1e-12):
            raise SolverError(f"step size underflow near z = {z:g}")
    return w, wp
