"""Independent test oracles, deliberately built on different machinery.

The index oracle integrates the differential equation once around a circle
enclosing the origin with scipy's DOP853; the loop map's eigenvalues are
exp(+/- 2 pi i nu).  It shares no code with the recurrence-based solvers.
"""

import cmath
import math

import numpy as np
from scipy.integrate import solve_ivp


def monodromy_eigenvalues(A, Z, l, E, rtol=1e-12):
    """Eigenvalues of the once-around-the-loop transfer map.

    The circle radius sqrt(beta/alpha) balances the essential growth of the
    two singular points, keeping the map well conditioned (its determinant
    is 1 by Abel's identity, a built-in quality check).
    """
    r = math.sqrt(math.sqrt(A) / math.sqrt(-E))
    L = l * (l + 1)

    def rhs(t, y):
        z = r * cmath.exp(1j * t)
        dz = 1j * z
        w = y[0] + 1j * y[1]
        wp = y[2] + 1j * y[3]
        F = A / z**4 + L / z**2 - Z / z - E
        dw = wp * dz
        dwp = F * w * dz
        return [dw.real, dw.imag, dwp.real, dwp.imag]

    cols = []
    for y0 in ([1, 0, 0, 0], [0, 0, 1, 0]):
        sol = solve_ivp(rhs, (0.0, 2.0 * np.pi), y0, method="DOP853", rtol=rtol, atol=1e-16)
        y = sol.y[:, -1]
        cols.append([y[0] + 1j * y[1], y[2] + 1j * y[3]])
    T = np.array(cols).T
    eigs = np.linalg.eigvals(T)
    assert abs(eigs[0] * eigs[1] - 1.0) < 1e-9, "loop map determinant drifted from 1"
    return eigs


def monodromy_index(A, Z, l, E, rtol=1e-12):
    """Canonical Floquet index (Re in [0, 1/2], Im >= 0) from the loop map."""
    eigs = monodromy_eigenvalues(A, Z, l, E, rtol)
    nu = cmath.log(eigs[0]) / (2j * cmath.pi)
    re = nu.real % 1.0
    nu = complex(re, nu.imag)
    if re > 0.5 + 1e-12:
        nu = complex(1.0 - re, -nu.imag)
    if nu.imag < 0:
        nu = nu.conjugate()
    return nu
