"""Problem definition: dimensionless parameters, derived exponents, rescaling.

The radial potential is A/z**4 - Z/z in units where hbar**2/(2 m r0**2) = 1,
with z = r/r0.  The reduced radial wave function w(z), proportional to
z times the radial wave function, satisfies

    z**2 w'' + (-A/z**2 - l(l+1) + Z z + E z**2) w = 0,

a double confluent Heun equation with irregular singular points at 0 and
infinity.  Energies are plain (dimensionless) floats, negative for bound
states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "ProblemParams",
    "Exponents",
    "DcheCoefficients",
    "derive_exponents",
    "dche_coefficients",
    "rescale",
    "coulomb_energy",
]


@dataclass(frozen=True)
class ProblemParams:
    """Potential intensities and angular momentum.

    A >= 0 is the repulsive supersingular intensity (A = 0 is the pure
    Coulomb limit, accepted here but rejected by the Floquet and shooting
    solvers), Z > 0 the attractive Coulomb intensity, l the non-negative
    integer angular momentum.
    """

    A: float
    Z: float = 1.0
    l: int = 0

    def __post_init__(self):
        if not self.A >= 0.0:
            raise DomainError(f"A must be >= 0, got {self.A}")
        if not self.Z > 0.0:
            raise DomainError(f"Z must be > 0, got {self.Z}")
        if self.l < 0 or int(self.l) != self.l:
            raise DomainError(f"l must be a non-negative integer, got {self.l}")

    @property
    def centrifugal(self) -> float:
        return float(self.l * (self.l + 1))


@dataclass(frozen=True)
class Exponents:
    """Boundary exponents alpha = sqrt(-E), mu = Z/(2 alpha), beta = sqrt(A).

    The recessive behaviours at the singular points are
    exp(-alpha z) z**mu at infinity and exp(-beta/z) z at zero.
    """

    alpha: float
    mu: float
    beta: float


@dataclass(frozen=True)
class DcheCoefficients:
    """Coefficients of B(z) = sum B_p z**p, p = -2..2, in D^2 y + B y = 0."""

    b_minus2: float
    b_minus1: float
    b0: float
    b1: float
    b2: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.b_minus2, self.b_minus1, self.b0, self.b1, self.b2)


def derive_exponents(params: ProblemParams, E: float) -> Exponents:
    """Exponents governing the recessive boundary behaviour at E < 0."""
    if not E < 0.0:
        raise DomainError(f"E must be negative for a bound-state candidate, got {E}")
    alpha = math.sqrt(-E)
    return Exponents(alpha=alpha, mu=params.Z / (2.0 * alpha), beta=math.sqrt(params.A))


def dche_coefficients(params: ProblemParams, E: float) -> DcheCoefficients:
    """Map (A, Z, l, E) onto the five B_p coefficients."""
    return DcheCoefficients(
        b_minus2=-params.A,
        b_minus1=0.0,
        b0=-params.centrifugal - 0.25,
        b1=params.Z,
        b2=E,
    )


def rescale(a_ref: float, e_ref: float, z_hat: float) -> tuple[float, float]:
    """Map a (A, E) eigen-pair at Z=1 to the pair at Coulomb intensity z_hat.

    A trivial change of scale gives A_hat = A / z_hat**2 and
    E_hat = z_hat**2 * E; the result is an eigen-pair of the rescaled
    equation.
    """
    if not z_hat > 0.0:
        raise DomainError(f"Z rescaling factor must be > 0, got {z_hat}")
    return a_ref / (z_hat * z_hat), e_ref * z_hat * z_hat


def coulomb_energy(n: int, l: int) -> float:
    """Pure-Coulomb (A=0, Z=1) energy -1/(4 (n+l+1)**2) of the n-th level."""
    if n < 0 or l < 0:
        raise DomainError("n and l must be non-negative")
    k = n + l + 1
    return -1.0 / (4.0 * k * k)
