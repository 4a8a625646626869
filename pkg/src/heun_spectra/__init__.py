"""Bound states of a repulsive supersingular plus attractive Coulomb potential.

The reduced radial equation is a double confluent Heun equation with
irregular singular points at zero and infinity.  This package computes
bound-state energies two independent ways (Floquet-solution connection and
two-sided shooting), the Floquet indices and Laurent coefficients, the
asymptotic expansions at both singular points, and the exact intensities
admitting quasi-polynomial (closed-form) wave functions.
"""

from .errors import (
    AnnulusError,
    AsymptoticRegimeError,
    DegeneracyError,
    DomainError,
    HeunSpectraError,
    IndexSearchError,
    SolverError,
)
from .floquet import (
    ConnectionResult,
    FloquetSolution,
    TailBasis,
    connection_matrix,
    eigen_connection,
    eval_floquet,
    find_indices,
    floquet_determinant,
    laurent_coefficients,
    tail_basis,
)
from .model import (
    DcheCoefficients,
    Exponents,
    ProblemParams,
    coulomb_energy,
    dche_coefficients,
    derive_exponents,
    rescale,
)
from .quasipoly import (
    BetaPolynomial,
    QuasiPolyProblem,
    QuasiPolyResult,
    beta_polynomial_via_xi,
    solve_quasipoly,
    validate_quasipoly,
    xi_chain_from_a,
    xi_chain_from_b,
)
from .series import (
    AsymptoticSeries,
    SeriesEvaluation,
    SeriesKind,
    asym_coeffs_infinity,
    asym_coeffs_zero,
    choose_z_far,
    choose_z_near,
    dominant_coeffs,
    eval_asymptotic,
)
from .shooting import (
    BoundState,
    ShootingConfig,
    count_nodes,
    find_energy,
    integrate_from_infinity,
    integrate_from_zero,
    mismatch,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusError",
    "AsymptoticRegimeError",
    "AsymptoticSeries",
    "BetaPolynomial",
    "BoundState",
    "ConnectionResult",
    "DcheCoefficients",
    "DegeneracyError",
    "DomainError",
    "Exponents",
    "FloquetSolution",
    "HeunSpectraError",
    "IndexSearchError",
    "ProblemParams",
    "QuasiPolyProblem",
    "QuasiPolyResult",
    "SeriesEvaluation",
    "SeriesKind",
    "ShootingConfig",
    "SolverError",
    "TailBasis",
    "asym_coeffs_infinity",
    "asym_coeffs_zero",
    "beta_polynomial_via_xi",
    "choose_z_far",
    "choose_z_near",
    "connection_matrix",
    "coulomb_energy",
    "count_nodes",
    "dche_coefficients",
    "derive_exponents",
    "dominant_coeffs",
    "eigen_connection",
    "eval_asymptotic",
    "eval_floquet",
    "find_energy",
    "find_indices",
    "floquet_determinant",
    "integrate_from_infinity",
    "integrate_from_zero",
    "laurent_coefficients",
    "mismatch",
    "rescale",
    "solve_quasipoly",
    "tail_basis",
    "validate_quasipoly",
    "xi_chain_from_a",
    "xi_chain_from_b",
]
