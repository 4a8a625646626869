"""Parameter bookkeeping: exponents, coefficient map, rescaling, Coulomb limit."""

import math

import pytest

from heun_spectra import (
    DomainError,
    ProblemParams,
    coulomb_energy,
    dche_coefficients,
    derive_exponents,
    find_energy,
    rescale,
)


def test_exponents_worked_example():
    # independent oracle: direct arithmetic on the published energy
    E = -0.093111277969
    ex = derive_exponents(ProblemParams(A=10.0, Z=1.0, l=0), E)
    assert ex.alpha == pytest.approx(math.sqrt(0.093111277969), rel=1e-14)
    assert ex.mu == pytest.approx(1.0 / (2.0 * math.sqrt(0.093111277969)), rel=1e-14)
    assert ex.beta == pytest.approx(math.sqrt(10.0), rel=1e-15)
    assert 2.0 * ex.alpha * ex.mu == pytest.approx(1.0, rel=1e-14)


def test_exponents_quasipoly_row():
    ex = derive_exponents(ProblemParams(A=64.0, Z=1.0, l=0), -1.0 / 16.0)
    assert ex.alpha == pytest.approx(0.25, abs=1e-15)
    assert ex.mu == pytest.approx(2.0, abs=1e-14)
    assert ex.beta == pytest.approx(8.0, abs=1e-13)


def test_exponents_pure_coulomb():
    ex = derive_exponents(ProblemParams(A=0.0, Z=1.0, l=0), -0.25)
    assert (ex.alpha, ex.mu, ex.beta) == (0.5, 1.0, 0.0)


def test_exponents_reject_positive_energy():
    with pytest.raises(DomainError):
        derive_exponents(ProblemParams(A=1.0, Z=1.0, l=0), 0.1)
    with pytest.raises(DomainError):
        derive_exponents(ProblemParams(A=1.0, Z=1.0, l=0), 0.0)


def test_exponents_roundtrip():
    for A, Z, l, E in [(1.0, 1.0, 0, -0.139), (25.0, 0.5, 2, -0.01), (0.3, 3.0, 1, -2.0)]:
        ex = derive_exponents(ProblemParams(A=A, Z=Z, l=l), E)
        assert -(ex.alpha**2) == pytest.approx(E, rel=1e-14)
        assert ex.beta**2 == pytest.approx(A, rel=1e-14)
        assert 2.0 * ex.alpha * ex.mu == pytest.approx(Z, rel=1e-14)


def test_dche_coefficients_values():
    c = dche_coefficients(ProblemParams(A=1.0, Z=1.0, l=0), -0.139037013)
    assert c.as_tuple() == pytest.approx((-1.0, 0.0, -0.25, 1.0, -0.139037013))
    c = dche_coefficients(ProblemParams(A=10.0, Z=1.0, l=0), -0.093111277969)
    assert c.b0 == -0.25
    c = dche_coefficients(ProblemParams(A=5.0, Z=1.0, l=2), -0.0276154597)
    assert c.b0 == -6.25


def test_rescale_identity_and_values():
    assert rescale(1.0, -0.139037013, 1.0) == (1.0, -0.139037013)
    a_hat, e_hat = rescale(1.0, -0.139037013, 2.0)
    assert a_hat == pytest.approx(0.25, rel=1e-15)
    assert e_hat == pytest.approx(-0.556148052, rel=1e-12)
    a_hat, e_hat = rescale(25.0, -0.077060194, 0.5)
    assert a_hat == pytest.approx(100.0, rel=1e-15)
    assert e_hat == pytest.approx(-0.0192650485, rel=1e-12)


def test_rescale_group_action():
    a, e = 3.7, -0.21
    for z1, z2 in [(2.0, 3.0), (0.5, 4.0), (1.7, 0.3)]:
        once = rescale(*rescale(a, e, z1), z2)
        combined = rescale(a, e, z1 * z2)
        assert once[0] == pytest.approx(combined[0], rel=1e-14)
        assert once[1] == pytest.approx(combined[1], rel=1e-14)


def test_rescale_rejects_nonpositive():
    with pytest.raises(DomainError):
        rescale(1.0, -0.1, 0.0)
    with pytest.raises(DomainError):
        rescale(1.0, -0.1, -2.0)


def test_rescaled_pair_is_eigenpair():
    # scale law cross-checked against the solver at the rescaled parameters
    e_ref = find_energy(ProblemParams(A=1.0, Z=1.0, l=0), 0).E
    a_hat, e_hat = rescale(1.0, e_ref, 2.0)
    e_scaled = find_energy(ProblemParams(A=a_hat, Z=2.0, l=0), 0).E
    assert e_scaled == pytest.approx(e_hat, abs=1e-8)


def test_coulomb_energy_values():
    assert coulomb_energy(0, 0) == -0.25
    assert coulomb_energy(1, 0) == -0.0625
    assert coulomb_energy(0, 2) == pytest.approx(-1.0 / 36.0, rel=1e-15)


def test_coulomb_limit():
    # E(A -> 0) approaches the pure-Coulomb level, monotonically for l >= 1
    e = find_energy(ProblemParams(A=1e-6, Z=1.0, l=0), 0).E
    assert abs(e - coulomb_energy(0, 0)) < 1e-3
    gaps = []
    for A in (1e-4, 1e-6, 1e-8):
        e = find_energy(ProblemParams(A=A, Z=1.0, l=1), 0).E
        gaps.append(abs(e - coulomb_energy(0, 1)))
    assert gaps[0] > gaps[1] > gaps[2]


def test_params_validation():
    with pytest.raises(DomainError):
        ProblemParams(A=-1.0)
    with pytest.raises(DomainError):
        ProblemParams(A=1.0, Z=0.0)
    with pytest.raises(DomainError):
        ProblemParams(A=1.0, Z=-1.0)
    with pytest.raises(DomainError):
        ProblemParams(A=1.0, Z=1.0, l=-1)
