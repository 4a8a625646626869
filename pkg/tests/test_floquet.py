"""Floquet machinery: tail bases, index search, Laurent solutions, connection."""

import cmath
import math

import numpy as np
import pytest

from heun_spectra import (
    AnnulusError,
    DomainError,
    ProblemParams,
    derive_exponents,
    eval_floquet,
    find_indices,
    floquet_determinant,
    laurent_coefficients,
    tail_basis,
)
from heun_spectra.floquet import connection_matrix, default_window

from helpers import monodromy_index

P10 = ProblemParams(A=10.0, Z=1.0, l=0)
E10 = -0.093111277969
NU10 = 0.918988880508j


def test_tail_basis_decay():
    """Plus-side members decay like alpha/n per step at the window edge."""
    basis = tail_basis(NU10, E10, P10, 32, "plus")
    for s in range(2):
        hi = basis.at(30)[s]
        lo = basis.at(26)[s]
        assert abs(hi) < 1e-4 * abs(lo)
    basis = tail_basis(NU10, E10, P10, 32, "minus")
    for s in range(2):
        hi = basis.at(-30)[s]
        lo = basis.at(-26)[s]
        assert abs(hi) < 2e-2 * abs(lo)  # beta/|n| decay is slower at A=10


def test_tail_basis_members_are_recurrence_solutions():
    basis = tail_basis(NU10, E10, P10, 24, "plus")
    L = P10.centrifugal
    for s in range(2):
        worst = 0.0
        for n in range(0, 20):
            terms = [
                -P10.A * basis.at(n + 2)[s],
                ((n + NU10) * (n - 1 + NU10) - L) * basis.at(n)[s],
                P10.Z * basis.at(n - 1)[s],
                E10 * basis.at(n - 2)[s],
            ]
            scale = max(abs(t) for t in terms)
            if scale > 0:
                worst = max(worst, abs(sum(terms)) / scale)
        assert worst < 1e-10


def test_tail_basis_unit_normalization_and_sides():
    for side in ("plus", "minus"):
        basis = tail_basis(NU10, E10, P10, 24, side)
        for s in range(2):
            assert np.max(np.abs(basis.values[s])) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(DomainError):
        tail_basis(NU10, E10, P10, 24, "sideways")
    with pytest.raises(DomainError):
        tail_basis(NU10, E10, ProblemParams(A=0.0, Z=1.0, l=0), 24, "plus")


def test_tail_side_symmetry_at_z_zero():
    """Under n -> -n+1 relabeling with (A, E) -> (-E, -A), plus and minus
    tails span the same decaying subspace when the odd-shift coupling is off.
    """
    A, E, nu = 2.0, -0.5, 0.3j
    params = ProblemParams(A=A, Z=1e-30, l=0)  # Z > 0 required; negligible
    mirror = ProblemParams(A=-E, Z=1e-30, l=0)
    plus = tail_basis(nu, E, params, 20, "plus")
    minus = tail_basis(-nu, -A, mirror, 20, "minus")
    rows = range(2, 14)
    mat = []
    for s in range(2):
        mat.append([plus.at(n)[s] for n in rows])
    for s in range(2):
        mat.append([minus.at(-n + 1)[s] for n in rows])
    mat = np.array(mat).T
    for j in range(4):
        mat[:, j] /= np.linalg.norm(mat[:, j])
    svals = np.linalg.svd(mat, compute_uv=False)
    assert svals[1] > 1e-3  # each pair independent
    assert svals[2] < 1e-8  # combined rank 2: same subspace
    assert svals[3] < 1e-8


def test_determinant_vanishes_at_table3_row():
    params = ProblemParams(A=0.5, Z=1.0, l=0)
    det = floquet_determinant(0.487816983037j, -0.1533318066, params, 24)
    assert abs(det) < 1e-8


def test_determinant_families_covanish():
    params = ProblemParams(A=0.5, Z=1.0, l=0)
    E = -0.1533318066
    nu = 0.487816983037j
    for shifted in (nu + 1.0, -nu, -nu + 1.0):
        assert abs(floquet_determinant(shifted, E, params, 24)) < 1e-7


def test_determinant_not_small_off_index():
    params = ProblemParams(A=0.5, Z=1.0, l=0)
    assert abs(floquet_determinant(0.3j, -0.1533318066, params, 24)) > 1e-3


@pytest.mark.parametrize(
    "l,A,E,nu_ref",
    [
        (0, 0.5, -0.1533318066, 0.487816983037j),
        (1, 65.0, -0.0448293862, 0.5 + 0.898656568840j),
        (2, 0.5, -0.0277607452, 0.000919514453 + 0j),
    ],
)
def test_find_indices_published_rows(l, A, E, nu_ref):
    params = ProblemParams(A=A, Z=1.0, l=l)
    nu1, nu2 = find_indices(E, params)
    assert abs(nu1 - nu_ref) < 1e-9
    if abs(nu1.real - 0.5) < 1e-9:
        assert nu2 == nu1.conjugate()
    else:
        assert nu2 == -nu1


def test_find_indices_monodromy_oracle():
    """Independent loop-integration oracle agrees with the determinant root."""
    for l, A, E in [(0, 10.0, E10), (1, 5.0, -0.0574288855)]:
        params = ProblemParams(A=A, Z=1.0, l=l)
        nu1, _ = find_indices(E, params)
        oracle = monodromy_index(A, 1.0, l, E, rtol=1e-12)
        assert abs(nu1 - oracle) < 1e-8


def test_find_indices_rejects_bad_inputs():
    with pytest.raises(DomainError):
        find_indices(0.1, P10)
    with pytest.raises(DomainError):
        find_indices(-0.1, ProblemParams(A=0.0, Z=1.0, l=0))


def test_laurent_worked_example(table2_reference):
    nu1, _ = find_indices(E10, P10)
    sol = laurent_coefficients(nu1, E10, P10)
    assert sol.coefficient(0) == 1.0 + 0.0j
    assert sol.coefficient(1) == pytest.approx(table2_reference[1], rel=1e-9)
    assert sol.coefficient(-1) == pytest.approx(table2_reference[-1], rel=1e-9)
    assert sol.coefficient(10) == pytest.approx(table2_reference[10], rel=1e-8)
    assert sol.recurrence_residuals().max() < 1e-10
    peak = np.max(np.abs(sol.coefficients))
    assert abs(sol.coefficient(sol.N)) < 1e-12 * peak
    assert abs(sol.coefficient(-sol.N)) < 1e-12 * peak


def test_laurent_conjugate_pair():
    nu1, nu2 = find_indices(E10, P10)
    sol1 = laurent_coefficients(nu1, E10, P10)
    sol2 = laurent_coefficients(nu2, E10, P10)
    assert np.max(np.abs(sol2.coefficients - np.conj(sol1.coefficients))) < 1e-10


def test_laurent_rejects_non_index():
    with pytest.raises(DomainError):
        laurent_coefficients(0.37j, E10, P10)


def test_eval_floquet_window_sum_and_conjugate():
    nu1, nu2 = find_indices(E10, P10)
    sol1 = laurent_coefficients(nu1, E10, P10)
    sol2 = laurent_coefficients(nu2, E10, P10)
    w1, _ = eval_floquet(sol1, 1.0)
    assert w1 == pytest.approx(np.sum(sol1.coefficients), rel=1e-12)
    assert abs(w1) > 0.1
    for z in (0.7, 1.0, 1.8):
        a, _ = eval_floquet(sol1, z)
        b, _ = eval_floquet(sol2, z)
        assert b == pytest.approx(a.conjugate(), rel=1e-10)


def test_eval_floquet_wronskian_constant():
    nu1, nu2 = find_indices(E10, P10)
    sol1 = laurent_coefficients(nu1, E10, P10)
    sol2 = laurent_coefficients(nu2, E10, P10)

    def wronskian(z):
        w1, w1p = eval_floquet(sol1, z)
        w2, w2p = eval_floquet(sol2, z)
        return w1 * w2p - w1p * w2

    wa, wb = wronskian(0.5), wronskian(2.0)
    assert abs(wa - wb) < 1e-9 * abs(wa)


def test_eval_floquet_annulus_guard():
    nu1, _ = find_indices(E10, P10)
    sol = laurent_coefficients(nu1, E10, P10, N=20)
    with pytest.raises(AnnulusError):
        eval_floquet(sol, 80.0)


def test_connection_matrix_at_and_off_eigenvalue(worked_example):
    mat = connection_matrix(worked_example.E, P10)
    norm_det = abs(np.linalg.det(mat)) / (
        np.linalg.norm(mat[0]) * np.linalg.norm(mat[1])
    )
    assert norm_det < 1e-8
    mat_off = connection_matrix(-0.12, P10)
    det_off = abs(np.linalg.det(mat_off)) / (
        np.linalg.norm(mat_off[0]) * np.linalg.norm(mat_off[1])
    )
    assert det_off > 1e-3


def test_projection_rejects_recessive_series():
    """The dominant-content functional annihilates a pure recessive solution.

    The probe solution is built independently: series data taken at a far
    anchor, then continued inward by ODE integration to the projection point.
    """
    from heun_spectra._ivp import integrate_second_order
    from heun_spectra.series import asym_coeffs_infinity, eval_asymptotic

    ex = derive_exponents(P10, E10)
    rec = asym_coeffs_infinity(P10, E10, 1.0, 90)
    z_anchor = 24.0 / ex.alpha
    z = 16.0 / ex.alpha
    ev = eval_asymptotic(rec, z_anchor, 1e-10)

    def F(zz):
        return P10.A / zz**4 + P10.centrifugal / zz**2 - P10.Z / zz - E10

    w, wp = integrate_second_order(F, z_anchor, z, ev.value.real, ev.derivative.real, 1e-12)
    r = eval_asymptotic(rec, z, 1e-8)
    content = (r.value * wp - r.derivative * w) / (2.0 * ex.alpha)
    # the probe is recessive with unit leading coefficient, so its recessive
    # content is ~ |w / u_rec| ~ 1; the dominant readout must vanish
    recessive_scale = abs(w / r.value)
    assert recessive_scale == pytest.approx(1.0, rel=1e-6)
    assert abs(content) < 1e-10 * recessive_scale


def test_worked_example_energy(worked_example):
    assert worked_example.E == pytest.approx(-0.093111277969, abs=2e-11)
    assert worked_example.residual < 1e-8


def test_worked_example_zeta(worked_example):
    z1 = worked_example.zeta1
    assert abs(z1) == pytest.approx(1.0, abs=1e-12)
    assert worked_example.zeta2 == -z1.conjugate()
    assert z1.imag > 0
    assert z1 == pytest.approx(-0.059000052486 + 0.998257979586j, abs=2e-9)


def test_worked_example_leading_coefficients(worked_example):
    a0, b0 = worked_example.a0, worked_example.b0
    assert abs(a0) == pytest.approx(2.5451305418, rel=1e-8)
    assert abs(b0) == pytest.approx(4.1825205880, rel=1e-8)
    ratio = a0 / b0
    assert ratio.imag == pytest.approx(0.0, abs=1e-8)
    assert ratio.real == pytest.approx(2.5451305418 / 4.1825205880, rel=1e-8)
    # signs reproduce the published convention (both purely negative imaginary)
    assert a0 == pytest.approx(-2.5451305418j, rel=1e-8)
    assert b0 == pytest.approx(-4.1825205880j, rel=1e-8)


def test_worked_example_index(worked_example):
    assert abs(worked_example.nu1 - NU10) < 1e-9
    assert worked_example.nu2 == -worked_example.nu1


def test_physical_combination_constant_phase(worked_example):
    """zeta1 w1 + zeta2 w2 has a z-independent phase on the real axis."""
    sol1, sol2 = worked_example.floquet1, worked_example.floquet2
    phases = []
    for z in np.linspace(0.5, 2.5, 10):
        w1, _ = eval_floquet(sol1, z)
        w2, _ = eval_floquet(sol2, z)
        w = worked_example.zeta1 * w1 + worked_example.zeta2 * w2
        phases.append(cmath.phase(w / 1j))  # published convention: w in i*R
    spread = max(phases) - min(phases)
    assert spread < 1e-9 or abs(spread - math.pi) < 1e-9  # sign flips allowed


def test_eigenfunction_handoff(worked_example):
    """Connection and shooting waves are proportional across the annulus."""
    from heun_spectra import ShootingConfig
    from heun_spectra._ivp import integrate_second_order
    from heun_spectra.shooting import _anchors, _force_field, _start_from_zero

    cfg = ShootingConfig()
    E = worked_example.E
    z_near, z_match, _ = _anchors(P10, E, cfg)
    F = _force_field(P10, E)
    w, wp = _start_from_zero(P10, E, cfg, z_near)
    zs = np.linspace(0.6, 2.4, 10)
    ratios = []
    z_prev = z_near
    for z in zs:
        w, wp = integrate_second_order(F, z_prev, z, w, wp, 1e-12)
        z_prev = z
        w1, _ = eval_floquet(worked_example.floquet1, z)
        w2, _ = eval_floquet(worked_example.floquet2, z)
        w_conn = worked_example.zeta1 * w1 + worked_example.zeta2 * w2
        ratios.append(w_conn / w)
    ratios = np.array(ratios)
    assert np.max(np.abs(ratios / ratios[0] - 1.0)) < 1e-7


def test_default_window_floor():
    assert default_window(P10, E10) >= 20
    assert default_window(ProblemParams(A=100.0, Z=1.0, l=0), -0.05) >= 100
