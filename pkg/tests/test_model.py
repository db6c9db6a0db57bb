"""Transmission-matrix algebra and derived constants."""

import math

import numpy as np
import pytest

from diracwedge.model import (
    ParameterError,
    PhysParams,
    charge_conjugate,
    derived_constants,
    interface_matrices,
    pauli,
    sigma_dot,
    special_matrices,
    transmission_matrix,
)

RNG = np.random.default_rng(20240817)

S0, S1, S2, S3 = (pauli(j) for j in range(4))


def random_params(rng, n):
    """n valid (tau, omega) draws away from the excluded strengths."""
    out = []
    while len(out) < n:
        tau = float(rng.uniform(-6.0, 6.0))
        if min(abs(tau - 2.0), abs(tau + 2.0), abs(tau)) < 1e-2:
            continue
        omega = float(rng.uniform(1e-3, math.pi / 2.0))
        out.append(PhysParams(tau=tau, m=float(rng.uniform(0.2, 3.0)), omega=omega))
    return out


def random_unit(rng):
    phi = float(rng.uniform(0.0, 2.0 * math.pi))
    return (math.cos(phi), math.sin(phi))


def test_pauli_values():
    assert np.array_equal(S3, np.diag([1.0, -1.0]))
    assert np.array_equal(S1, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.array_equal(S2, np.array([[0.0, -1.0j], [1.0j, 0.0]]))
    assert np.max(np.abs(S1 @ S2 + S2 @ S1)) == 0.0
    assert np.max(np.abs(S1 @ S2 - 1j * S3)) == 0.0


def test_sigma_dot_unpacks_components():
    v = (0.3, -1.2)
    np.testing.assert_allclose(sigma_dot(v), v[0] * S1 + v[1] * S2, atol=0.0)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        PhysParams(tau=2.0, m=1.0, omega=0.5)
    with pytest.raises(ParameterError):
        PhysParams(tau=0.0, m=1.0, omega=0.5)
    with pytest.raises(ParameterError):
        PhysParams(tau=-2.0 + 1e-12, m=1.0, omega=0.5)
    with pytest.raises(ParameterError):
        PhysParams(tau=-1.0, m=0.0, omega=0.5)
    with pytest.raises(ParameterError):
        PhysParams(tau=-1.0, m=1.0, omega=math.pi / 2.0 + 1e-6)
    with pytest.raises(ParameterError):
        PhysParams(tau=-1.0, m=1.0, omega=0.0)
    with pytest.raises(ParameterError):
        PhysParams(tau=float("nan"), m=1.0, omega=0.5)
    # pi/2 itself is the straight-line reference case and must be accepted
    PhysParams(tau=-1.0, m=1.0, omega=math.pi / 2.0)


def test_derived_constants_reference_point():
    dc = derived_constants(PhysParams(tau=-1.0, m=1.0, omega=0.3))
    assert dc.a == pytest.approx(5.0 / 3.0, abs=1e-15)
    assert dc.b == pytest.approx(-4.0 / 3.0, abs=1e-15)
    assert dc.eps_tau == pytest.approx(3.0 / 5.0, abs=1e-15)
    assert dc.kappa0 == pytest.approx(4.0 / 5.0, abs=1e-15)
    assert dc.kappa_tau == pytest.approx(41.0 / 9.0, abs=1e-14)
    assert dc.c_tau == pytest.approx(20.0 / 9.0, abs=1e-14)


def test_gap_edge_identity_attractive():
    # m^2 = kappa0^2 + eps_tau^2 whenever tau < 0
    for p in random_params(RNG, 40):
        if p.tau >= 0.0:
            continue
        dc = derived_constants(p)
        assert p.m ** 2 - dc.kappa0 ** 2 - dc.eps_tau ** 2 == pytest.approx(
            0.0, abs=1e-13 * p.m ** 2
        )


def test_gap_edge_weak_coupling_limit():
    eps = [
        derived_constants(PhysParams(tau=t, m=1.0, omega=0.5)).eps_tau
        for t in (-1e-2, -1e-4, -1e-6)
    ]
    assert abs(eps[-1] - 1.0) < 1e-5
    assert eps[0] < eps[1] < eps[2] < 1.0


def test_transmission_matrix_reference_entries():
    # tau=-1 on the upper-ray normal: [[5/3, -(4/3)e^{-iw}], [-(4/3)e^{iw}, 5/3]]
    for omega in (0.2, math.pi / 4, 1.1):
        p = PhysParams(tau=-1.0, m=1.0, omega=omega)
        m_l = interface_matrices(p)[0].entries
        ref = np.array(
            [
                [5.0 / 3.0, -(4.0 / 3.0) * np.exp(-1j * omega)],
                [-(4.0 / 3.0) * np.exp(1j * omega), 5.0 / 3.0],
            ]
        )
        np.testing.assert_allclose(m_l, ref, atol=1e-15)


def test_matrix_identities_random_sweep():
    for p in random_params(RNG, 60):
        nu = random_unit(RNG)
        tm = transmission_matrix(p, nu)
        m = tm.entries
        dc = derived_constants(p)
        assert abs(np.linalg.det(m) - 1.0) < 1e-12
        np.testing.assert_allclose(m, m.conj().T, atol=1e-14)
        np.testing.assert_allclose(S3 @ m @ S3, np.linalg.inv(m), atol=1e-11)
        np.testing.assert_allclose(tm.inv @ m, S0, atol=1e-13)
        np.testing.assert_allclose(m.conj().T @ S3 @ m, S3, atol=1e-12)
        # quadratic relations behind the singular-sequence profile
        np.testing.assert_allclose(m @ m + S0, 2.0 * dc.a * m, atol=1e-11)
        np.testing.assert_allclose(
            (S0 - m) @ (S0 - m), 2.0 * (dc.a - 1.0) * m, atol=1e-11
        )


def test_invert_flag_gives_inverse():
    p = PhysParams(tau=1.3, m=0.7, omega=0.9)
    nu = random_unit(RNG)
    m = transmission_matrix(p, nu).entries
    mi = transmission_matrix(p, nu, invert=True).entries
    np.testing.assert_allclose(m @ mi, S0, atol=1e-14)


def test_transmission_matrix_rejects_non_unit_normal():
    p = PhysParams(tau=-1.0, m=1.0, omega=0.5)
    with pytest.raises(ParameterError):
        transmission_matrix(p, (1.0, 1.0))


def test_interface_matrices_are_conjugate_pair():
    # mirroring the normal in y conjugates and inverts: M_r = conj(M_l^{-1})
    for p in random_params(RNG, 10):
        m_l, m_r = interface_matrices(p)
        np.testing.assert_allclose(m_r.entries, np.conj(m_l.inv), atol=1e-15)


def test_diagonalization():
    p = PhysParams(tau=-1.0, m=1.0, omega=0.4)
    for _ in range(20):
        nu = random_unit(RNG)
        m_tilde, theta = special_matrices(p, nu)
        np.testing.assert_allclose(theta @ theta.conj().T, S0, atol=1e-14)
        np.testing.assert_allclose(
            m_tilde.entries, np.diag([3.0, 1.0 / 3.0]), atol=1e-14
        )
        m = transmission_matrix(p, nu).entries
        np.testing.assert_allclose(
            theta.conj().T @ m @ theta, m_tilde.entries, atol=1e-14
        )


def test_shell_strength_identities():
    # z (M_l^2 + I) = -(8 m tau / (4 - tau^2)) M_l and the jump twin
    for p in random_params(RNG, 30):
        m_l = interface_matrices(p)[0].entries
        t, m = p.tau, p.m
        z = -4.0 * m * t / (t * t + 4.0)
        coef = 8.0 * m * t / (4.0 - t * t)
        np.testing.assert_allclose(
            z * (m_l @ m_l + S0), -coef * m_l, atol=1e-11 * max(1.0, abs(coef))
        )
        np.testing.assert_allclose(
            (2.0 * m / t) * (S0 - m_l) @ (S0 - m_l),
            coef * m_l,
            atol=1e-11 * max(1.0, abs(coef)),
        )


def test_charge_conjugation_intertwines_transmission():
    # sigma_1 conj(M) = M sigma_1, so C preserves the transmission constraint
    p = PhysParams(tau=-1.7, m=1.0, omega=0.6)
    nu = random_unit(RNG)
    m = transmission_matrix(p, nu).entries
    np.testing.assert_allclose(S1 @ np.conj(m), m @ S1, atol=1e-15)
    u = RNG.standard_normal(2) + 1j * RNG.standard_normal(2)
    np.testing.assert_allclose(charge_conjugate(m @ u), m @ charge_conjugate(u), atol=1e-14)
    # involution on arrays of spinors
    batch = RNG.standard_normal((5, 2)) + 1j * RNG.standard_normal((5, 2))
    np.testing.assert_allclose(charge_conjugate(charge_conjugate(batch)), batch, atol=0.0)
