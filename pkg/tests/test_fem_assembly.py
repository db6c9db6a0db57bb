"""Discrete form assembly: hermiticity, constraints, conjugation symmetry."""

import math

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from diracwedge.fem import assemble, build_mesh
from diracwedge.model import PhysParams, interface_matrices, pauli

RNG = np.random.default_rng(41)

P_ATTR = PhysParams(tau=-1.0, m=1.0, omega=math.pi / 4.0)
P_REP = PhysParams(tau=1.0, m=1.0, omega=math.pi / 4.0)


@pytest.fixture(scope="module")
def mesh():
    return build_mesh(P_ATTR, R=8.0, h=0.6)


def test_pencil_shapes_and_hermiticity(mesh):
    pencil = assemble(P_ATTR, mesh)
    n = pencil.n_reduced
    assert pencil.A.shape == (n, n)
    assert pencil.B.shape == (n, n)
    assert pencil.dof_map.shape == (mesh.n_dofs, n)
    assert n < mesh.n_dofs
    for mat in (pencil.A, pencil.B):
        assert sp.issparse(mat)
        diff = (mat - mat.conj().T).tocoo()
        top = np.max(np.abs(diff.data)) if diff.nnz else 0.0
        assert top <= 1e-14


def test_mass_matrix_positive(mesh):
    pencil = assemble(P_ATTR, mesh)
    low = spla.eigsh(pencil.B, k=1, which="SA", return_eigenvectors=False)
    assert low[0] > 0.0


def test_constraint_columns_encode_transmission(mesh):
    """dof_map reproduces u_minus = M u_plus along the interface."""
    pencil = assemble(P_ATTR, mesh)
    z = pencil.dof_map
    x = RNG.standard_normal(z.shape[1]) + 1j * RNG.standard_normal(z.shape[1])
    u = z @ x
    m_by_side = [m.entries for m in interface_matrices(P_ATTR)]
    for (p0, p1, m0, m1), side in zip(mesh.interface_edges,
                                      mesh.interface_sides):
        m_mat = m_by_side[side]
        for pv, mv in ((p0, m0), (p1, m1)):
            if pv == mesh.corner_vertex or mv == mesh.corner_vertex:
                continue
            up = u[2 * pv: 2 * pv + 2]
            um = u[2 * mv: 2 * mv + 2]
            np.testing.assert_allclose(um, m_mat @ up, atol=1e-12)
    # corner and Dirichlet boundary dofs vanish
    cv = mesh.corner_vertex
    np.testing.assert_allclose(u[2 * cv: 2 * cv + 2], 0.0, atol=0.0)
    for i in np.flatnonzero(mesh.outer_boundary):
        np.testing.assert_allclose(u[2 * i: 2 * i + 2], 0.0, atol=0.0)


def test_repulsive_form_dominates_mass(mesh):
    # x* A x >= m^2 x* B x is exact for tau > 0 on the constrained space
    pencil = assemble(P_REP, mesh)
    vals = spla.eigsh(pencil.A, k=3, M=pencil.B, sigma=0.9,
                      which="LM", return_eigenvectors=False)
    assert np.min(vals) >= P_REP.m ** 2 - 1e-10


def test_charge_conjugation_preserves_form_value(mesh):
    """sigma_1 conj(.) maps the constrained space to itself isometrically."""
    pencil = assemble(P_ATTR, mesh)
    z = pencil.dof_map
    n = z.shape[1]
    # Work in reduced coordinates: conjugation acts per kept vertex as
    # x -> sigma_1 conj(x), which dof_map intertwines with the full-space C.
    s1 = pauli(1)
    for _ in range(20):
        x = RNG.standard_normal(n) + 1j * RNG.standard_normal(n)
        y = np.empty_like(x)
        y[0::2] = np.conj(x[1::2])
        y[1::2] = np.conj(x[0::2])
        u = z @ x
        cu = np.empty_like(u)
        cu[0::2] = np.conj(u[1::2])
        cu[1::2] = np.conj(u[0::2])
        np.testing.assert_allclose(z @ y, cu, atol=1e-13)
        fx = float(np.real(np.vdot(x, pencil.A @ x)))
        fy = float(np.real(np.vdot(y, pencil.A @ y)))
        assert fy == pytest.approx(fx, rel=1e-12)
        bx = float(np.real(np.vdot(x, pencil.B @ x)))
        by = float(np.real(np.vdot(y, pencil.B @ y)))
        assert by == pytest.approx(bx, rel=1e-12)


def test_glue_mode_drops_jump(mesh):
    """include_interface=False glues plus to minus with no shell term."""
    pencil = assemble(P_ATTR, mesh, include_interface=False)
    assert pencil.info["include_interface"] is False
    vals = spla.eigsh(pencil.A, k=1, M=pencil.B, sigma=0.9,
                      which="LM", return_eigenvectors=False)
    # free Laplacian plus mass: nothing below m^2
    assert vals[0] >= P_ATTR.m ** 2 - 1e-10


def test_form_value_is_real_psd(mesh):
    pencil = assemble(P_ATTR, mesh)
    for _ in range(10):
        x = RNG.standard_normal(pencil.n_reduced) \
            + 1j * RNG.standard_normal(pencil.n_reduced)
        q = np.vdot(x, pencil.A @ x)
        assert abs(q.imag) <= 1e-10 * abs(q.real)
        assert q.real >= -1e-10
