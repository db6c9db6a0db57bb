"""P1 spinor finite elements for the shell-coupled quadratic form.

The full form on the duplicated-DOF space is

    ||grad u||^2 + m^2 ||u||^2 + (2m/tau) ||u_plus - u_minus||^2 on the rays,

all pieces real symmetric.  The transmission constraint u_minus = M u_plus
is imposed by elimination through a sparse prolongation Z (complex because
M is), so the reduced pencil (Z* A Z, Z* B Z) inherits the form identities
exactly: positivity, and for tau > 0 the lower bound by m^2 times the mass.
Constrained discrete functions satisfy the trace relation pointwise along
every ray edge (linear traces, constant M per ray), hence lie in the form
domain, and Dirichlet Ritz values are upper bounds for the min-max values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..model import ParameterError, PhysParams, interface_matrices
from .mesh import SIDE_LEFT, SIDE_RIGHT, Mesh

__all__ = ["HermitianPencil", "assemble"]


@dataclass(frozen=True)
class HermitianPencil:
    A: sp.csr_matrix              # reduced stiffness + mass + shell term
    B: sp.csr_matrix              # reduced mass, positive definite
    dof_map: sp.csr_matrix        # prolongation: reduced -> full DOFs
    info: dict = field(default_factory=dict)

    @property
    def n_reduced(self) -> int:
        return self.A.shape[0]

    @property
    def n_full(self) -> int:
        return self.dof_map.shape[0]


def _scalar_element_matrices(mesh: Mesh):
    v = mesh.vertices
    t = mesh.triangles
    p0, p1, p2 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    d1 = p1 - p0
    d2 = p2 - p0
    area = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    # P1 gradient coefficients: grad phi_i = (b_i, c_i)
    b = np.stack([p1[:, 1] - p2[:, 1], p2[:, 1] - p0[:, 1],
                  p0[:, 1] - p1[:, 1]], axis=1) / (2.0 * area)[:, None]
    c = np.stack([p2[:, 0] - p1[:, 0], p0[:, 0] - p2[:, 0],
                  p1[:, 0] - p0[:, 0]], axis=1) / (2.0 * area)[:, None]
    k_loc = area[:, None, None] * (b[:, :, None] * b[:, None, :]
                                   + c[:, :, None] * c[:, None, :])
    m_loc = (area / 12.0)[:, None, None] * (np.ones((3, 3)) + np.eye(3))
    return k_loc, m_loc


def _scatter_spinor(tris: np.ndarray, loc: np.ndarray, n_dofs: int):
    rows, cols, vals = [], [], []
    for i in range(3):
        for j in range(3):
            for comp in range(2):
                rows.append(2 * tris[:, i] + comp)
                cols.append(2 * tris[:, j] + comp)
                vals.append(loc[:, i, j])
    return sp.coo_matrix(
        (np.concatenate(vals),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_dofs, n_dofs),
    )


def _jump_matrix(p: PhysParams, mesh: Mesh) -> sp.coo_matrix:
    coef = 2.0 * p.m / p.tau
    # node order (p0, p1, m0, m1); edge mass (len/6) [[2,1],[1,2]] with the
    # plus/minus difference pattern
    pattern = np.array([
        [2.0, 1.0, -2.0, -1.0],
        [1.0, 2.0, -1.0, -2.0],
        [-2.0, -1.0, 2.0, 1.0],
        [-1.0, -2.0, 1.0, 2.0],
    ])
    rows, cols, vals = [], [], []
    v = mesh.vertices
    for p0, p1, m0, m1 in mesh.interface_edges:
        length = float(np.hypot(*(v[p1] - v[p0])))
        local = np.kron(coef * length / 6.0 * pattern, np.eye(2))
        dofs = np.array([2 * p0, 2 * p0 + 1, 2 * p1, 2 * p1 + 1,
                         2 * m0, 2 * m0 + 1, 2 * m1, 2 * m1 + 1])
        rr, cc = np.meshgrid(dofs, dofs, indexing="ij")
        rows.append(rr.ravel())
        cols.append(cc.ravel())
        vals.append(local.ravel())
    n = mesh.n_dofs
    return sp.coo_matrix(
        (np.concatenate(vals),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )


def _prolongation(p: PhysParams, mesh: Mesh,
                  include_interface: bool) -> sp.csr_matrix:
    m_l, m_r = interface_matrices(p)
    side_mat = {SIDE_LEFT: m_l.entries, SIDE_RIGHT: m_r.entries}
    if not all(np.all(np.isfinite(m)) for m in side_mat.values()):
        raise ParameterError("transmission matrix not finite; bad tau")
    eye2 = np.eye(2, dtype=complex)

    minus_of: dict[int, tuple[int, int]] = {}
    for (p0, p1, m0, m1), side in zip(mesh.interface_edges,
                                      mesh.interface_sides):
        if m0 != p0:
            minus_of[int(m0)] = (int(p0), int(side))
        if m1 != p1:
            minus_of[int(m1)] = (int(p1), int(side))

    dirichlet = mesh.bc == "dirichlet"
    nv = mesh.n_vertices
    reduced: dict[int, int] = {}
    for vtx in range(nv):
        if dirichlet and mesh.outer_boundary[vtx]:
            continue
        if include_interface and vtx == mesh.corner_vertex:
            continue
        if vtx in minus_of:
            continue
        reduced[vtx] = len(reduced)

    rows, cols, vals = [], [], []
    for vtx in range(nv):
        if dirichlet and mesh.outer_boundary[vtx]:
            continue
        if include_interface and vtx == mesh.corner_vertex:
            continue
        pair = minus_of.get(vtx)
        if pair is None:
            r = reduced[vtx]
            for comp in range(2):
                rows.append(2 * vtx + comp)
                cols.append(2 * r + comp)
                vals.append(1.0 + 0.0j)
        else:
            plus, side = pair
            if plus not in reduced:
                continue  # plus copy itself eliminated to zero
            r = reduced[plus]
            mat = side_mat[side] if include_interface else eye2
            for comp in range(2):
                for k in range(2):
                    if mat[comp, k] != 0.0:
                        rows.append(2 * vtx + comp)
                        cols.append(2 * r + k)
                        vals.append(complex(mat[comp, k]))
    n_red = 2 * len(reduced)
    z = sp.coo_matrix((vals, (rows, cols)), shape=(mesh.n_dofs, n_red))
    return z.tocsr()


def assemble(p: PhysParams, mesh: Mesh,
             include_interface: bool = True) -> HermitianPencil:
    """Reduced Hermitian pencil (A, B) of the form on the given mesh.

    include_interface=False glues the two sides with the identity and drops
    the shell term (plain -Laplace + m^2 for sanity checks).
    """
    k_loc, m_loc = _scalar_element_matrices(mesh)
    n = mesh.n_dofs
    stiff = _scatter_spinor(mesh.triangles, k_loc, n)
    mass = _scatter_spinor(mesh.triangles, m_loc, n)
    a_full = (stiff + p.m ** 2 * mass).tocsr()
    if include_interface:
        a_full = (a_full + _jump_matrix(p, mesh).tocsr()).tocsr()
    b_full = mass.tocsr()

    z = _prolongation(p, mesh, include_interface)
    a_red = (z.getH() @ a_full @ z).tocsr()
    b_red = (z.getH() @ b_full @ z).tocsr()
    a_red = ((a_red + a_red.getH()) * 0.5).tocsr()
    b_red = ((b_red + b_red.getH()) * 0.5).tocsr()

    info = dict(mesh.info)
    info.update({
        "tau": p.tau, "m": p.m, "omega": p.omega, "bc": mesh.bc,
        "include_interface": include_interface,
        "n_full": n, "n_reduced": a_red.shape[0],
        "n_triangles": int(mesh.triangles.shape[0]),
    })
    return HermitianPencil(A=a_red, B=b_red, dof_map=z, info=info)
