"""Spin-orbit operator on the two arcs cut out by the wedge boundary.

Separation in polar coordinates reduces the shell-interaction Dirac operator
to the first-order angular operator J = -i sigma_3 d/dtheta + 1/2 acting on
spinors on the arcs (-omega, omega) and (omega, 2pi - omega), glued by the
transmission matrices M_l, M_r.  On each arc an eigenfunction with J phi =
lambda phi is a pure exponential pair

    phi_plus(theta)  = (A e^{i mu theta}, B e^{-i mu theta}),
    phi_minus(theta) = (C e^{i mu theta}, D e^{-i mu theta}),   mu = lambda - 1/2,

so the matching conditions collapse to a 4x4 homogeneous linear system
T(lambda) (A, B, C, D)^T = 0; lambda is an eigenvalue iff det T(lambda) = 0.
The secular solver here is the product of record; a dense discretization of J
lives in the test suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PhysParams, derived_constants, interface_matrices

__all__ = [
    "NoRootFound",
    "SecularSystem",
    "SpinOrbitRoot",
    "secular_matrix",
    "secular_det",
    "principal_eigenvalue",
    "spectrum_in_window",
    "angular_profile",
]

# Scan density fixed at 2000 points per unit spectral interval; minima of
# |det|^2 are refined by golden section and polished by Newton steps on the
# complex determinant restricted to the real axis.
_SCAN_DENSITY = 2000
_NEWTON_STEP_TOL = 1e-10
_SVD_MULT_CUT = 1e-7
_ROOT_DEDUP = 1e-7


class NoRootFound(RuntimeError):
    """No secular root could be bracketed in the requested interval."""


@dataclass(frozen=True)
class SecularSystem:
    """The 4x4 matching system at a fixed spectral parameter."""

    params: PhysParams
    lam: float
    matrix: np.ndarray  # (4, 4) complex, coefficient order (A, B, C, D)


@dataclass(frozen=True)
class SpinOrbitRoot:
    """An eigenvalue of the spin-orbit operator.

    ``coefficients`` holds ``multiplicity`` rows of (A, B, C, D), each scaled
    so the corresponding eigenfunction has unit L^2 norm over both arcs.
    """

    lam: float
    multiplicity: int
    coefficients: np.ndarray  # (multiplicity, 4) complex


def _secular_batch(p: PhysParams, lams: np.ndarray) -> np.ndarray:
    """T(lambda) for a whole batch of spectral parameters, shape (n, 4, 4)."""
    m_l, m_r = interface_matrices(p)
    ml, mr = m_l.entries, m_r.entries
    w = p.omega
    mu = np.asarray(lams, dtype=float) - 0.5
    ew = np.exp(1j * mu * w)           # e^{i mu omega}
    emw = np.exp(-1j * mu * w)
    efar = np.exp(1j * mu * (2.0 * np.pi - w))   # e^{i mu (2pi - omega)}
    emfar = np.exp(-1j * mu * (2.0 * np.pi - w))

    n = mu.shape[0]
    t = np.zeros((n, 4, 4), dtype=complex)
    # Matching at theta = omega: M_l phi_plus(omega) - phi_minus(omega) = 0.
    t[:, 0, 0] = ml[0, 0] * ew
    t[:, 0, 1] = ml[0, 1] * emw
    t[:, 0, 2] = -ew
    t[:, 1, 0] = ml[1, 0] * ew
    t[:, 1, 1] = ml[1, 1] * emw
    t[:, 1, 3] = -emw
    # Matching at theta = 2pi - omega (= -omega on the wedge side):
    # M_r phi_plus(-omega) - phi_minus(2pi - omega) = 0.
    t[:, 2, 0] = mr[0, 0] * emw
    t[:, 2, 1] = mr[0, 1] * ew
    t[:, 2, 2] = -efar
    t[:, 3, 0] = mr[1, 0] * emw
    t[:, 3, 1] = mr[1, 1] * ew
    t[:, 3, 3] = -emfar
    return t


def secular_matrix(p: PhysParams, lam: float) -> SecularSystem:
    """Matching matrix T(lambda) in the coefficient order (A, B, C, D)."""
    if p.omega >= np.pi / 2.0:
        raise ValueError("secular problem requires omega < pi/2")
    t = _secular_batch(p, np.array([float(lam)]))[0]
    return SecularSystem(params=p, lam=float(lam), matrix=t)


def secular_det(p: PhysParams, lams) -> np.ndarray:
    """det T(lambda), vectorized over ``lams``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    return np.linalg.det(_secular_batch(p, lams))


def _det_scale(p: PhysParams, lo: float, hi: float) -> float:
    probe = np.linspace(lo, hi, 257)
    vals = np.abs(secular_det(p, probe))
    med = float(np.median(vals))
    return med if med > 0.0 else float(np.max(vals)) + 1e-300


def _golden(p: PhysParams, a: float, c: float, width: float) -> float:
    """Golden-section minimization of |det T|^2 on [a, c]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    b = c - invphi * (c - a)
    d = a + invphi * (c - a)
    fb = abs(secular_det(p, b)[0]) ** 2
    fd = abs(secular_det(p, d)[0]) ** 2
    while c - a > width:
        if fb <= fd:
            c, d, fd = d, b, fb
            b = c - invphi * (c - a)
            fb = abs(secular_det(p, b)[0]) ** 2
        else:
            a, b, fb = b, d, fd
            d = a + invphi * (c - a)
            fd = abs(secular_det(p, d)[0]) ** 2
    return 0.5 * (a + c)


def _newton_polish(p: PhysParams, lam: float, lo: float, hi: float) -> float:
    """Newton iteration on the complex determinant along the real axis.

    Near a simple real root det T(lam) ~ (lam - root) g(root), so the real
    part of det/det' is the signed distance to the root; the iteration is
    quadratically convergent and also contracts at double roots.
    """
    h = 1e-7
    for _ in range(30):
        f = secular_det(p, lam)[0]
        fp = (secular_det(p, lam + h)[0] - secular_det(p, lam - h)[0]) / (2.0 * h)
        if fp == 0.0:
            break
        step = (f / fp).real
        new = lam - step
        if not (lo - 1e-6 <= new <= hi + 1e-6):
            break
        lam = new
        if abs(step) <= _NEWTON_STEP_TOL:
            break
    return lam


def _null_space(p: PhysParams, lam: float) -> tuple[int, np.ndarray, float]:
    t = _secular_batch(p, np.array([lam]))[0]
    u, s, vh = np.linalg.svd(t)
    mult = int(np.sum(s <= _SVD_MULT_CUT * s[0]))
    mult = max(mult, 1)
    vecs = vh[4 - mult:].conj()
    return mult, vecs, float(s[-1] / s[0])


def _normalize_profiles(p: PhysParams, vecs: np.ndarray) -> np.ndarray:
    # |phi|^2 integrates to (|A|^2+|B|^2) 2 omega + (|C|^2+|D|^2)(2pi-2 omega)
    # because the angular exponentials are unimodular.
    w = p.omega
    out = np.array(vecs, dtype=complex)
    for row in out:
        nrm = (abs(row[0]) ** 2 + abs(row[1]) ** 2) * 2.0 * w \
            + (abs(row[2]) ** 2 + abs(row[3]) ** 2) * (2.0 * np.pi - 2.0 * w)
        row /= np.sqrt(nrm)
    return out


def _candidate_grid(lo: float, hi: float) -> np.ndarray:
    n = int(np.ceil((hi - lo) * _SCAN_DENSITY)) + 1
    grid = np.linspace(lo, hi, max(n, 16))
    # Geometric tails resolve roots hugging the window edges (weak coupling
    # pushes the principal root exponentially close to 1/2).
    tails = []
    span = hi - lo
    for k in range(4, 13):
        off = 10.0 ** (-k) * span
        tails.append(lo + off)
        tails.append(hi - off)
    return np.unique(np.concatenate([grid, np.array(tails)]))


def _roots_in(p: PhysParams, lo: float, hi: float) -> list[float]:
    grid = _candidate_grid(lo, hi)
    vals = np.abs(secular_det(p, grid)) ** 2
    scale = _det_scale(p, lo, hi)
    accept = (1e-6 * scale) ** 2

    roots: list[float] = []
    for i in range(1, len(grid) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1] \
                and vals[i] < 0.5 * scale ** 2:
            lam = _golden(p, grid[i - 1], grid[i + 1], 1e-8)
            lam = _newton_polish(p, lam, grid[i - 1], grid[i + 1])
            if abs(secular_det(p, lam)[0]) ** 2 <= accept and lo <= lam <= hi:
                roots.append(lam)
    roots.sort()
    merged: list[float] = []
    for lam in roots:
        if not merged or abs(lam - merged[-1]) > _ROOT_DEDUP:
            merged.append(lam)
    return merged


def _make_root(p: PhysParams, lam: float) -> SpinOrbitRoot:
    mult, vecs, _ = _null_space(p, lam)
    return SpinOrbitRoot(lam=lam, multiplicity=mult,
                         coefficients=_normalize_profiles(p, vecs))


def principal_eigenvalue(p: PhysParams) -> SpinOrbitRoot:
    """The unique simple eigenvalue in (0, 1/2).

    Raises NoRootFound with the scan summary if no determinant minimum in the
    open interval survives refinement; that signals parameter pathology (tau
    at an excluded value, omega at the straight-line limit) rather than an
    expected outcome.
    """
    if p.omega >= np.pi / 2.0:
        raise ValueError("principal eigenvalue requires omega < pi/2")
    roots = _roots_in(p, 1e-12, 0.5 - 1e-12)
    if not roots:
        scale = _det_scale(p, 0.0, 0.5)
        raise NoRootFound(
            f"no secular root in (0, 1/2) for tau={p.tau}, omega={p.omega}; "
            f"|det| scale on the scan was {scale:.3e}"
        )
    lam = roots[0]
    if len(roots) > 1:
        # the principal root should be simple; refuse to guess between extras
        raise NoRootFound(
            f"expected one root in (0, 1/2), refinement kept {roots}"
        )
    return _make_root(p, lam)


def spectrum_in_window(p: PhysParams, lo: float, hi: float) -> list[SpinOrbitRoot]:
    """All secular roots in [lo, hi], sorted ascending, with multiplicities."""
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError(f"window must be bounded with lo < hi, got [{lo}, {hi}]")
    return [_make_root(p, lam) for lam in _roots_in(p, lo, hi)]


def angular_profile(p: PhysParams, root: SpinOrbitRoot, theta) -> np.ndarray:
    """Eigenfunction phi_lambda evaluated at angle(s) theta, extended
    2pi-periodically; on the boundary rays the wedge-side branch is used.

    For a multiplicity-2 root the first null vector is taken.
    """
    a, b, c, d = root.coefficients[0]
    mu = root.lam - 0.5
    th = np.asarray(theta, dtype=float)
    scalar = th.ndim == 0
    th = np.atleast_1d(th)
    # Wrap into [-omega, 2pi - omega).
    wrapped = np.mod(th + p.omega, 2.0 * np.pi) - p.omega
    plus = wrapped <= p.omega
    out = np.empty(th.shape + (2,), dtype=complex)
    ew = np.exp(1j * mu * wrapped)
    out[plus, 0] = a * ew[plus]
    out[plus, 1] = b * np.conj(ew[plus])
    out[~plus, 0] = c * ew[~plus]
    out[~plus, 1] = d * np.conj(ew[~plus])
    return out[0] if scalar else out
