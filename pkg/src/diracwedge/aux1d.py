"""Transverse 1-D interface operator on a strip of half-width gamma.

After diagonalizing the transmission matrix, the lowest transverse mode of
the attractive shell (tau < 0) solves the scalar transcendental equation

    F_gamma(k) = k tanh(k gamma) = kappa0,      kappa0 = -4 m tau / (4 + tau^2),

whose unique root k_gamma > kappa0 gives the strip ground-state energy
E(gamma) = m^2 - k_gamma^2.  E increases with gamma and approaches the
squared gap edge eps_tau^2 = m^2 - kappa0^2 from below as gamma -> infinity.

Note: E(gamma) can be negative for small gamma (E(1) ~ -0.066 at tau=-1,
m=1); the only hard bound asserted here is E < m^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ParameterError, PhysParams, derived_constants

__all__ = ["BracketError", "Aux1DResult", "secular_f", "ground_state"]

_BISECT_TOL = 1e-13


class BracketError(RuntimeError):
    """The secular bracket failed to enclose a root (bad kappa0)."""


@dataclass(frozen=True)
class Aux1DResult:
    gamma: float
    k_gamma: float
    E_gamma: float


def secular_f(k: float, gamma: float) -> float:
    """F_gamma(k) = k tanh(k gamma); strictly increasing in k >= 0."""
    if k < 0.0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return k * math.tanh(k * gamma)


def ground_state(p: PhysParams, gamma: float) -> Aux1DResult:
    """Solve F_gamma(k) = kappa0 and return (gamma, k_gamma, E_gamma).

    Bisection on [kappa0, kappa0 + 10 m + 10/gamma] (expanded if needed),
    then a single Newton polish; tanh(k gamma) < 1 forces k_gamma > kappa0,
    so the lower end is a strict bracket.
    """
    if p.tau >= 0.0:
        raise ParameterError("strip ground state is defined for tau < 0")
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    kap = derived_constants(p).kappa0

    lo = kap
    hi = kap + 10.0 * p.m + 10.0 / gamma
    f_hi = secular_f(hi, gamma) - kap
    grow = 0
    while f_hi <= 0.0:
        hi *= 2.0
        f_hi = secular_f(hi, gamma) - kap
        grow += 1
        if grow > 60:
            raise BracketError(
                f"no sign change on [{kap}, {hi}] for gamma={gamma}, "
                f"kappa0={kap}"
            )
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if secular_f(mid, gamma) - kap > 0.0:
            hi = mid
        else:
            lo = mid
    k = 0.5 * (lo + hi)
    # One Newton step squeezes out the last bisection digit.
    th = math.tanh(k * gamma)
    fprime = th + k * gamma * (1.0 - th * th)
    if fprime > 0.0:
        k -= (k * th - kap) / fprime
    return Aux1DResult(gamma=gamma, k_gamma=k, E_gamma=p.m * p.m - k * k)
