"""Local DG solver for the 1D Poisson problem ``phi'' = rho - rho0``.

The first-order system ``E' = rho - rho0``, ``phi' = E`` is discretised with
one-sided interface values (E from the left, phi from the right).  This gives
a block lower bidiagonal system for E and a block upper bidiagonal system for
phi, each solved with a single substitution sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DGField1D, _check_order, gauss_legendre, legendre_1d, legendre_1d_deriv
from .errors import CompatibilityError, ConfigurationError

# tolerance on |mean(P)| relative to the size of P for periodic solves
COMPATIBILITY_TOL = 1e-10


@dataclass(frozen=True)
class LdgOperator:
    """Block matrices of the LDG system on a uniform 1D mesh."""

    M: int
    mx: int
    lower: float
    upper: float
    S: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    A_inv: np.ndarray
    C_inv: np.ndarray

    @property
    def dx(self) -> float:
        return (self.upper - self.lower) / self.mx

    @property
    def centers(self) -> np.ndarray:
        return self.lower + (np.arange(self.mx) + 0.5) * self.dx


def stiffness(M: int) -> np.ndarray:
    """``S[l, k] = int_{-1}^{1} P_l'(xi) P_k(xi) dxi`` for the orthonormal basis."""
    rule = gauss_legendre(M)
    dphi = legendre_1d_deriv(rule.points, M)
    phi = legendre_1d(rule.points, M)
    return np.einsum("q,ql,qk->lk", rule.weights, dphi, phi)


def assemble(M: int, mx: int, lower: float, upper: float) -> LdgOperator:
    """Build and pre-invert the LDG block matrices."""
    M = _check_order(M)
    if mx < 1:
        raise ConfigurationError(f"element count must be positive, got {mx}")
    if not upper > lower:
        raise ConfigurationError("interval bounds must satisfy lower < upper")
    S = stiffness(M)
    r = np.sqrt(2.0 * np.arange(1, M + 1) - 1.0)
    rr = np.outer(r, r)
    # 1-based parity: (-1)^l and (-1)^k with l, k = 1..M
    sl = (-1.0) ** np.arange(1, M + 1)[:, None]
    sk = (-1.0) ** np.arange(1, M + 1)[None, :]
    A = rr - S
    B = sl * rr
    C = -sk * sl * rr - S
    D = -sk * rr
    try:
        A_inv = np.linalg.inv(A)
        C_inv = np.linalg.inv(C)
    except np.linalg.LinAlgError as exc:
        raise ConfigurationError(f"singular LDG block for M={M}") from exc
    return LdgOperator(M, mx, float(lower), float(upper), S, A, B, C, D, A_inv, C_inv)


def _check_input(op: LdgOperator, P: DGField1D) -> np.ndarray:
    coeffs = np.asarray(P.coeffs, dtype=float)
    if coeffs.shape != (op.mx, op.M):
        raise ConfigurationError(f"right-hand side shape {coeffs.shape} != {(op.mx, op.M)}")
    return coeffs


def solve_mixed(op: LdgOperator, P: DGField1D, gamma: float, beta: float) -> tuple[DGField1D, DGField1D]:
    """Solve with ``phi'(a) = gamma`` and ``phi(b) = beta``; returns ``(E, phi)``."""
    p = _check_input(op, P)
    dx = op.dx
    r = np.sqrt(2.0 * np.arange(1, op.M + 1) - 1.0)
    sgn = (-1.0) ** np.arange(1, op.M + 1)
    E = np.empty_like(p)
    E[0] = op.A_inv @ (dx * p[0] - sgn * r * gamma)
    for i in range(1, op.mx):
        E[i] = op.A_inv @ (dx * p[i] - op.B @ E[i - 1])
    phi = np.empty_like(p)
    phi[-1] = op.C_inv @ (dx * E[-1] - r * beta)
    for i in range(op.mx - 2, -1, -1):
        phi[i] = op.C_inv @ (dx * E[i] - op.D @ phi[i + 1])
    return DGField1D(E, op.lower, op.upper), DGField1D(phi, op.lower, op.upper)


def _moment_term(op: LdgOperator, p: np.ndarray, shift: float) -> float:
    # (1/(b-a)) int (s - shift) P(s) ds, exact for the piecewise polynomial P
    length = op.upper - op.lower
    first = op.dx * np.sum((op.centers - shift) * p[:, 0])
    second = op.dx**2 / (2.0 * math.sqrt(3.0)) * np.sum(p[:, 1]) if op.M > 1 else 0.0
    return (first + second) / length


def gamma_for_dirichlet(op: LdgOperator, P: DGField1D, alpha: float, beta: float) -> float:
    """``gamma`` that turns the mixed problem into ``phi(a) = alpha``, ``phi(b) = beta``."""
    p = _check_input(op, P)
    return (beta - alpha) / (op.upper - op.lower) + _moment_term(op, p, op.upper)


def gamma_for_periodic(op: LdgOperator, P: DGField1D, reference_scale: float = 0.0) -> float:
    """``gamma`` giving a periodic solution (with ``beta = 0``).

    ``reference_scale`` widens the compatibility tolerance when ``P`` was
    obtained by subtracting a large background from the density.
    """
    p = _check_input(op, P)
    scale = max(float(np.max(np.abs(p))), reference_scale)
    if abs(float(np.mean(p[:, 0]))) > COMPATIBILITY_TOL * scale:
        raise CompatibilityError(f"right-hand side has nonzero mean {np.mean(p[:, 0]):.3e}")
    return _moment_term(op, p, 0.0)


def solve_periodic(op: LdgOperator, rho: DGField1D) -> tuple[DGField1D, DGField1D]:
    """Periodic solve for a charge density; ``rho0`` is the domain average of ``rho``."""
    coeffs = _check_input(op, rho).copy()
    scale = float(np.max(np.abs(coeffs)))
    coeffs[:, 0] -= np.mean(coeffs[:, 0])
    P = DGField1D(coeffs, op.lower, op.upper)
    return solve_mixed(op, P, gamma_for_periodic(op, P, scale), 0.0)


__all__ = [
    "COMPATIBILITY_TOL", "LdgOperator", "assemble", "gamma_for_dirichlet", "gamma_for_periodic",
    "solve_mixed", "solve_periodic", "stiffness",
]
