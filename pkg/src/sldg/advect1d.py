"""Constant-coefficient 1D shift + project update and its von Neumann analysis.

A piecewise polynomial on a uniform mesh is translated exactly by a
displacement of ``j + nu`` cells and L2-projected back onto the mesh.  Each
new cell receives the right part of donor cell ``i - 1 - j`` and the left
part of donor cell ``i - j``; the two overlap integrals only depend on
``nu`` and are assembled once per distinct shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import _check_order, basis_2d, gauss_legendre, legendre_1d
from .errors import ConfigurationError

Boundary = Literal["periodic", "zero_inflow"]
BOUNDARIES = ("periodic", "zero_inflow")


@dataclass(frozen=True)
class ShiftDecomposition:
    """Displacement ``j + nu`` in units of cells, ``0 <= nu < 1``."""

    j: int
    nu: float

    @property
    def displacement(self) -> float:
        return self.j + self.nu


def split_displacement(d) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised floor split of displacements (in cells) into ``(j, nu)``."""
    d = np.asarray(d, dtype=float)
    j = np.floor(d)
    nu = d - j
    # d slightly below an integer can round nu up to exactly 1
    wrap = nu >= 1.0
    j = np.where(wrap, j + 1.0, j)
    nu = np.where(wrap, 0.0, nu)
    return j.astype(np.int64), nu


def decompose_shift(a: float, dt: float, dx: float) -> ShiftDecomposition:
    """Integer and fractional cell shift for speed ``a`` over time ``dt``."""
    if not dx > 0:
        raise ConfigurationError(f"cell width must be positive, got {dx}")
    j, nu = split_displacement(a * dt / dx)
    return ShiftDecomposition(int(j), float(nu))


# ---------------------------------------------------------------------------
# Overlap matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlapMatrices:
    """Projection weights of the two donor cells for one fractional shift.

    ``left[l, k]`` multiplies coefficient ``k`` of donor ``i - 1 - j``,
    ``right[l, k]`` coefficient ``k`` of donor ``i - j``.
    """

    left: np.ndarray
    right: np.ndarray
    nu: float


def overlap_1d(nu, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Overlap matrices for an array of fractional shifts.

    Returns ``(left, right)`` with shape ``nu.shape + (M, M)``.  Each entry is
    an averaged integral of a product of two degree ``M - 1`` polynomials on a
    sub-interval, evaluated exactly with ``M`` Gauss points.
    """
    M = _check_order(M)
    nu = np.asarray(nu, dtype=float)
    if np.any((nu < 0.0) | (nu > 1.0)):
        raise ConfigurationError("fractional shift must lie in [0, 1]")
    rule = gauss_legendre(M)
    s, w = rule.points, rule.weights
    n = nu[..., None]
    # left piece: xi in [-1, -1 + 2 nu], donor coordinate xi + 2 - 2 nu
    xi_l = -1.0 + n * (1.0 + s)
    donor_l = 1.0 - n * (1.0 - s)
    # right piece: xi in [-1 + 2 nu, 1], donor coordinate xi - 2 nu
    xi_r = n + (1.0 - n) * s
    donor_r = -n + (1.0 - n) * s
    wl = 0.5 * n * w
    wr = 0.5 * (1.0 - n) * w
    left = np.einsum("...q,...ql,...qk->...lk", wl, legendre_1d(xi_l, M), legendre_1d(donor_l, M))
    right = np.einsum("...q,...ql,...qk->...lk", wr, legendre_1d(xi_r, M), legendre_1d(donor_r, M))
    exact = nu == 0.0
    if np.any(exact):
        left[exact] = 0.0
        right[exact] = np.eye(M)
    return left, right


def overlap_matrices(nu: float, M: int, eta_line: float | None = None) -> OverlapMatrices:
    """Overlap matrices for one shift.

    With ``eta_line`` the 2D basis restricted to that line is used instead,
    giving ``M(M+1)/2`` square matrices.  This variant integrates the 2D basis
    functions directly and serves as a reference for the factored line sweep.
    """
    M = _check_order(M)
    if not 0.0 <= nu <= 1.0:
        raise ConfigurationError(f"fractional shift must lie in [0, 1], got {nu}")
    if eta_line is None:
        left, right = overlap_1d(nu, M)
        return OverlapMatrices(left, right, float(nu))
    rule = gauss_legendre(M)
    s, w = rule.points, rule.weights
    xi_l = -1.0 + nu * (1.0 + s)
    xi_r = nu + (1.0 - nu) * s
    left = 0.5 * nu * np.einsum("q,ql,qk->lk", w, basis_2d(xi_l, eta_line, M),
                                basis_2d(xi_l + 2.0 - 2.0 * nu, eta_line, M))
    right = 0.5 * (1.0 - nu) * np.einsum("q,ql,qk->lk", w, basis_2d(xi_r, eta_line, M),
                                         basis_2d(xi_r - 2.0 * nu, eta_line, M))
    return OverlapMatrices(left, right, float(nu))


# ---------------------------------------------------------------------------
# Row update
# ---------------------------------------------------------------------------

def donor_indices(n: int, j, boundary: Boundary):
    """Donor cells ``(i - 1 - j, i - j)`` for every target cell ``i``.

    ``j`` may be an array; the cell axis is prepended.  For zero inflow,
    out-of-range donors are mapped to index ``n`` (a padding cell of zeros).
    """
    if boundary not in BOUNDARIES:
        raise ConfigurationError(f"unknown boundary {boundary!r}")
    i = np.arange(n).reshape((n,) + (1,) * np.ndim(j))
    right = i - np.asarray(j)
    left = right - 1
    if boundary == "periodic":
        return left % n, right % n
    left = np.where((left >= 0) & (left < n), left, n)
    right = np.where((right >= 0) & (right < n), right, n)
    return left, right


def advect_row(row: np.ndarray, shift: ShiftDecomposition, boundary: Boundary = "periodic",
               matrices: OverlapMatrices | None = None) -> np.ndarray:
    """Shift + project one row of 1D cell coefficients, shape ``(n, M)``."""
    row = np.asarray(row, dtype=float)
    n, M = row.shape
    if matrices is None:
        matrices = overlap_matrices(shift.nu, M)
    src = np.vstack([row, np.zeros((1, M))])
    il, ir = donor_indices(n, shift.j, boundary)
    return src[il] @ matrices.left.T + src[ir] @ matrices.right.T


# ---------------------------------------------------------------------------
# Von Neumann analysis (piecewise linear)
# ---------------------------------------------------------------------------

VARIANTS = ("modified", "lxw_dg")


def amplification_matrix(nu: float, variant: str, zeta: complex, M: int = 2) -> np.ndarray:
    """Symbol of the piecewise-linear update for Fourier factor ``zeta``."""
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown variant {variant!r}")
    if M != 2:
        raise ConfigurationError("amplification matrices are only available for M = 2")
    r3 = math.sqrt(3.0)
    z = complex(zeta)
    g11 = 1.0 + nu * (z - 1.0)
    g12 = r3 * nu * (1.0 - nu) * (z - 1.0)
    if variant == "modified":
        g21 = r3 * nu * (nu - 1.0) * (z - 1.0)
        g22 = 1.0 + 2.0 * nu**3 * (1.0 - z) + 6.0 * nu**2 * z - 3.0 * nu * (z + 1.0)
    else:
        g21 = r3 * nu * (1.0 - z)
        g22 = 1.0 - 3.0 * nu * (z + 1.0) + 3.0 * nu**2 * (z - 1.0)
    return np.array([[g11, g12], [g21, g22]], dtype=complex)


def kernel_symbol(nu: float, zeta: complex, M: int) -> np.ndarray:
    """Symbol ``right + zeta * left`` of the shift + project kernel at ``j = 0``."""
    m = overlap_matrices(nu, M)
    return m.right + complex(zeta) * m.left


def max_amplification(nu: float, variant: str, n_zeta: int = 256) -> float:
    """Largest spectral radius over ``n_zeta`` equispaced points of the unit circle."""
    theta = 2.0 * np.pi * np.arange(n_zeta) / n_zeta
    radius = 0.0
    for z in np.exp(-1j * theta):
        g = amplification_matrix(nu, variant, z)
        radius = max(radius, float(np.max(np.abs(np.linalg.eigvals(g)))))
    return radius


def predicted_amplification(nu: float, variant: str) -> float:
    """Closed-form maximum eigenvalue modulus for ``0 <= nu <= 1``."""
    if variant == "modified":
        return max(1.0, abs(1.0 - 6.0 * nu + 6.0 * nu**2))
    if variant == "lxw_dg":
        return max(1.0, abs(1.0 - 6.0 * nu))
    raise ConfigurationError(f"unknown variant {variant!r}")


__all__ = [
    "BOUNDARIES", "OverlapMatrices", "ShiftDecomposition", "VARIANTS",
    "advect_row", "amplification_matrix", "decompose_shift", "donor_indices",
    "kernel_symbol", "max_amplification", "overlap_1d", "overlap_matrices",
    "predicted_amplification", "split_displacement",
]
