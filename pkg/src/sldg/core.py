"""Legendre bases, Gauss quadrature, Cartesian meshes and DG field storage.

Coefficients are stored cell-major with the basis index innermost:
a 2D field has shape ``(mx, mv, M(M+1)/2)`` and a 1D field ``(mx, M)``.
Basis functions are orthonormal under the *averaged* inner products
``1/2 int_{-1}^{1}`` (1D) and ``1/4 int int_{[-1,1]^2}`` (2D), so the first
coefficient of every cell is its mean value.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ConfigurationError, DomainError, UndefinedNormError

MAX_ORDER = 5
MAX_GAUSS_POINTS = 16

_SQ3 = math.sqrt(3.0)
_SQ5 = math.sqrt(5.0)
_SQ7 = math.sqrt(7.0)

# (degree in xi, degree in eta) of each 2D basis function, in storage order.
BASIS_2D_INDEX = (
    (0, 0),
    (1, 0), (0, 1),
    (1, 1), (2, 0), (0, 2),
    (2, 1), (1, 2), (3, 0), (0, 3),
    (3, 1), (1, 3), (2, 2), (4, 0), (0, 4),
)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre rule on [-1, 1]."""

    order: int
    points: np.ndarray
    weights: np.ndarray


@functools.lru_cache(maxsize=None)
def gauss_legendre(n: int) -> GaussRule:
    """Return the ``n``-point Gauss-Legendre rule on [-1, 1].

    Nodes are found by Newton iteration on the Legendre polynomial of
    degree ``n`` (three-term recurrence), then symmetrised.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_GAUSS_POINTS:
        raise ConfigurationError(
            f"Gauss rule size must be an integer in [1, {MAX_GAUSS_POINTS}], got {n!r}")
    n = int(n)
    i = np.arange(n)
    x = np.cos(np.pi * (i + 0.75) / (n + 0.5))
    for _ in range(100):
        p_prev = np.ones_like(x)
        p = x.copy()
        for k in range(2, n + 1):
            p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-15:
            break
    # derivative at the converged nodes for the weights
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    order = np.argsort(x)
    x, w = x[order], w[order]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    if n % 2 == 1:
        x[n // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return GaussRule(n, x, w)


def tensor_points(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``n*n`` tensor Gauss points ``(xi, eta, weight)``, xi varying slowest."""
    rule = gauss_legendre(n)
    xi, eta = np.meshgrid(rule.points, rule.points, indexing="ij")
    w = np.outer(rule.weights, rule.weights)
    return xi.ravel(), eta.ravel(), w.ravel()


# ---------------------------------------------------------------------------
# Bases
# ---------------------------------------------------------------------------

def _check_order(M: int) -> int:
    if not isinstance(M, (int, np.integer)) or not 1 <= M <= MAX_ORDER:
        raise ConfigurationError(f"order M must be an integer in [1, {MAX_ORDER}], got {M!r}")
    return int(M)


def n_basis_2d(M: int) -> int:
    return M * (M + 1) // 2


def legendre_1d(xi, M: int) -> np.ndarray:
    """Values of the first ``M`` orthonormal Legendre polynomials, shape ``(..., M)``."""
    M = _check_order(M)
    xi = np.asarray(xi, dtype=float)
    out = np.empty(xi.shape + (M,))
    out[..., 0] = 1.0
    if M > 1:
        out[..., 1] = _SQ3 * xi
    if M > 2:
        out[..., 2] = 0.5 * _SQ5 * (3.0 * xi**2 - 1.0)
    if M > 3:
        out[..., 3] = 0.5 * _SQ7 * (5.0 * xi**3 - 3.0 * xi)
    if M > 4:
        out[..., 4] = 0.375 * (35.0 * xi**4 - 30.0 * xi**2 + 3.0)
    return out


def legendre_1d_deriv(xi, M: int) -> np.ndarray:
    """d/dxi of :func:`legendre_1d`."""
    M = _check_order(M)
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape + (M,))
    if M > 1:
        out[..., 1] = _SQ3
    if M > 2:
        out[..., 2] = 3.0 * _SQ5 * xi
    if M > 3:
        out[..., 3] = 0.5 * _SQ7 * (15.0 * xi**2 - 3.0)
    if M > 4:
        out[..., 4] = 0.375 * (140.0 * xi**3 - 60.0 * xi)
    return out


def basis_2d(xi, eta, M: int) -> np.ndarray:
    """Values of all ``M(M+1)/2`` 2D basis functions, shape ``(..., L)``."""
    M = _check_order(M)
    xi, eta = np.broadcast_arrays(np.asarray(xi, float), np.asarray(eta, float))
    px = legendre_1d(xi, M)
    pe = legendre_1d(eta, M)
    idx = BASIS_2D_INDEX[: n_basis_2d(M)]
    a = [i for i, _ in idx]
    b = [j for _, j in idx]
    return px[..., a] * pe[..., b]


def basis_eval_2d(ell: int, xi: float, eta: float) -> float:
    """Value of the 2D basis function with 1-based index ``ell`` at ``(xi, eta)``."""
    if not 1 <= ell <= len(BASIS_2D_INDEX):
        raise ConfigurationError(f"basis index must be in [1, 15], got {ell}")
    a, b = BASIS_2D_INDEX[ell - 1]
    return float(legendre_1d(xi, MAX_ORDER)[a] * legendre_1d(eta, MAX_ORDER)[b])


@functools.lru_cache(maxsize=None)
def line_restriction(M: int) -> np.ndarray:
    """Map 2D cell coefficients to 1D coefficients along each Gauss line.

    Returns ``T`` with shape ``(M, M, L)``: along the line ``eta = eta_k`` the
    cell polynomial is ``sum_a c_a P_a(xi)`` with ``c_a = sum_l T[k, a, l] F_l``.
    """
    eta = gauss_legendre(M).points
    pe = legendre_1d(eta, M)
    L = n_basis_2d(M)
    T = np.zeros((M, M, L))
    for ell, (a, b) in enumerate(BASIS_2D_INDEX[:L]):
        T[:, a, ell] = pe[:, b]
    T.setflags(write=False)
    return T


@functools.lru_cache(maxsize=None)
def line_reassembly(M: int) -> np.ndarray:
    """Gauss-weighted inverse of :func:`line_restriction`, shape ``(M, M, L)``.

    ``F_l = sum_{k,a} R[k, a, l] d_{k,a}`` integrates the line solutions in
    the transverse direction with the averaged (weights / 2) Gauss rule.
    """
    w = gauss_legendre(M).weights
    R = line_restriction(M) * (0.5 * w)[:, None, None]
    R.setflags(write=False)
    return R


@functools.lru_cache(maxsize=None)
def transpose_permutation(M: int) -> np.ndarray:
    """Index map swapping the roles of xi and eta in 2D coefficient vectors."""
    idx = BASIS_2D_INDEX[: n_basis_2d(M)]
    lookup = {ab: n for n, ab in enumerate(idx)}
    perm = np.array([lookup[(b, a)] for a, b in idx])
    perm.setflags(write=False)
    return perm


# ---------------------------------------------------------------------------
# Meshes and fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mesh2D:
    """Uniform Cartesian phase-space mesh."""

    mx: int
    mv: int
    x_lower: float
    x_upper: float
    v_lower: float
    v_upper: float

    def __post_init__(self):
        if self.mx < 1 or self.mv < 1:
            raise ConfigurationError(f"element counts must be positive, got ({self.mx}, {self.mv})")
        if not (self.x_upper > self.x_lower and self.v_upper > self.v_lower):
            raise ConfigurationError("mesh bounds must satisfy lower < upper")

    @classmethod
    def symmetric(cls, mx: int, mv: int, L: float, vmax: float) -> "Mesh2D":
        return cls(mx, mv, -L, L, -vmax, vmax)

    @property
    def dx(self) -> float:
        return (self.x_upper - self.x_lower) / self.mx

    @property
    def dv(self) -> float:
        return (self.v_upper - self.v_lower) / self.mv

    @property
    def x_centers(self) -> np.ndarray:
        return self.x_lower + (np.arange(self.mx) + 0.5) * self.dx

    @property
    def v_centers(self) -> np.ndarray:
        return self.v_lower + (np.arange(self.mv) + 0.5) * self.dv

    @property
    def cell_area(self) -> float:
        return self.dx * self.dv

    def transposed(self) -> "Mesh2D":
        return Mesh2D(self.mv, self.mx, self.v_lower, self.v_upper, self.x_lower, self.x_upper)


@dataclass
class DGField2D:
    """Piecewise polynomial of total degree ``order - 1`` on a :class:`Mesh2D`."""

    mesh: Mesh2D
    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_order(self.order)
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        expected = (self.mesh.mx, self.mesh.mv, n_basis_2d(self.order))
        if self.coeffs.shape != expected:
            raise ConfigurationError(f"coefficient shape {self.coeffs.shape} != {expected}")

    @classmethod
    def zeros(cls, mesh: Mesh2D, order: int) -> "DGField2D":
        return cls(mesh, order, np.zeros((mesh.mx, mesh.mv, n_basis_2d(order))))

    @property
    def means(self) -> np.ndarray:
        return self.coeffs[..., 0]

    def copy(self) -> "DGField2D":
        return DGField2D(self.mesh, self.order, self.coeffs.copy())

    def with_coeffs(self, coeffs: np.ndarray) -> "DGField2D":
        return DGField2D(self.mesh, self.order, coeffs)

    def transposed(self) -> "DGField2D":
        """Same function with the x and v roles exchanged."""
        perm = transpose_permutation(self.order)
        return DGField2D(self.mesh.transposed(), self.order,
                         np.ascontiguousarray(self.coeffs.transpose(1, 0, 2)[..., perm]))

    def values_at(self, xi, eta) -> np.ndarray:
        """Values at canonical points ``(xi[p], eta[p])`` of every cell, shape ``(mx, mv, P)``."""
        phi = basis_2d(np.atleast_1d(xi), np.atleast_1d(eta), self.order)
        return self.coeffs @ phi.T

    def compatible(self, other: "DGField2D") -> bool:
        return self.mesh == other.mesh and self.order == other.order


@dataclass
class DGField1D:
    """Piecewise polynomial of degree ``order - 1`` on a uniform 1D mesh."""

    coeffs: np.ndarray
    lower: float
    upper: float

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.ndim != 2:
            raise ConfigurationError("1D field coefficients must have shape (mx, M)")
        _check_order(self.coeffs.shape[1])

    @property
    def mx(self) -> int:
        return self.coeffs.shape[0]

    @property
    def order(self) -> int:
        return self.coeffs.shape[1]

    @property
    def dx(self) -> float:
        return (self.upper - self.lower) / self.mx

    @property
    def centers(self) -> np.ndarray:
        return self.lower + (np.arange(self.mx) + 0.5) * self.dx

    @property
    def means(self) -> np.ndarray:
        return self.coeffs[:, 0]

    def values_at(self, xi) -> np.ndarray:
        """Values at canonical points ``xi[p]`` of every cell, shape ``(mx, P)``."""
        return self.coeffs @ legendre_1d(np.atleast_1d(xi), self.order).T

    def like(self, coeffs: np.ndarray) -> "DGField1D":
        return DGField1D(coeffs, self.lower, self.upper)

    def same_mesh(self, other: "DGField1D") -> bool:
        return (self.coeffs.shape == other.coeffs.shape
                and self.lower == other.lower and self.upper == other.upper)


# ---------------------------------------------------------------------------
# Projection, evaluation, error norms
# ---------------------------------------------------------------------------

def project_cell(g: Callable[[np.ndarray, np.ndarray], np.ndarray], M: int,
                 n_points: int | None = None) -> np.ndarray:
    """L2 projection of ``g(xi, eta)`` onto the canonical-cell basis."""
    M = _check_order(M)
    xi, eta, w = tensor_points(n_points or M)
    vals = np.broadcast_to(np.asarray(g(xi, eta), dtype=float), xi.shape)
    return 0.25 * (w * vals) @ basis_2d(xi, eta, M)


def project(func: Callable[[np.ndarray, np.ndarray], np.ndarray], mesh: Mesh2D, M: int,
            n_points: int | None = None) -> DGField2D:
    """L2 projection of ``func(x, v)`` onto the DG space, tensor Gauss rule per cell."""
    M = _check_order(M)
    n = n_points or M
    rule = gauss_legendre(n)
    s, w = rule.points, rule.weights
    x = mesh.x_centers[:, None] + 0.5 * mesh.dx * s[None, :]
    v = mesh.v_centers[:, None] + 0.5 * mesh.dv * s[None, :]
    vals = np.asarray(func(x[:, None, :, None], v[None, :, None, :]), dtype=float)
    vals = np.broadcast_to(vals, (mesh.mx, mesh.mv, n, n))
    xi, eta = np.meshgrid(s, s, indexing="ij")
    kernel = 0.25 * np.outer(w, w)[..., None] * basis_2d(xi, eta, M)
    coeffs = np.einsum("ijpq,pql->ijl", vals, kernel, optimize=True)
    return DGField2D(mesh, M, coeffs)


def project_1d(func: Callable[[np.ndarray], np.ndarray], lower: float, upper: float,
               mx: int, M: int, n_points: int | None = None) -> DGField1D:
    """L2 projection of ``func(x)`` onto piecewise polynomials of degree ``M - 1``."""
    M = _check_order(M)
    rule = gauss_legendre(n_points or M)
    dx = (upper - lower) / mx
    centers = lower + (np.arange(mx) + 0.5) * dx
    x = centers[:, None] + 0.5 * dx * rule.points[None, :]
    vals = np.broadcast_to(np.asarray(func(x), dtype=float), x.shape)
    coeffs = 0.5 * (vals * rule.weights) @ legendre_1d(rule.points, M)
    return DGField1D(coeffs, lower, upper)


def eval_field(field: DGField2D, x: float, v: float) -> float:
    """Point value of ``field`` at physical coordinates ``(x, v)``."""
    mesh = field.mesh
    if not (mesh.x_lower <= x <= mesh.x_upper and mesh.v_lower <= v <= mesh.v_upper):
        raise DomainError(f"point ({x}, {v}) lies outside the mesh")
    i = min(int((x - mesh.x_lower) // mesh.dx), mesh.mx - 1)
    j = min(int((v - mesh.v_lower) // mesh.dv), mesh.mv - 1)
    xi = (x - mesh.x_centers[i]) / (0.5 * mesh.dx)
    eta = (v - mesh.v_centers[j]) / (0.5 * mesh.dv)
    return float(field.coeffs[i, j] @ basis_2d(xi, eta, field.order))


FieldLike = Union[DGField2D, DGField1D, np.ndarray]


def _coeff_array(f: FieldLike) -> np.ndarray:
    return f.coeffs if isinstance(f, (DGField2D, DGField1D)) else np.asarray(f, dtype=float)


def relative_l2_error(numeric: FieldLike, exact: FieldLike) -> float:
    """Relative L2 difference measured in Legendre-coefficient space.

    Works for 1D and 2D fields alike: the ratio of root-sum-square coefficient
    differences to the root-sum-square of the reference coefficients.
    """
    a, b = _coeff_array(numeric), _coeff_array(exact)
    if a.shape != b.shape:
        raise ConfigurationError(f"mesh/order mismatch: {a.shape} vs {b.shape}")
    denom = float(np.sum(b * b))
    if denom == 0.0:
        raise UndefinedNormError("reference field is identically zero")
    return math.sqrt(float(np.sum((a - b) ** 2)) / denom)
