"""Velocity moments, Legendre-coefficient derivatives and the E-field Taylor polynomial."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BASIS_2D_INDEX, DGField1D, DGField2D, gauss_legendre, legendre_1d, n_basis_2d
from .errors import ConfigurationError

FD_ORDER = 5

_R5 = math.sqrt(5.0)
_R21 = math.sqrt(21.0)

# rows act on (F1..F5) differences; only valid for M = 5
_DX_STENCIL = np.array([
    [1.0, 0.0, -2.0 * _R5, 0.0, 78.0],
    [0.0, 1.0, 0.0, -10.0 / 3.0 * _R21, 0.0],
    [0.0, 0.0, 1.0, 0.0, -14.0 * _R5],
    [0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0],
])
_DXX_STENCIL = np.array([
    [1.0, 0.0, -_R5, 0.0, 11.0],
    [0.0, 1.0, 0.0, -5.0 / 3.0 * _R21, 0.0],
    [0.0, 0.0, 1.0, 0.0, -7.0 * _R5],
    [0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0],
])


@dataclass(frozen=True)
class MomentSet:
    """Density, momentum, second and third velocity moments as 1D fields."""

    rho: DGField1D
    rho_u: DGField1D
    second: DGField1D
    third: DGField1D


def moment_weights(field: DGField2D, powers=(0, 1, 2, 3)) -> np.ndarray:
    """``W[p, j, b] = (dv/2) sum_q w_q P_b(eta_q) v_{jq}^p`` for each power ``p``.

    The per-cell rule has ``ceil((M + 3) / 2)`` points, exact for the cubic weight.
    """
    M = field.order
    mesh = field.mesh
    rule = gauss_legendre(math.ceil((M + 3) / 2))
    v = mesh.v_centers[:, None] + 0.5 * mesh.dv * rule.points[None, :]
    pb = legendre_1d(rule.points, M)
    vp = np.stack([v**p for p in powers])
    return 0.5 * mesh.dv * np.einsum("q,qb,pjq->pjb", rule.weights, pb, vp)


def _selection(M: int) -> tuple[np.ndarray, np.ndarray]:
    idx = BASIS_2D_INDEX[: n_basis_2d(M)]
    a = np.array([ab[0] for ab in idx])
    b = np.array([ab[1] for ab in idx])
    return a, b


def compute_moments(field: DGField2D) -> MomentSet:
    """Exact v-integrals of ``f``, ``v f``, ``v^2 f`` and ``v^3 f`` over the mesh."""
    M = field.order
    W = moment_weights(field)                         # (4, mv, M)
    a, b = _selection(M)
    sel = np.zeros((4, field.mesh.mv, n_basis_2d(M), M))
    sel[:, :, np.arange(len(a)), a] = W[:, :, b]
    out = np.einsum("ijl,pjla->pia", field.coeffs, sel)
    lo, hi = field.mesh.x_lower, field.mesh.x_upper
    return MomentSet(*(DGField1D(out[p], lo, hi) for p in range(4)))


def _check_fd(g: DGField1D) -> np.ndarray:
    if g.order != FD_ORDER:
        raise ConfigurationError(f"coefficient finite differences require M = {FD_ORDER}, got {g.order}")
    return np.asarray(g.coeffs)


def legendre_dx(g: DGField1D) -> DGField1D:
    """Fifth-order approximation of ``g'`` from periodic central differences of the coefficients."""
    c = _check_fd(g)
    d1 = np.roll(c, -1, axis=0) - np.roll(c, 1, axis=0)
    return g.like(d1 @ _DX_STENCIL.T / (2.0 * g.dx))


def legendre_dxx(g: DGField1D) -> DGField1D:
    """Fifth-order approximation of ``g''`` from periodic second differences of the coefficients."""
    c = _check_fd(g)
    d2 = np.roll(c, -1, axis=0) - 2.0 * c + np.roll(c, 1, axis=0)
    return g.like(d2 @ _DXX_STENCIL.T / g.dx**2)


def multiply(*fields: DGField1D) -> DGField1D:
    """Pointwise product at the ``M`` Gauss points of each cell, re-projected."""
    first = fields[0]
    M = first.order
    rule = gauss_legendre(M)
    phi = legendre_1d(rule.points, M)                 # (q, M)
    prod = np.ones((first.mx, M))
    for f in fields:
        if not first.same_mesh(f):
            raise ConfigurationError("product factors live on different meshes")
        prod = prod * (f.coeffs @ phi.T)
    return first.like(prod @ (phi * (0.5 * rule.weights)[:, None]))


def eval_1d(g: DGField1D, x) -> np.ndarray:
    """Evaluate a 1D field at physical positions inside its interval."""
    x = np.asarray(x, dtype=float)
    s = (x - g.lower) / g.dx
    cell = np.clip(np.floor(s).astype(np.int64), 0, g.mx - 1)
    xi = 2.0 * (s - cell) - 1.0
    return np.einsum("...m,...m->...", g.coeffs[cell], legendre_1d(xi, g.order))


@dataclass(frozen=True)
class EFieldTaylor:
    """Cubic-in-time field ``E + t E_t + t^2/2 E_tt + t^3/6 E_ttt`` anchored at ``anchor``."""

    E: DGField1D
    E_t: DGField1D
    E_tt: DGField1D
    E_ttt: DGField1D
    anchor: float = 0.0

    def terms(self):
        return (self.E, self.E_t, self.E_tt, self.E_ttt)

    def evaluate(self, x, t: float) -> np.ndarray:
        """Field value at offset ``t`` from the anchor."""
        return sum(eval_1d(g, x) * t**n / math.factorial(n) for n, g in enumerate(self.terms()))

    def displacement(self, x, t_a: float, t_b: float) -> np.ndarray:
        """Exact integral of the polynomial over offsets ``[t_a, t_b]``."""
        return sum(eval_1d(g, x) * (t_b ** (n + 1) - t_a ** (n + 1)) / math.factorial(n + 1)
                   for n, g in enumerate(self.terms()))

    @classmethod
    def frozen(cls, E: DGField1D, anchor: float = 0.0) -> "EFieldTaylor":
        """A time-independent field."""
        zero = E.like(np.zeros_like(E.coeffs))
        return cls(E, zero, zero, zero, anchor)


def build_taylor(E: DGField1D, moments: MomentSet,
                 corrections: Optional[tuple[DGField1D, DGField1D, DGField1D]] = None,
                 anchor: float = 0.0) -> EFieldTaylor:
    """Time derivatives of the field from the moment equations."""
    for g in (moments.rho, moments.rho_u, moments.second, moments.third):
        if not E.same_mesh(g):
            raise ConfigurationError("moments and field live on different meshes")
    rho, rho_u = moments.rho, moments.rho_u
    e_t = -rho_u.coeffs
    e_tt = legendre_dx(moments.second).coeffs - multiply(rho, E).coeffs
    e_ttt = (legendre_dx(multiply(rho_u, E)).coeffs * 2.0
             - legendre_dxx(moments.third).coeffs
             + multiply(E, legendre_dx(rho_u)).coeffs
             + multiply(rho, rho_u).coeffs)
    if corrections is not None:
        c1, c2, c3 = corrections
        e_t = e_t + c1.coeffs
        e_tt = e_tt + c2.coeffs
        e_ttt = e_ttt + c3.coeffs
    return EFieldTaylor(E, E.like(e_t), E.like(e_tt), E.like(e_ttt), anchor)


__all__ = [
    "EFieldTaylor", "FD_ORDER", "MomentSet", "build_taylor", "compute_moments", "eval_1d",
    "legendre_dx", "legendre_dxx", "moment_weights", "multiply",
]
