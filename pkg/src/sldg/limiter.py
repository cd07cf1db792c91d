"""Positivity-preserving rescaling limiter.

A cell polynomial with mean ``F1`` and minimum ``m`` over a set of test
points is replaced by ``F1 + theta (f - F1)`` with
``theta = min(1, F1 / (F1 - m))``.  Two test families are used: the stage
points of an upcoming sweep (which make the swept cell means non-negative)
and the tensor Gauss points used after a full step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DGField2D, basis_2d, gauss_legendre, legendre_1d, tensor_points
from .sweep import restrict_to_lines
from .errors import LimiterError

MEAN_TOL = 1e-12


@dataclass
class LimiterReport:
    """Summary of one or more limiter passes."""

    cells_limited: int = 0
    min_theta: float = 1.0
    pre_min: float = math.inf
    clamped_means: int = 0

    def merge(self, other: "LimiterReport") -> "LimiterReport":
        return LimiterReport(self.cells_limited + other.cells_limited,
                             min(self.min_theta, other.min_theta),
                             min(self.pre_min, other.pre_min),
                             self.clamped_means + other.clamped_means)


def n_stage_abscissae(M: int) -> int:
    """``K = ceil(M / 2)`` Gauss points per sub-interval."""
    return (M + 1) // 2


def stage_points(nu, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Target-cell abscissae ``(xi_L, xi_R)`` of the positivity test points.

    ``xi_L = nu (1 - s) + s`` lies in ``[2 nu - 1, 1]`` and
    ``xi_R = nu (1 + s) - 1`` in ``[-1, 2 nu - 1]``, with ``s`` the K-point
    Gauss abscissae.  Output shape is ``nu.shape + (K,)`` for each family;
    combined with the ``M`` Gauss lines this gives ``2 M K`` points per cell.
    """
    s = gauss_legendre(n_stage_abscissae(M)).points
    nu = np.asarray(nu, dtype=float)[..., None]
    return nu * (1.0 - s) + s, nu * (1.0 + s) - 1.0


def donor_stage_points(nu, M: int) -> np.ndarray:
    """Stage points mapped back to the donor cell, shape ``nu.shape + (2K,)``.

    The target-cell point ``xi_L`` samples donor ``i - j`` at ``xi_L - 2 nu``
    and ``xi_R`` samples donor ``i - 1 - j`` at ``xi_R + 2 - 2 nu``.  Every
    cell acts as both donors along its line, so both families are tested.
    """
    xl, xr = stage_points(nu, M)
    n2 = 2.0 * np.asarray(nu, dtype=float)[..., None]
    return np.concatenate([xl - n2, xr + 2.0 - n2], axis=-1)


def final_points(M: int) -> tuple[np.ndarray, np.ndarray]:
    """The ``M^2`` tensor Gauss points ``(xi, eta)``."""
    xi, eta, _ = tensor_points(M)
    return xi, eta


def _rescale(coeffs: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray, LimiterReport]:
    """Rescale cells (last axis = modes) given the minimum ``m`` of each cell."""
    mean = coeffs[..., 0]
    if np.any(mean < -MEAN_TOL):
        bad = np.unravel_index(np.argmin(mean), mean.shape)
        raise LimiterError(f"negative cell mean {mean[bad]:.3e} at cell {tuple(int(b) for b in bad)}")
    clamp = mean < 0.0
    out = coeffs.copy()
    if np.any(clamp):
        out[clamp] = 0.0
    mean = out[..., 0]
    need = (m < 0.0) & ~clamp
    theta = np.ones_like(mean)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(need, np.minimum(1.0, mean / (mean - m)), theta)
    theta = np.where(need & (mean == 0.0), 0.0, theta)
    limited = need & (theta < 1.0)
    out[..., 1:] *= theta[..., None]
    report = LimiterReport(int(limited.sum()), float(theta.min()) if theta.size else 1.0,
                           float(m.min()) if m.size else math.inf, int(clamp.sum()))
    return out, theta, report


def limit_cell(coeffs: np.ndarray, xi, eta) -> tuple[np.ndarray, float]:
    """Limit one cell against test points ``(xi, eta)``; returns ``(coeffs, theta)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    L = coeffs.shape[-1]
    M = next(m for m in range(1, 6) if m * (m + 1) // 2 == L)
    vals = basis_2d(np.atleast_1d(xi), np.atleast_1d(eta), M) @ coeffs
    out, theta, _ = _rescale(coeffs[None], np.array([vals.min()]))
    return out[0], float(theta[0])


def limit_final(field: DGField2D) -> tuple[DGField2D, LimiterReport]:
    """Limit every cell against the tensor Gauss points."""
    xi, eta = final_points(field.order)
    m = field.values_at(xi, eta).min(axis=-1)
    out, _, report = _rescale(field.coeffs, m)
    return field.with_coeffs(out), report


def limit_lines(coeffs: np.ndarray, nu: np.ndarray) -> tuple[np.ndarray, LimiterReport]:
    """Limit a sweep-frame array ``(n, n_transverse, L)`` against the stage points.

    ``nu`` has shape ``(n_transverse, M)``: line ``k`` of transverse cell ``c``
    is tested at its own donor stage points.
    """
    M = nu.shape[1]
    c = restrict_to_lines(coeffs, M)                           # (ntr, M, n, M)
    pts = donor_stage_points(nu, M)                            # (ntr, M, 2K)
    P = legendre_1d(pts, M)                                    # (ntr, M, 2K, M)
    vals = c @ P.swapaxes(-1, -2)                              # (ntr, M, n, 2K)
    m = vals.min(axis=(1, 3)).T
    out, _, report = _rescale(coeffs, m)
    return out, report


def min_at_final_points(field: DGField2D) -> float:
    """Smallest value of the field over all tensor Gauss points."""
    xi, eta = final_points(field.order)
    return float(field.values_at(xi, eta).min())


__all__ = [
    "LimiterReport", "MEAN_TOL", "donor_stage_points", "final_points", "limit_cell",
    "limit_final", "limit_lines", "min_at_final_points", "n_stage_abscissae", "stage_points",
]
