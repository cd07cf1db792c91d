"""Quasi-1D semi-Lagrangian sweeps on a 2D modal DG field.

Each cell polynomial is restricted to ``M`` Gauss lines transverse to the
sweep direction.  Along every line the speed is constant, so the 1D shift +
project kernel applies exactly; the line solutions are then integrated back
to 2D coefficients with the (averaged) Gauss rule in the transverse
direction.  A v-sweep is an x-sweep of the transposed field.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .advect1d import BOUNDARIES, Boundary, donor_indices, overlap_1d, split_displacement
from .core import (DGField2D, Mesh2D, gauss_legendre, legendre_1d, line_reassembly,
                   line_restriction)
from .errors import ConfigurationError

Direction = Literal["x", "v"]

# exact time integral of a source along the characteristic that ends at
# (x, v) at time t_b and starts at time t_a: int_{t_a}^{t_b} psi(s, x + v (s - t_b), v) ds
LineSource = Callable[[np.ndarray, np.ndarray, float, float], np.ndarray]


@dataclass(frozen=True)
class SweepPlan:
    """Per-line shifts for one sweep.

    ``j`` and ``nu`` have shape ``(n_transverse, M)``: entry ``[c, k]`` is the
    decomposed displacement (in cells of the sweep direction) for line ``k``
    of transverse cell ``c``.  ``ordinates`` holds the transverse coordinate
    of each line.  ``t_a``/``t_b`` give the time window of the sweep, used
    only by source terms.
    """

    direction: Direction
    j: np.ndarray
    nu: np.ndarray
    ordinates: np.ndarray
    mesh: Mesh2D
    boundary: Boundary = "periodic"
    t_a: float = 0.0
    t_b: float = 0.0

    def __post_init__(self):
        if self.direction not in ("x", "v"):
            raise ConfigurationError(f"unknown sweep direction {self.direction!r}")
        if self.boundary not in BOUNDARIES:
            raise ConfigurationError(f"unknown boundary {self.boundary!r}")
        if self.j.shape != self.nu.shape or self.j.shape != self.ordinates.shape:
            raise ConfigurationError("plan arrays must share one shape")

    @property
    def order(self) -> int:
        return self.j.shape[1]

    @property
    def displacement(self) -> np.ndarray:
        """Displacement in cells, ``j + nu``."""
        return self.j + self.nu


def line_ordinates(centers: np.ndarray, width: float, M: int) -> np.ndarray:
    """Gauss-line coordinates ``c_j + eta_k * width / 2``, shape ``(n, M)``."""
    eta = gauss_legendre(M).points
    return centers[:, None] + 0.5 * width * eta[None, :]


def plan_from_displacement(direction: Direction, disp_cells: np.ndarray, ordinates: np.ndarray,
                           mesh: Mesh2D, boundary: Boundary = "periodic",
                           t_a: float = 0.0, t_b: float = 0.0) -> SweepPlan:
    """Build a plan from raw displacements measured in cells."""
    j, nu = split_displacement(disp_cells)
    return SweepPlan(direction, j, nu, np.asarray(ordinates, dtype=float), mesh, boundary, t_a, t_b)


def build_x_sweep(field: DGField2D, dt: float, speed: Optional[Callable] = None,
                  t_start: float = 0.0) -> SweepPlan:
    """Plan an x-sweep of duration ``dt`` with line speed ``speed(v)``.

    The default speed is ``a(v) = v`` (free streaming).  ``t_start`` anchors
    the time window passed to source terms.
    """
    mesh = field.mesh
    v_lines = line_ordinates(mesh.v_centers, mesh.dv, field.order)
    a = v_lines if speed is None else np.asarray(speed(v_lines), dtype=float)
    return plan_from_displacement("x", a * dt / mesh.dx, v_lines, mesh, "periodic",
                                  t_start, t_start + dt)


def build_v_sweep(field: DGField2D, taylor, t_a: float, t_b: float,
                  boundary: Boundary = "periodic") -> SweepPlan:
    """Plan a v-sweep driven by an electric-field Taylor polynomial.

    ``taylor.displacement(x, t_a, t_b)`` must return the time integral of the
    field over ``[t_a, t_b]`` at the positions ``x``; offsets are relative to
    the polynomial's anchor time.
    """
    mesh = field.mesh
    x_lines = line_ordinates(mesh.x_centers, mesh.dx, field.order)
    disp = np.asarray(taylor.displacement(x_lines, t_a, t_b), dtype=float)
    return plan_from_displacement("v", disp / mesh.dv, x_lines, mesh, boundary, t_a, t_b)


def build_speed_v_sweep(field: DGField2D, dt: float, speed: Callable,
                        boundary: Boundary = "periodic") -> SweepPlan:
    """Plan a v-sweep with a time-independent speed ``speed(x)``."""
    mesh = field.mesh
    x_lines = line_ordinates(mesh.x_centers, mesh.dx, field.order)
    a = np.asarray(speed(x_lines), dtype=float)
    return plan_from_displacement("v", a * dt / mesh.dv, x_lines, mesh, boundary, 0.0, dt)


def _source_lines(source: LineSource, mesh: Mesh2D, plan: SweepPlan, n_points: int) -> np.ndarray:
    """Legendre coefficients of the source integral along every line of an x-sweep."""
    M = plan.order
    rule = gauss_legendre(n_points)
    x = mesh.x_centers[:, None] + 0.5 * mesh.dx * rule.points[None, :]     # (mx, q)
    vals = source(x[:, None, None, :], plan.ordinates[None, :, :, None], plan.t_a, plan.t_b)
    vals = np.broadcast_to(vals, (mesh.mx,) + plan.ordinates.shape + (n_points,))
    proj = legendre_1d(rule.points, M) * (0.5 * rule.weights)[:, None]    # (q, M)
    return vals @ proj


def restrict_to_lines(coeffs: np.ndarray, M: int) -> np.ndarray:
    """Line coefficients ``c[c, k, i, a]`` of a sweep-frame array ``(n, n_transverse, L)``."""
    n, ntr, L = coeffs.shape
    T = line_restriction(M).reshape(M * M, L)
    c = (coeffs.reshape(n * ntr, L) @ T.T).reshape(n, ntr, M, M)
    return np.ascontiguousarray(c.transpose(1, 2, 0, 3))


def sweep_lines(coeffs: np.ndarray, j: np.ndarray, nu: np.ndarray, boundary: Boundary,
                extra: Optional[np.ndarray] = None) -> np.ndarray:
    """Apply the line sweep along axis 0 of a ``(n, n_transverse, L)`` coefficient array.

    ``extra`` holds line coefficients ``(n, n_transverse, M, M)`` added after
    the shift (source contributions).
    """
    n, ntr, L = coeffs.shape
    M = j.shape[1]
    c = restrict_to_lines(coeffs, M)                                  # (ntr, M, n, M)
    # flat row index into the zero-padded (ntr * M * (n + 1), M) line array
    src = np.concatenate([c, np.zeros((ntr, M, 1, M))], axis=2).reshape(-1, M)
    base = (np.arange(ntr * M) * (n + 1)).reshape(ntr, M, 1)
    il, ir = donor_indices(n, j, boundary)                            # (n, ntr, M)
    gl = src[base + np.moveaxis(il, 0, -1)]
    gr = src[base + np.moveaxis(ir, 0, -1)]
    left, right = overlap_1d(nu, M)                                   # (ntr, M, M, M)
    new = gl @ left.swapaxes(-1, -2) + gr @ right.swapaxes(-1, -2)
    new = new.transpose(2, 0, 1, 3)                                   # (n, ntr, M, M)
    if extra is not None:
        new = new + extra
    R = line_reassembly(M).reshape(M * M, L)
    return (new.reshape(n * ntr, M * M) @ R).reshape(n, ntr, L)


def sweep(field: DGField2D, plan: SweepPlan, source: Optional[LineSource] = None,
          source_points: Optional[int] = None) -> DGField2D:
    """Advance ``field`` by one sweep.

    ``source`` (x-sweeps only) adds the exact characteristic integral of a
    forcing term, projected on each line with ``source_points`` Gauss points.
    """
    if plan.mesh != field.mesh or plan.order != field.order:
        raise ConfigurationError("sweep plan was built for a different mesh or order")
    if plan.direction == "x":
        extra = None
        if source is not None:
            npts = source_points or max(field.order + 4, 8)
            extra = _source_lines(source, field.mesh, plan, npts)
        out = sweep_lines(field.coeffs, plan.j, plan.nu, plan.boundary, extra)
        return field.with_coeffs(out)
    if source is not None:
        raise ConfigurationError("source terms are only supported on x-sweeps")
    ft = field.transposed()
    out = sweep_lines(ft.coeffs, plan.j, plan.nu, plan.boundary)
    return ft.with_coeffs(out).transposed()


__all__ = [
    "LineSource", "SweepPlan", "build_speed_v_sweep", "build_v_sweep", "build_x_sweep",
    "line_ordinates", "plan_from_displacement", "restrict_to_lines", "sweep", "sweep_lines",
]
