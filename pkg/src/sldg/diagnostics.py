"""Quadrature functionals of the distribution and the conserved-quantity record."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Callable, Optional

import numpy as np

from .core import DGField1D, DGField2D, tensor_points
from .errors import DiagnosticsError


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Conserved quantities at one time level."""

    t: float
    mass: float
    l1: float
    l2: float
    energy: float
    entropy: float
    min_value: float
    entropy_skipped: int = 0

    def as_row(self) -> dict:
        return asdict(self)

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _point_values(field: DGField2D) -> tuple[np.ndarray, np.ndarray]:
    xi, eta, w = tensor_points(field.order)
    return field.values_at(xi, eta), w


def _reduce(field: DGField2D, g_vals: np.ndarray, w: np.ndarray, what: str) -> float:
    if not np.all(np.isfinite(g_vals)):
        bad = np.argwhere(~np.isfinite(g_vals))[0]
        raise DiagnosticsError(f"non-finite {what} integrand in cell ({bad[0]}, {bad[1]})")
    return 0.25 * field.mesh.cell_area * float(np.sum(g_vals @ w))


def functional(field: DGField2D, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """Tensor Gauss approximation of the phase-space integral of ``g(f)``."""
    vals, w = _point_values(field)
    with np.errstate(all="ignore"):
        gv = np.asarray(g(vals), dtype=float)
    return _reduce(field, gv, w, "functional")


def phase_functional(field: DGField2D, g: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]) -> float:
    """Like :func:`functional` with ``g(f, x, v)`` depending on the position too."""
    xi, eta, w = tensor_points(field.order)
    mesh = field.mesh
    x = mesh.x_centers[:, None, None] + 0.5 * mesh.dx * xi[None, None, :]
    v = mesh.v_centers[None, :, None] + 0.5 * mesh.dv * eta[None, None, :]
    vals = field.values_at(xi, eta)
    with np.errstate(all="ignore"):
        gv = np.asarray(g(vals, x, v), dtype=float)
    return _reduce(field, gv, w, "functional")


def l2_norm(field: DGField2D) -> float:
    """Exact L2 norm from the orthonormal coefficients."""
    return float(np.sqrt(field.mesh.cell_area * np.sum(field.coeffs**2)))


def mass(field: DGField2D) -> float:
    return field.mesh.cell_area * float(np.sum(field.coeffs[..., 0]))


def field_energy(E: DGField1D) -> float:
    """``(1/2) int E^2 dx`` from the orthonormal coefficients."""
    return 0.5 * E.dx * float(np.sum(np.asarray(E.coeffs) ** 2))


def entropy(field: DGField2D) -> tuple[float, int]:
    """``-I(f log f)`` with non-positive point values skipped; returns the skip count."""
    vals, w = _point_values(field)
    pos = vals > 0.0
    safe = np.where(pos, vals, 1.0)
    return -_reduce(field, np.where(pos, vals * np.log(safe), 0.0), w, "entropy"), int((~pos).sum())


def conserved_set(f: DGField2D, E: Optional[DGField1D], t: float = 0.0) -> DiagnosticsRecord:
    """Mass, L1, L2, total energy, entropy and minimum point value."""
    vals, w = _point_values(f)
    mesh = f.mesh
    _, eta, _ = tensor_points(f.order)
    v = mesh.v_centers[None, :, None] + 0.5 * mesh.dv * eta[None, None, :]
    kinetic = 0.5 * _reduce(f, v**2 * vals, w, "energy")
    ent, skipped = entropy(f)
    return DiagnosticsRecord(
        t=float(t),
        mass=mass(f),
        l1=_reduce(f, np.abs(vals), w, "L1"),
        l2=l2_norm(f),
        energy=kinetic + (field_energy(E) if E is not None else 0.0),
        entropy=ent,
        min_value=float(vals.min()),
        entropy_skipped=skipped,
    )


def deviations(records: list[DiagnosticsRecord], name: str) -> np.ndarray:
    """``value(t) - value(0)`` for one column of a record series."""
    vals = np.array([getattr(r, name) for r in records], dtype=float)
    return vals - vals[0]


def e_field_norm(E: DGField1D) -> float:
    """``sqrt(int E^2 dx)``."""
    return float(np.sqrt(E.dx * np.sum(np.asarray(E.coeffs) ** 2)))


def local_maxima(values) -> np.ndarray:
    """Indices of interior samples strictly above the previous and not below the next."""
    y = np.asarray(values, dtype=float)
    if y.size < 3:
        return np.zeros(0, dtype=int)
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    return np.nonzero(inner)[0] + 1


def peak_rate(t, norms, t_min: float = -np.inf, t_max: float = np.inf,
              max_peaks: Optional[int] = None) -> float:
    """Least-squares slope of ``log(norm)`` through the local maxima in a window."""
    t = np.asarray(t, dtype=float)
    y = np.log(np.asarray(norms, dtype=float))
    idx = [i for i in local_maxima(y) if t_min <= t[i] <= t_max]
    if max_peaks is not None:
        idx = idx[:max_peaks]
    if len(idx) < 2:
        raise DiagnosticsError(f"need two maxima in [{t_min}, {t_max}], found {len(idx)}")
    return float(np.polyfit(t[idx], y[idx], 1)[0])


__all__ = [
    "DiagnosticsRecord", "conserved_set", "deviations", "e_field_norm", "entropy",
    "field_energy", "functional", "l2_norm", "local_maxima", "mass", "peak_rate",
    "phase_functional",
]
