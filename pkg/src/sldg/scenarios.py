"""Benchmark problems: initial data, transport speeds and exact solutions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError

MODES = ("vlasov_poisson", "pure_advection", "forced_vp")

SQRT_PI = math.sqrt(math.pi)


def free_streaming(v):
    return v


@dataclass(frozen=True)
class Scenario:
    """One test problem on the box ``[x_lower, x_upper] x [v_lower, v_upper]``.

    ``x_speed(v)`` drives the x-sweeps.  Pure advection problems also give a
    time-independent ``v_speed(x)``; Vlasov-Poisson problems obtain it from the
    field solve.  Forced problems bundle a source integral, Taylor corrections
    and the exact solution.
    """

    name: str
    mode: str
    x_lower: float
    x_upper: float
    v_lower: float
    v_upper: float
    initial: Callable[[np.ndarray, np.ndarray], np.ndarray]
    x_speed: Callable[[np.ndarray], np.ndarray] = free_streaming
    v_speed: Optional[Callable[[np.ndarray], np.ndarray]] = None
    exact: Optional[Callable[[float, np.ndarray, np.ndarray], np.ndarray]] = None
    exact_E: Optional[Callable[[float, np.ndarray], np.ndarray]] = None
    source: Optional[Callable] = None
    corrections: Optional[Callable[[float, np.ndarray], tuple]] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown scenario mode {self.mode!r}")
        if self.mode == "pure_advection" and self.v_speed is None:
            raise ConfigurationError("pure advection needs a v_speed")
        if self.mode == "forced_vp" and None in (self.source, self.corrections, self.exact):
            raise ConfigurationError("forced problems need source, corrections and exact solution")

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def max_x_speed(self, v_points: np.ndarray) -> float:
        """Largest |x_speed| over the given velocities."""
        return float(np.max(np.abs(self.x_speed(np.asarray(v_points, dtype=float)))))

    def max_v_speed(self, x_points: np.ndarray) -> float:
        """Largest |v_speed| over the given positions (pure advection only)."""
        if self.v_speed is None:
            raise ConfigurationError(f"scenario {self.name!r} has no prescribed v_speed")
        return float(np.max(np.abs(self.v_speed(np.asarray(x_points, dtype=float)))))


# --- solid body rotation -----------------------------------------------------

ROTATION_CENTER = (0.4, 0.5)


def _bump(x, y):
    r = np.hypot(x - ROTATION_CENTER[0], y - ROTATION_CENTER[1])
    return np.where(r <= 0.3, np.cos(5.0 * np.pi / 3.0 * r) ** 6, 0.0)


def _rotation_exact(t, x, y):
    # clockwise rotation with period 1 about (0.5, 0.5); trace back by angle 2 pi t
    c, s = math.cos(2.0 * math.pi * t), math.sin(2.0 * math.pi * t)
    dx, dy = x - 0.5, y - 0.5
    return _bump(0.5 + c * dx - s * dy, 0.5 + s * dx + c * dy)


def rotation() -> Scenario:
    return Scenario(
        name="rotation", mode="pure_advection",
        x_lower=0.0, x_upper=1.0, v_lower=0.0, v_upper=1.0,
        initial=_bump,
        x_speed=lambda y: np.pi * (2.0 * np.asarray(y) - 1.0),
        v_speed=lambda x: np.pi * (1.0 - 2.0 * np.asarray(x)),
        exact=_rotation_exact,
    )


# --- forced Vlasov-Poisson ---------------------------------------------------

def _forced_g(v):
    return np.exp(-0.25 * (4.0 * v - 1.0) ** 2)


def forced_exact(t, x, v):
    return (2.0 - np.cos(2.0 * x - 2.0 * np.pi * t)) * _forced_g(v)


def forced_exact_E(t, x):
    return -0.25 * SQRT_PI * np.sin(2.0 * x - 2.0 * np.pi * t)


def forced_psi(t, x, v):
    """The forcing term, pointwise."""
    th = 2.0 * x - 2.0 * np.pi * t
    a = (2.0 * SQRT_PI + 1.0) * (4.0 * v - 2.0 * SQRT_PI)
    b = SQRT_PI * (4.0 * v - 1.0)
    return 0.5 * np.sin(th) * _forced_g(v) * (a - b * np.cos(th))


def _sinc(z):
    return np.sinc(z / np.pi)


def forced_source_integral(x, v, t_a, t_b):
    """``int_{t_a}^{t_b} psi(s, x + v (s - t_b), v) ds`` in closed form.

    Along the characteristic the phase is linear in ``s`` with rate
    ``omega = 2 v - 2 pi``; integrating about the midpoint gives sinc factors
    that stay finite when ``omega`` vanishes.
    """
    h = t_b - t_a
    s_mid = 0.5 * (t_a + t_b)
    omega = 2.0 * v - 2.0 * np.pi
    theta = 2.0 * x - 2.0 * v * t_b + omega * s_mid
    a = (2.0 * SQRT_PI + 1.0) * (4.0 * v - 2.0 * SQRT_PI)
    b = SQRT_PI * (4.0 * v - 1.0)
    i1 = h * np.sin(theta) * _sinc(0.5 * omega * h)
    i2 = h * np.sin(2.0 * theta) * _sinc(omega * h)
    return 0.5 * _forced_g(v) * (a * i1 - 0.5 * b * i2)


def forced_corrections(t, x):
    """Extra source contributions to the first three time derivatives of E."""
    ph = 2.0 * x - 2.0 * np.pi * t
    pi = np.pi
    c1 = SQRT_PI / 4.0 + SQRT_PI / 8.0 * (4.0 * pi - 1.0) * np.cos(ph)
    c2 = ((3.0 * SQRT_PI + 4.0 * pi - 16.0 * math.sqrt(pi**5)) / 16.0 * np.sin(-ph)
          + pi / 16.0 * np.sin(2.0 * ph))
    c3 = (-pi / 4.0 + (7.0 * SQRT_PI + 16.0 * pi - 64.0 * math.sqrt(pi**7)) / 32.0 * np.cos(ph)
          - 3.0 * pi / 16.0 * np.cos(2.0 * ph))
    return c1, c2, c3


def forced() -> Scenario:
    return Scenario(
        name="forced", mode="forced_vp",
        x_lower=-np.pi, x_upper=np.pi, v_lower=-np.pi, v_upper=np.pi,
        initial=lambda x, v: forced_exact(0.0, x, v),
        exact=forced_exact, exact_E=forced_exact_E,
        source=forced_source_integral, corrections=forced_corrections,
    )


# --- plasma benchmarks -------------------------------------------------------

def two_stream(vmax: float = 2.0 * np.pi) -> Scenario:
    return Scenario(
        name="two_stream", mode="vlasov_poisson",
        x_lower=-2.0 * np.pi, x_upper=2.0 * np.pi, v_lower=-vmax, v_upper=vmax,
        initial=lambda x, v: v**2 / math.sqrt(8.0 * math.pi) * (2.0 - np.cos(0.5 * x)) * np.exp(-0.5 * v**2),
    )


def landau(alpha: float, k: float = 0.5, vmax: float = 2.0 * np.pi, name: str = "landau") -> Scenario:
    return Scenario(
        name=name, mode="vlasov_poisson",
        x_lower=-2.0 * np.pi, x_upper=2.0 * np.pi, v_lower=-vmax, v_upper=vmax,
        initial=lambda x, v: (1.0 + alpha * np.cos(k * x)) * np.exp(-0.5 * v**2) / math.sqrt(2.0 * math.pi),
    )


def builtin_scenarios(vmax: float = 2.0 * np.pi) -> dict[str, Scenario]:
    """The five benchmark problems keyed by name."""
    return {
        "rotation": rotation(),
        "forced": forced(),
        "two_stream": two_stream(vmax),
        "weak_landau": landau(0.01, vmax=vmax, name="weak_landau"),
        "strong_landau": landau(0.5, vmax=vmax, name="strong_landau"),
    }


def get_scenario(name: str, vmax: Optional[float] = None) -> Scenario:
    catalog = builtin_scenarios() if vmax is None else builtin_scenarios(vmax)
    if name not in catalog:
        raise ConfigurationError(f"unknown scenario {name!r}; choose from {sorted(catalog)}")
    scen = catalog[name]
    if vmax is not None and name in ("rotation", "forced"):
        raise ConfigurationError(f"scenario {name!r} has a fixed velocity domain")
    return scen


__all__ = [
    "MODES", "Scenario", "builtin_scenarios", "forced", "forced_corrections", "forced_exact",
    "forced_exact_E", "forced_psi", "forced_source_integral", "get_scenario", "landau",
    "rotation", "two_stream",
]
