"""Strang and fourth-order operator splitting drivers.

Operator A transports in x with speed ``a(v)``; operator B transports in v
with the electric field (Vlasov-Poisson) or a prescribed speed ``b(x)``
(pure advection).  Each operator keeps its own time clock, which is what
the forced problem's time-dependent source and the Taylor-expanded field
are evaluated against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .core import DGField1D, DGField2D, Mesh2D, project, project_1d
from .diagnostics import DiagnosticsRecord, conserved_set
from .errors import ConfigurationError
from .limiter import LimiterReport, limit_final, limit_lines
from .moments import EFieldTaylor, build_taylor, compute_moments
from .poisson import LdgOperator, assemble, solve_periodic
from .scenarios import Scenario
from .sweep import SweepPlan, build_speed_v_sweep, build_v_sweep, build_x_sweep, sweep

GAMMA1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
GAMMA2 = -(2.0 ** (1.0 / 3.0)) / (2.0 - 2.0 ** (1.0 / 3.0))

SCHEMES = ("strang", "fourth_order")


@dataclass(frozen=True)
class SplitScheme:
    """Stage fractions of a splitting; A stages bracket the B stages."""

    variant: str
    a_fractions: tuple[float, ...]
    b_fractions: tuple[float, ...]

    @classmethod
    def named(cls, variant: str) -> "SplitScheme":
        if variant == "strang":
            return cls("strang", (0.5, 0.5), (1.0,))
        if variant == "fourth_order":
            g1, g2 = GAMMA1, GAMMA2
            return cls("fourth_order", (g1 / 2, (g1 + g2) / 2, (g1 + g2) / 2, g1 / 2), (g1, g2, g1))
        raise ConfigurationError(f"unknown scheme {variant!r}; choose from {SCHEMES}")

    def b_intervals(self) -> list[tuple[float, float]]:
        """Fractional time windows of the B stages."""
        edges = np.concatenate([[0.0], np.cumsum(self.b_fractions)])
        return [(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]

    def a_intervals(self) -> list[tuple[float, float]]:
        edges = np.concatenate([[0.0], np.cumsum(self.a_fractions)])
        return [(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]


@dataclass
class Problem:
    """A scenario discretised on a mesh, with the operators it needs."""

    scenario: Scenario
    mesh: Mesh2D
    order: int
    limiter: bool = True
    vboundary: str = "periodic"
    ldg: Optional[LdgOperator] = None

    def __post_init__(self):
        if self.scenario.mode != "pure_advection" and self.ldg is None:
            self.ldg = assemble(self.order, self.mesh.mx, self.mesh.x_lower, self.mesh.x_upper)

    @property
    def is_field_problem(self) -> bool:
        return self.scenario.mode != "pure_advection"

    def initial_field(self, n_points: Optional[int] = None) -> DGField2D:
        return project(self.scenario.initial, self.mesh, self.order, n_points or self.order + 3)

    def electric_field(self, f: DGField2D) -> DGField1D:
        rho = compute_moments(f).rho
        return solve_periodic(self.ldg, rho)[0]

    def corrections(self, t: float) -> Optional[tuple[DGField1D, DGField1D, DGField1D]]:
        corr = self.scenario.corrections
        if corr is None:
            return None
        m = self.mesh
        n = self.order + 3
        return tuple(project_1d(lambda x, c=c: corr(t, x)[c], m.x_lower, m.x_upper, m.mx, self.order, n)
                     for c in range(3))


@dataclass
class SimulationState:
    """Distribution, time and bookkeeping carried between steps."""

    f: DGField2D
    t: float = 0.0
    step: int = 0
    report: LimiterReport = dc_field(default_factory=LimiterReport)
    E: Optional[DGField1D] = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.f.coeffs)):
            raise ConfigurationError("distribution has non-finite coefficients")


# --- single sweeps -------------------------------------------------------------

def _limit_before(problem: Problem, state: SimulationState, plan: SweepPlan) -> DGField2D:
    f = state.f
    if not problem.limiter:
        return f
    if plan.direction == "x":
        out, rep = limit_lines(f.coeffs, plan.nu)
        state.report = state.report.merge(rep)
        return f.with_coeffs(out)
    ft = f.transposed()
    out, rep = limit_lines(ft.coeffs, plan.nu)
    state.report = state.report.merge(rep)
    return ft.with_coeffs(out).transposed()


def x_stage(problem: Problem, state: SimulationState, dt: float, t_a: float) -> None:
    """A stage over ``[t_a, t_a + dt]`` on the A clock."""
    plan = build_x_sweep(state.f, dt, problem.scenario.x_speed, t_start=t_a)
    f = _limit_before(problem, state, plan)
    state.f = sweep(f, plan, problem.scenario.source)


def v_stage(problem: Problem, state: SimulationState, plan: SweepPlan) -> None:
    f = _limit_before(problem, state, plan)
    state.f = sweep(f, plan)


def _v_plan_speed(problem: Problem, f: DGField2D, dt: float) -> SweepPlan:
    return build_speed_v_sweep(f, dt, problem.scenario.v_speed, problem.vboundary)


# --- full steps ----------------------------------------------------------------

def strang_step(problem: Problem, state: SimulationState, dt: float) -> SimulationState:
    """Half x-sweep, field solve, full v-sweep, half x-sweep."""
    if not dt > 0:
        raise ConfigurationError(f"time step must be positive, got {dt}")
    t0 = state.t
    x_stage(problem, state, 0.5 * dt, t0)
    if problem.is_field_problem:
        E_half = problem.electric_field(state.f)
        plan = build_v_sweep(state.f, EFieldTaylor.frozen(E_half), 0.0, dt, problem.vboundary)
    else:
        plan = _v_plan_speed(problem, state.f, dt)
    v_stage(problem, state, plan)
    x_stage(problem, state, 0.5 * dt, t0 + 0.5 * dt)
    return _finish(problem, state, dt)


def taylor_at(problem: Problem, f: DGField2D, t: float) -> EFieldTaylor:
    """Field solve plus the moment-based Taylor polynomial anchored at ``t``."""
    moments = compute_moments(f)
    E = solve_periodic(problem.ldg, moments.rho)[0]
    return build_taylor(E, moments, problem.corrections(t), anchor=t)


def fourth_step(problem: Problem, state: SimulationState, dt: float,
                scheme: Optional[SplitScheme] = None) -> SimulationState:
    """Seven-stage fourth-order composition; ``dt`` may be negative."""
    if dt == 0:
        raise ConfigurationError("time step must be nonzero")
    scheme = scheme or SplitScheme.named("fourth_order")
    t0 = state.t
    taylor = taylor_at(problem, state.f, t0) if problem.is_field_problem else None
    a_windows = scheme.a_intervals()
    b_windows = scheme.b_intervals()
    for n, (a0, a1) in enumerate(a_windows):
        x_stage(problem, state, (a1 - a0) * dt, t0 + a0 * dt)
        if n < len(b_windows):
            b0, b1 = b_windows[n]
            if taylor is not None:
                plan = build_v_sweep(state.f, taylor, b0 * dt, b1 * dt, problem.vboundary)
            else:
                plan = _v_plan_speed(problem, state.f, (b1 - b0) * dt)
            v_stage(problem, state, plan)
    return _finish(problem, state, dt)


def _finish(problem: Problem, state: SimulationState, dt: float) -> SimulationState:
    if problem.limiter:
        f, rep = limit_final(state.f)
        state.f = f
        state.report = state.report.merge(rep)
    state.t += dt
    state.step += 1
    state.E = problem.electric_field(state.f) if problem.is_field_problem else None
    return state


STEPPERS: dict[str, Callable] = {"strang": strang_step, "fourth_order": fourth_step}


# --- time loop -----------------------------------------------------------------

def choose_dt(problem: Problem, f: DGField2D, cfl: float) -> float:
    """``cfl / max(max|a| / dx, max|b| / dv)`` with speeds sampled at cell centres.

    For field problems ``max|b|`` is the largest |E| at the x cell centres of
    the initial field.
    """
    if not cfl > 0:
        raise ConfigurationError(f"cfl must be positive, got {cfl}")
    mesh = problem.mesh
    rate_x = problem.scenario.max_x_speed(mesh.v_centers) / mesh.dx
    if problem.is_field_problem:
        E = problem.electric_field(f)
        rate_v = float(np.max(np.abs(E.values_at(np.zeros(1))))) / mesh.dv
    else:
        rate_v = problem.scenario.max_v_speed(mesh.x_centers) / mesh.dv
    rate = max(rate_x, rate_v)
    if rate == 0.0:
        raise ConfigurationError("all transport speeds vanish; cannot derive a time step")
    return cfl / rate


@dataclass
class RunResult:
    state: SimulationState
    records: list[DiagnosticsRecord]
    e_norms: list[tuple[float, float]]
    dt: float
    snapshots: dict[float, DGField2D]


def run(problem: Problem, cfl: float, t_final: float, scheme: str = "fourth_order",
        snapshot_times: tuple[float, ...] = (), dt: Optional[float] = None,
        diagnostics: bool = True, on_step: Optional[Callable[[SimulationState], None]] = None) -> RunResult:
    """Advance the projected initial data to ``t_final`` at constant step size.

    The last step is shortened to land on ``t_final``.  Snapshots are taken
    at the first time level at or after each requested time.
    """
    from .diagnostics import e_field_norm

    if t_final < 0:
        raise ConfigurationError(f"t_final must be non-negative, got {t_final}")
    if scheme not in STEPPERS:
        raise ConfigurationError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    stepper = STEPPERS[scheme]
    f0 = problem.initial_field()
    report = LimiterReport()
    if problem.limiter:
        f0, report = limit_final(f0)
    state = SimulationState(f0, report=report)
    if problem.is_field_problem:
        state.E = problem.electric_field(f0)
    step_dt = dt if dt is not None else choose_dt(problem, f0, cfl)
    records: list[DiagnosticsRecord] = []
    e_norms: list[tuple[float, float]] = []
    pending = sorted(float(s) for s in snapshot_times)
    snaps: dict[float, DGField2D] = {}

    def emit():
        if diagnostics:
            records.append(conserved_set(state.f, state.E, state.t))
        if state.E is not None:
            e_norms.append((state.t, e_field_norm(state.E)))
        while pending and state.t >= pending[0] - 1e-12 * max(1.0, abs(pending[0])):
            snaps[pending.pop(0)] = state.f.copy()

    emit()
    n_steps = math.ceil(t_final / step_dt - 1e-9) if t_final > 0 else 0
    for n in range(n_steps):
        h = min(step_dt, t_final - state.t) if n == n_steps - 1 else step_dt
        stepper(problem, state, h)
        if n == n_steps - 1:
            state.t = t_final
        emit()
        if on_step is not None:
            on_step(state)
    return RunResult(state, records, e_norms, step_dt, snaps)


__all__ = [
    "GAMMA1", "GAMMA2", "Problem", "RunResult", "SCHEMES", "SimulationState", "SplitScheme",
    "choose_dt", "fourth_step", "run", "strang_step", "taylor_at", "v_stage",
    "x_stage",
]
