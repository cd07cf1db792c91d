"""Command line entry point: ``run``, ``converge`` and ``stability``."""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .advect1d import max_amplification, predicted_amplification
from .core import DGField2D, Mesh2D, project, relative_l2_error, tensor_points
from .diagnostics import DiagnosticsRecord, peak_rate
from .errors import ConfigurationError, SLDGError
from .scenarios import get_scenario
from .splitting import Problem, RunResult, run

THREADS_ENV = "SLDG_THREADS"

# peak-fit windows for the Landau runs: (t_min, t_max, max_peaks)
DECAY_WINDOWS = {
    "weak_landau": {"gamma": (0.0, 30.0, 6)},
    "strong_landau": {"gamma1": (0.0, math.inf, 2), "gamma2": (20.0, 40.0, None)},
}


def fmt(x: float) -> str:
    """Round-trip scientific notation (17 significant digits)."""
    return f"{x:.16e}"


def _thread_limit():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return nullcontext()
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=int(value))


def build_problem(cfg: cfgmod.RunConfig) -> Problem:
    scen = get_scenario(cfg.scenario, cfg.vmax)
    mesh = Mesh2D(cfg.mx, cfg.mv, scen.x_lower, scen.x_upper, scen.v_lower, scen.v_upper)
    return Problem(scen, mesh, cfg.order, limiter=cfg.limiter, vboundary=cfg.vboundary)


def simulate(cfg: cfgmod.RunConfig) -> RunResult:
    return run(build_problem(cfg), cfg.cfl, cfg.t_final, cfg.split_variant, cfg.snapshots)


def final_error(cfg: cfgmod.RunConfig, f: DGField2D, t: float) -> float:
    scen = get_scenario(cfg.scenario, cfg.vmax)
    if scen.exact is None:
        raise ConfigurationError(f"scenario {cfg.scenario!r} has no exact solution")
    exact = project(lambda x, v: scen.exact(t, x, v), f.mesh, f.order, f.order + 3)
    return relative_l2_error(f, exact)


# --- output ------------------------------------------------------------------

def write_diagnostics(path: Path, records: list[DiagnosticsRecord]) -> None:
    cols = DiagnosticsRecord.columns()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in records:
            w.writerow([str(v) if isinstance(v, int) else fmt(v) for v in (getattr(r, c) for c in cols)])


def write_efield(path: Path, e_norms: list[tuple[float, float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "log_e_l2"])
        for t, e in e_norms:
            w.writerow([fmt(t), fmt(math.log(e)) if e > 0 else "-inf"])


def write_snapshot(path: Path, f: DGField2D) -> None:
    """Point samples ``(x, v, f)`` at the tensor Gauss points of every cell."""
    xi, eta, _ = tensor_points(f.order)
    mesh = f.mesh
    x = mesh.x_centers[:, None, None] + 0.5 * mesh.dx * xi[None, None, :]
    v = mesh.v_centers[None, :, None] + 0.5 * mesh.dv * eta[None, None, :]
    vals = f.values_at(xi, eta)
    x, v = np.broadcast_arrays(x, v)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "v", "f"])
        for row in zip(x.ravel(), v.ravel(), vals.ravel()):
            w.writerow([fmt(c) for c in row])


def decay_rates(scenario: str, e_norms: list[tuple[float, float]]) -> dict[str, float]:
    windows = DECAY_WINDOWS.get(scenario, {})
    if not windows or len(e_norms) < 3:
        return {}
    t, e = np.array(e_norms).T
    out = {}
    for name, (lo, hi, n) in windows.items():
        try:
            out[name] = peak_rate(t, e, lo, hi, n)
        except SLDGError:
            pass
    return out


# --- commands ----------------------------------------------------------------

def cmd_run(args) -> int:
    cfg = cfgmod.load(args.config, args.set)
    out = Path(args.output or cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    result = simulate(cfg)
    write_diagnostics(out / "diagnostics.csv", result.records)
    write_efield(out / "efield_norm.csv", result.e_norms)
    for t, f in result.snapshots.items():
        write_snapshot(out / f"snapshot_t{t:g}.csv", f)
    (out / "config.txt").write_text(cfgmod.serialize(cfg), encoding="utf-8")
    print(f"scenario={cfg.scenario} steps={result.state.step} dt={fmt(result.dt)} t={fmt(result.state.t)}")
    scen = get_scenario(cfg.scenario, cfg.vmax)
    if scen.exact is not None:
        print(f"relative_l2_error={fmt(final_error(cfg, result.state.f, result.state.t))}")
    for name, rate in decay_rates(cfg.scenario, result.e_norms).items():
        print(f"{name}={rate:.6f}")
    return 0


def converge_table(cfg: cfgmod.RunConfig, meshes: list[int]) -> list[tuple[int, float, float]]:
    """Rows ``(n, error, log2 ratio)`` for ``n x n`` meshes; ratio is NaN on the first row."""
    if get_scenario(cfg.scenario, cfg.vmax).exact is None:
        raise ConfigurationError(f"scenario {cfg.scenario!r} has no exact solution")
    rows = []
    prev = None
    for n in meshes:
        c = cfgmod.with_mesh(cfg, n)
        res = simulate(c)
        err = final_error(c, res.state.f, res.state.t)
        ratio = math.log2(prev / err) if prev is not None and err > 0 else float("nan")
        rows.append((n, err, ratio))
        prev = err
    return rows


def cmd_converge(args) -> int:
    cfg = cfgmod.load(args.config, args.set)
    meshes = [int(s) for s in args.meshes.split(",") if s.strip()]
    if not meshes:
        raise ConfigurationError("--meshes needs at least one mesh size")
    print("mesh,error,log2_ratio")
    for n, err, ratio in converge_table(cfg, meshes):
        print(f"{n},{fmt(err)},{'' if math.isnan(ratio) else f'{ratio:.2f}'}")
    return 0


def cmd_stability(args) -> int:
    print("nu,modified_radius,modified_predicted,lxw_dg_radius,lxw_dg_predicted")
    for nu in np.linspace(0.0, 1.0, args.nu_samples):
        row = [nu,
               max_amplification(nu, "modified", args.zeta_samples), predicted_amplification(nu, "modified"),
               max_amplification(nu, "lxw_dg", args.zeta_samples), predicted_amplification(nu, "lxw_dg")]
        print(",".join(f"{v:.6f}" for v in row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sldg", description="Semi-Lagrangian DG Vlasov-Poisson solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one configuration and write CSV output")
    p.add_argument("config")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--output", help="output directory (overrides the config)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("converge", help="relative L2 errors over a list of n x n meshes")
    p.add_argument("config")
    p.add_argument("--meshes", required=True, help="comma separated mesh sizes, e.g. 10,20,40")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("stability", help="von Neumann radii of the piecewise-linear schemes")
    p.add_argument("--nu-samples", type=int, default=11)
    p.add_argument("--zeta-samples", type=int, default=256)
    p.set_defaults(func=cmd_stability)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except (SLDGError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
