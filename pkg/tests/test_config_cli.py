import csv

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sldg import cli
from sldg.config import RunConfig, parse, serialize, with_mesh
from sldg.errors import ConfigurationError

BASE = """\
# small rotation run
scenario = rotation
mx = 6
mv = 6
order = 3
cfl = 5
t_final = 0.25
scheme = sl2
"""


def write_config(tmp_path, text=BASE):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return path


def test_parse_defaults_and_overrides():
    cfg = parse(BASE, ["limiter=off", "snapshots = 0.1, 0.2"])
    assert cfg.split_variant == "strang" and cfg.order == 3 and cfg.cfl == 5.0
    assert cfg.limiter is False and cfg.snapshots == (0.1, 0.2)
    assert cfg.vmax is None and cfg.vboundary == "periodic"


def test_errors_carry_line_numbers():
    with pytest.raises(ConfigurationError, match="cfg:3"):
        parse("scenario = rotation\nmx = 4\nmv = four\n", source="cfg")
    with pytest.raises(ConfigurationError, match="unknown key"):
        parse(BASE + "colour = red\n")
    with pytest.raises(ConfigurationError, match="missing"):
        parse("scenario = rotation\n")
    with pytest.raises(ConfigurationError):
        parse(BASE, ["scheme=sl6"])
    with pytest.raises(ConfigurationError):
        parse(BASE, ["order=7"])


@given(st.sampled_from(["rotation", "forced", "two_stream", "weak_landau", "strong_landau"]),
       st.integers(1, 500), st.integers(1, 500), st.integers(1, 5),
       st.floats(1e-3, 50, allow_nan=False), st.floats(0, 100, allow_nan=False),
       st.sampled_from(["sl2", "sl4"]), st.booleans(),
       st.lists(st.floats(0, 100, allow_nan=False), max_size=3),
       st.one_of(st.none(), st.floats(0.5, 20, allow_nan=False)))
def test_round_trip(scenario, mx, mv, order, cfl, t_final, scheme, limiter, snaps, vmax):
    cfg = RunConfig(scenario, mx, mv, order, cfl, t_final, scheme, limiter, "out", tuple(snaps), vmax)
    assert parse(serialize(cfg)) == cfg


def test_with_mesh():
    assert with_mesh(parse(BASE), 40).mx == 40 == with_mesh(parse(BASE), 40).mv


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_run_writes_outputs(tmp_path, capsys):
    cfg = write_config(tmp_path, BASE + "snapshots = 0.1\n")
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--output", str(out)]) == 0
    diag = read_csv(out / "diagnostics.csv")
    assert diag[0] == ["t", "mass", "l1", "l2", "energy", "entropy", "min_value", "entropy_skipped"]
    assert len(diag) > 2 and float(diag[-1][0]) == 0.25
    assert len(diag[1][1].split("e")[0].replace("-", "").replace(".", "")) == 17
    snaps = list(out.glob("snapshot_*.csv"))
    assert len(snaps) == 1
    rows = read_csv(snaps[0])
    assert rows[0] == ["x", "v", "f"] and len(rows) == 1 + 36 * 9
    assert "relative_l2_error=" in capsys.readouterr().out


def test_run_is_deterministic(tmp_path):
    cfg = write_config(tmp_path, BASE + "snapshots = 0.25\n")
    for name in ("a", "b"):
        cli.main(["run", str(cfg), "--output", str(tmp_path / name)])
    for f in ("diagnostics.csv", "snapshot_t0.25.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_run_zero_time_gives_one_row(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "zero"
    cli.main(["run", str(cfg), "--set", "t_final=0", "--output", str(out)])
    assert len(read_csv(out / "diagnostics.csv")) == 2


def test_landau_run_reports_field_norm(tmp_path, capsys):
    cfg = write_config(tmp_path, "scenario = weak_landau\nmx = 8\nmv = 16\nt_final = 1\n")
    out = tmp_path / "landau"
    assert cli.main(["run", str(cfg), "--output", str(out)]) == 0
    rows = read_csv(out / "efield_norm.csv")
    assert rows[0] == ["t", "log_e_l2"] and len(rows) > 3
    assert float(rows[1][1]) < 0


def test_converge_table(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert cli.main(["converge", str(cfg), "--meshes", "6"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "mesh,error,log2_ratio" and len(lines) == 2 and lines[1].endswith(",")
    rows = cli.converge_table(parse(BASE, ["order=5"]), [8, 16])
    assert np.isnan(rows[0][2]) and rows[1][2] > 1


def test_converge_needs_exact_solution(tmp_path, capsys):
    cfg = write_config(tmp_path, "scenario = two_stream\nmx = 8\nmv = 8\n")
    assert cli.main(["converge", str(cfg), "--meshes", "8,16"]) == 2
    assert "no exact solution" in capsys.readouterr().err


def test_stability_report(capsys):
    assert cli.main(["stability", "--nu-samples", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    rows = [list(map(float, l.split(","))) for l in lines[1:]]
    assert all(r[1] == pytest.approx(1.0, abs=1e-10) for r in rows)
    two_thirds = rows[2]
    assert two_thirds[0] == pytest.approx(2 / 3, abs=1e-6) and two_thirds[3] == pytest.approx(3.0)
    assert rows[0][1] == rows[0][3] == 1.0


def test_thread_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.THREADS_ENV, "1")
    assert cli.main(["stability", "--nu-samples", "2"]) == 0


def test_missing_config_file(capsys):
    assert cli.main(["run", "/nonexistent/run.cfg"]) == 2
