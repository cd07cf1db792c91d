import numpy as np
import pytest

from sldg.core import DGField2D, Mesh2D, project, project_1d
from sldg.diagnostics import (DiagnosticsRecord, conserved_set, deviations, e_field_norm, entropy,
                              field_energy, functional, l2_norm, local_maxima, mass, peak_rate,
                              phase_functional)
from sldg.errors import DiagnosticsError
from sldg.scenarios import get_scenario

MESH = Mesh2D(6, 8, -1.0, 2.0, -2.0, 2.0)


def test_functional_of_constant():
    f = project(lambda x, v: 1.5 + 0 * x, MESH, 5)
    assert functional(f, lambda y: y) == pytest.approx(1.5 * 12.0)


def test_identity_functional_is_mass():
    rng = np.random.default_rng(0)
    f = DGField2D(MESH, 4, rng.normal(size=(6, 8, 10)))
    assert functional(f, lambda y: y) == pytest.approx(mass(f), abs=1e-13)
    assert mass(f) == pytest.approx(f.coeffs[..., 0].sum() * MESH.dx * MESH.dv)


def test_square_functional_matches_coefficient_norm():
    s = get_scenario("two_stream")
    mesh = Mesh2D(65, 65, s.x_lower, s.x_upper, s.v_lower, s.v_upper)
    f = project(s.initial, mesh, 5)
    assert functional(f, np.square) == pytest.approx(l2_norm(f) ** 2, rel=1e-10)


def test_zero_field():
    rec = conserved_set(DGField2D.zeros(MESH, 3), None)
    assert (rec.mass, rec.l1, rec.l2, rec.energy, rec.entropy, rec.min_value) == (0, 0, 0, 0, 0, 0)


def test_l1_equals_mass_for_nonnegative_field():
    f = project(lambda x, v: np.exp(-v**2) * (1.2 + np.sin(x)), MESH, 3)
    rec = conserved_set(f, None)
    assert rec.min_value > 0
    assert rec.l1 == pytest.approx(rec.mass, rel=1e-14)


def test_energy_parts():
    f = project(lambda x, v: np.exp(-v**2) * (1.2 + np.sin(x)), MESH, 5)
    kinetic = 0.5 * phase_functional(f, lambda y, x, v: v**2 * y)
    assert conserved_set(f, None).energy == pytest.approx(kinetic, rel=1e-14)
    E = project_1d(np.cos, -1.0, 2.0, 6, 5, 8)
    assert field_energy(E) == pytest.approx(0.5 * (1.5 + 0.25 * (np.sin(4.0) - np.sin(-2.0))), rel=1e-8)
    assert conserved_set(f, E).energy == pytest.approx(kinetic + field_energy(E))
    assert e_field_norm(E) == pytest.approx(np.sqrt(2 * field_energy(E)))


def test_entropy_skips_nonpositive_points():
    f = project(lambda x, v: np.sin(3 * x) * np.cos(v), MESH, 3)
    value, skipped = entropy(f)
    assert np.isfinite(value) and skipped > 0
    pos = project(lambda x, v: 2.0 + 0 * x, MESH, 3)
    value, skipped = entropy(pos)
    assert skipped == 0 and value == pytest.approx(-2 * np.log(2) * 12.0)


def test_non_finite_integrand_names_cell():
    f = project(lambda x, v: 1.0 + 0 * x, MESH, 2)
    with pytest.raises(DiagnosticsError, match="cell"):
        functional(f, lambda y: y / 0.0)


def test_deviations():
    recs = [DiagnosticsRecord(t, 1.0 + t, 0, 0, 0, 0, 0) for t in (0.0, 0.5, 2.0)]
    np.testing.assert_allclose(deviations(recs, "mass"), [0.0, 0.5, 2.0])
    assert DiagnosticsRecord.columns()[0] == "t"


def test_peak_rate_recovers_damping():
    t = np.linspace(0, 30, 3001)
    e = np.abs(np.cos(1.4 * t)) * np.exp(-0.15 * t) + 1e-9
    assert peak_rate(t, e, 0, 30, 6) == pytest.approx(-0.15, abs=2e-3)
    assert local_maxima([0, 1, 0, 2, 2, 1]).tolist() == [1, 3]
    with pytest.raises(DiagnosticsError):
        peak_rate(t, e, 31, 40)
