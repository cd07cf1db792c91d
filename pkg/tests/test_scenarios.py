import math

import numpy as np
import pytest
from scipy.integrate import quad

from sldg.errors import ConfigurationError
from sldg.scenarios import (builtin_scenarios, forced_corrections, forced_exact, forced_exact_E,
                            forced_psi, forced_source_integral, get_scenario)


def test_catalog():
    cat = builtin_scenarios()
    assert sorted(cat) == ["forced", "rotation", "strong_landau", "two_stream", "weak_landau"]
    assert (cat["rotation"].x_lower, cat["rotation"].x_upper) == (0.0, 1.0)
    assert cat["forced"].v_upper == pytest.approx(np.pi)
    for name in ("two_stream", "weak_landau", "strong_landau"):
        assert cat[name].x_upper == pytest.approx(2 * np.pi)
        assert cat[name].v_upper == pytest.approx(2 * np.pi)
    with pytest.raises(ConfigurationError):
        get_scenario("vortex")


def test_initial_values():
    assert get_scenario("two_stream").initial(np.array(0.0), np.array(0.0)) == 0.0
    val = get_scenario("weak_landau").initial(np.array(0.0), np.array(0.0))
    assert val == pytest.approx(1.01 / math.sqrt(2 * math.pi))
    strong = get_scenario("strong_landau").initial(np.array(0.0), np.array(0.0))
    assert strong == pytest.approx(1.5 / math.sqrt(2 * math.pi))
    assert forced_exact_E(0.0, 0.0) == 0.0


@pytest.mark.parametrize("x, v, ta, tb", [(0.3, 0.7, 0.1, 0.4), (1.2, np.pi, 0.0, 0.2),
                                          (-2.0, -1.1, 0.5, 0.2), (0.0, 0.25, -0.3, 0.3)])
def test_source_integral_matches_quadrature(x, v, ta, tb):
    ref = quad(lambda s: forced_psi(s, x + v * (s - tb), v), ta, tb, epsabs=1e-13, limit=200)[0]
    assert forced_source_integral(x, v, ta, tb) == pytest.approx(ref, abs=1e-12)


def d(fun, z, h=1e-4):
    return (fun(z + h) - fun(z - h)) / (2 * h)


def test_forced_exact_solves_forced_equation():
    t, x, v = 0.23, 0.7, -0.4
    ft = d(lambda s: forced_exact(s, x, v), t)
    fx = d(lambda s: forced_exact(t, s, v), x)
    fv = d(lambda s: forced_exact(t, x, s), v)
    assert ft + v * fx + forced_exact_E(t, x) * fv == pytest.approx(forced_psi(t, x, v), abs=1e-7)


def test_rotation_exact_solves_advection():
    s = get_scenario("rotation")
    t, x, y = 0.13, 0.35, 0.62
    q = lambda tt, xx, yy: s.exact(tt, np.array(xx), np.array(yy))
    qt = d(lambda z: q(z, x, y), t, 1e-6)
    qx = d(lambda z: q(t, z, y), x, 1e-6)
    qy = d(lambda z: q(t, x, z), y, 1e-6)
    assert abs(qt + s.x_speed(y) * qx + s.v_speed(x) * qy) < 1e-7
    grid = np.linspace(0.05, 0.95, 7)
    X, Y = np.meshgrid(grid, grid)
    np.testing.assert_allclose(s.exact(1.0, X, Y), s.exact(0.0, X, Y), atol=1e-12)


def moment(t, x, p):
    return quad(lambda v: v**p * forced_exact(t, x, v), -np.inf, np.inf, epsabs=1e-14)[0]


def dx4(fun, x, h=1e-2):
    return (fun(x - 2 * h) - 8 * fun(x - h) + 8 * fun(x + h) - fun(x + 2 * h)) / (12 * h)


def dxx4(fun, x, h=1e-2):
    return (-fun(x - 2 * h) + 16 * fun(x - h) - 30 * fun(x) + 16 * fun(x + h) - fun(x + 2 * h)) / (12 * h**2)


@pytest.mark.parametrize("t, x", [(0.0, 0.4), (0.17, -1.3)])
def test_corrections_close_the_moment_equations(t, x):
    # time derivatives of the exact field -(sqrt(pi)/4) sin(2x - 2 pi t), by hand
    th = 2 * x - 2 * np.pi * t
    a = math.sqrt(math.pi) / 4
    E = lambda z: forced_exact_E(t, z)
    Et = a * 2 * np.pi * np.cos(th)
    Ett = a * 4 * np.pi**2 * np.sin(th)
    Ettt = -a * 8 * np.pi**3 * np.cos(th)
    rho = lambda z: moment(t, z, 0)
    rho_u = lambda z: moment(t, z, 1)
    c1, c2, c3 = forced_corrections(t, x)
    assert c1 == pytest.approx(Et + rho_u(x), abs=1e-10)
    assert c2 == pytest.approx(Ett - (dx4(lambda z: moment(t, z, 2), x) - rho(x) * E(x)), abs=1e-6)
    rhs3 = (2 * dx4(lambda z: rho_u(z) * E(z), x) - dxx4(lambda z: moment(t, z, 3), x)
            + E(x) * dx4(rho_u, x) + rho(x) * rho_u(x))
    assert c3 == pytest.approx(Ettt - rhs3, abs=1e-5)
