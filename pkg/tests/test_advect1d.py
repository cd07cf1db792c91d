import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sldg.advect1d import (ShiftDecomposition, advect_row, amplification_matrix, decompose_shift,
                           kernel_symbol, max_amplification, overlap_matrices,
                           predicted_amplification, split_displacement)
from sldg.core import gauss_legendre, legendre_1d, project_1d
from sldg.errors import ConfigurationError

R3 = math.sqrt(3.0)


@pytest.mark.parametrize("d, j, nu", [(2.3, 2, 0.3), (-0.25, -1, 0.75), (1.0, 1, 0.0)])
def test_decompose_examples(d, j, nu):
    s = decompose_shift(d, 1.0, 1.0)
    assert s.j == j and s.nu == pytest.approx(nu, abs=1e-15)


def test_decompose_rejects_bad_width():
    with pytest.raises(ConfigurationError):
        decompose_shift(1.0, 1.0, 0.0)


@given(st.floats(-50, 50, allow_nan=False), st.floats(-2, 2, allow_nan=False),
       st.floats(1e-3, 10, allow_nan=False))
def test_decompose_invariants(a, dt, dx):
    s = decompose_shift(a, dt, dx)
    assert 0.0 <= s.nu < 1.0
    assert s.displacement == pytest.approx(a * dt / dx, abs=1e-12 * max(1.0, abs(a * dt / dx)))


def test_split_just_below_integer_wraps():
    j, nu = split_displacement(np.array([3.0 - 1e-17, -1e-17]))
    assert nu.tolist() == [0.0, 0.0] and j.tolist() == [3, 0]


def test_upwind_for_piecewise_constants():
    m = overlap_matrices(0.3, 1)
    assert m.left[0, 0] == pytest.approx(0.3) and m.right[0, 0] == pytest.approx(0.7)
    out = advect_row(np.array([[1.0], [0.0], [0.0], [0.0]]), ShiftDecomposition(0, 0.25))
    np.testing.assert_allclose(out[:, 0], [0.75, 0.25, 0.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("M", [1, 2, 3, 5])
def test_zero_shift_matrices(M):
    m = overlap_matrices(0.0, M)
    assert np.all(m.left == 0.0) and np.array_equal(m.right, np.eye(M))


@pytest.mark.parametrize("nu", [0.0, 0.2, 0.5, 0.97])
def test_modified_lxw_equivalence(nu):
    rng = np.random.default_rng(3)
    row = rng.normal(size=(7, 2))
    new = advect_row(row, ShiftDecomposition(0, nu))
    a, b = row[:, 0], row[:, 1]
    a1, b1 = np.roll(a, 1), np.roll(b, 1)
    ref1 = a - nu * ((a + R3 * b) - (a1 + R3 * b1)) + R3 * nu**2 * (b - b1)
    ref2 = (b + R3 * nu * ((a - R3 * b) - (a1 + R3 * b1))
            - R3 * nu**2 * (a - a1 - 2 * R3 * b1) + 2 * nu**3 * (b - b1))
    np.testing.assert_allclose(new[:, 0], ref1, atol=1e-13)
    np.testing.assert_allclose(new[:, 1], ref2, atol=1e-13)


def test_kernel_symbol_matches_amplification_matrix():
    for nu in np.linspace(0, 1, 11):
        for z in np.exp(1j * np.linspace(0, 2 * np.pi, 9)):
            np.testing.assert_allclose(kernel_symbol(nu, z, 2),
                                       amplification_matrix(nu, "modified", z), atol=1e-14)


def test_overlaps_match_fine_quadrature():
    # the left piece maps [-1, -1 + 2 nu] of the target onto the right end of the donor
    nu, M = 0.37, 4
    rule = gauss_legendre(16)
    t = -1 + nu * (1 + rule.points)
    left = 0.5 * nu * np.einsum("q,ql,qk->lk", rule.weights, legendre_1d(t, M),
                                legendre_1d(t + 2 - 2 * nu, M))
    np.testing.assert_allclose(overlap_matrices(nu, M).left, left, atol=1e-14)


def test_row_examples():
    rng = np.random.default_rng(4)
    row = rng.normal(size=(6, 3))
    assert np.array_equal(advect_row(row, ShiftDecomposition(0, 0.0)), row)
    assert np.array_equal(advect_row(row, ShiftDecomposition(1, 0.0)), np.roll(row, 1, axis=0))
    assert np.array_equal(advect_row(row, ShiftDecomposition(-8, 0.0)), np.roll(row, -8, axis=0))


def test_zero_inflow_drops_outgoing_cells():
    row = np.zeros((4, 1))
    row[3, 0] = 1.0
    out = advect_row(row, ShiftDecomposition(0, 0.5), "zero_inflow")
    np.testing.assert_allclose(out[:, 0], [0, 0, 0, 0.5])
    out = advect_row(row, ShiftDecomposition(-4, 0.0), "zero_inflow")
    assert np.all(out == 0)


def test_conservation_random_draws():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        M = int(rng.integers(1, 6))
        row = rng.normal(size=(9, M))
        s = ShiftDecomposition(int(rng.integers(-20, 20)), float(rng.uniform(0, 1)))
        new = advect_row(row, s)
        assert abs(new[:, 0].sum() - row[:, 0].sum()) <= 1e-13 * max(1.0, np.abs(row[:, 0]).sum())


@pytest.mark.parametrize("d1", [0.3, 2.71, -1.45])
def test_composition_for_global_polynomial(d1):
    # a global polynomial is transported exactly; cells near the periodic seam
    # see the jump there and are excluded
    M, n = 4, 24
    row = project_1d(lambda x: 0.2 + 0.5 * x - x**2 + 0.3 * x**3, 0.0, 1.0, n, M).coeffs
    out = row
    for d in (d1, 3.0 - d1):
        j, nu = split_displacement(d)
        out = advect_row(out, ShiftDecomposition(int(j), float(nu)))
    np.testing.assert_allclose(out[7:-7], np.roll(row, 3, axis=0)[7:-7], atol=5e-13)


def test_stability_modified():
    for nu in np.linspace(0, 1, 101):
        assert max_amplification(nu, "modified", 256) <= 1 + 1e-10


@pytest.mark.parametrize("nu", [0.0, 0.1, 0.25, 1 / 3, 0.5, 2 / 3, 0.9])
def test_stability_lxw(nu):
    assert max_amplification(nu, "lxw_dg") == pytest.approx(max(1.0, abs(1 - 6 * nu)), abs=1e-8)
    assert predicted_amplification(nu, "lxw_dg") == max(1.0, abs(1 - 6 * nu))


def test_amplification_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        amplification_matrix(0.5, "bogus", 1.0)
    with pytest.raises(ConfigurationError):
        amplification_matrix(0.5, "modified", 1.0, M=3)
    with pytest.raises(ConfigurationError):
        overlap_matrices(1.5, 2)
