import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conformal_zeta.params import sphere_volume
from conformal_zeta.zonal import (ZonalField, constant_field, field_from_function, grad_sq,
                                  integrate, inner, laplacian, lp_norm, make_grid,
                                  random_zonal, synthesize)
from oracles import fd_laplacian, zonal_moment


def test_grid_invariants(grid4):
    assert np.all(np.diff(grid4.nodes) > 0)
    assert np.all(grid4.weights > 0)
    assert grid4.weights.sum() == pytest.approx(sphere_volume(4), rel=1e-12)


def test_rejects_small_grid():
    with pytest.raises(ValueError):
        make_grid(4, 8)


def test_rejects_odd_dimension():
    with pytest.raises(ValueError):
        make_grid(5, 64)


def test_integrate_constant_n4():
    grid = make_grid(4, 64)
    # closed form omega_4 = 2 pi^{5/2} / Gamma(5/2) = 8 pi^2 / 3
    assert integrate(constant_field(grid, 1.0)) == pytest.approx(8 * math.pi**2 / 3, rel=1e-12)


def test_integrate_odd_function_vanishes():
    grid = make_grid(4, 64)
    f = ZonalField(grid, grid.nodes.copy())  # cos(theta)
    assert abs(integrate(f)) < 1e-13


def test_integrate_converged_in_resolution():
    vals = []
    for size in (64, 128):
        grid = make_grid(6, size)
        vals.append(integrate(field_from_function(grid, lambda th: np.exp(np.cos(th)))))
    assert abs(vals[0] - vals[1]) < 1e-12


def test_quadrature_exact_to_degree_2n_minus_1():
    grid = make_grid(4, 64)
    rng = np.random.default_rng(11)
    coeffs = rng.standard_normal(2 * 64 - 1)  # degree 2N-2 polynomial in x
    poly = np.polynomial.polynomial.polyval(grid.nodes, coeffs)
    got = float(poly @ grid.weights)
    surface = sphere_volume(3)
    want = surface * math.fsum(c * zonal_moment(4, j) for j, c in enumerate(coeffs))
    assert got == pytest.approx(want, rel=1e-12)


def test_second_moment_beta_oracle():
    grid = make_grid(4, 64)
    f = ZonalField(grid, grid.nodes**2)
    # 2 pi^2 * int x^2 (1-x^2) dx = omega_4 / 5
    assert integrate(f) == pytest.approx(sphere_volume(4) / 5, rel=1e-13)


def test_lp_norm_constant(grid4):
    p = 4.0
    assert lp_norm(constant_field(grid4, 1.0), p) == pytest.approx(
        sphere_volume(4) ** (1 / p), rel=1e-14)


@given(c=st.floats(min_value=-100, max_value=100, allow_nan=False).filter(lambda v: abs(v) > 1e-6),
       q=st.floats(min_value=1.0, max_value=6.0))
def test_lp_norm_homogeneous(c, q):
    grid = make_grid(4, 16)
    f = ZonalField(grid, 1.0 + 0.5 * grid.nodes)
    assert lp_norm(ZonalField(grid, c * f.values), q) == pytest.approx(
        abs(c) * lp_norm(f, q), rel=1e-12)


def test_lp_norm_rejects_q_below_one(grid4):
    with pytest.raises(ValueError):
        lp_norm(constant_field(grid4, 1.0), 0.5)


def test_laplacian_kills_constants(grid4):
    out = laplacian(constant_field(grid4, 3.7))
    assert np.abs(out.values).max() < 1e-13


def test_laplacian_degree_one_eigenvalue(grid4):
    f = ZonalField(grid4, grid4.nodes.copy())
    out = laplacian(f)
    assert np.abs(out.values - 4.0 * grid4.nodes).max() < 1e-12


def test_laplacian_degree_two_eigenvalue_n6(grid6):
    f = synthesize(grid6, [0.0, 0.0, 1.0])
    out = laplacian(f)
    assert np.abs(out.values - 14.0 * f.values).max() < 1e-12


def test_laplacian_matches_finite_differences(grid4):
    fn = lambda th: np.exp(np.cos(th)) * np.cos(th)
    field = field_from_function(grid4, fn)
    spectral = laplacian(field)
    # compare at the grid's own interior nodes so no interpolation error enters
    keep = np.abs(grid4.nodes) < 0.95
    theta = np.arccos(grid4.nodes[keep])
    errs = []
    for h in (2e-3, 1e-3):
        fd = fd_laplacian(fn, theta, 4, h)
        errs.append(np.abs(fd - spectral.values[keep]).max())
    order = math.log2(errs[0] / errs[1])
    assert errs[1] < 1e-4
    assert order > 1.9


def test_grad_sq_constant_is_zero(grid4):
    assert np.abs(grad_sq(constant_field(grid4, 2.0)).values).max() < 1e-14


def test_grad_sq_cos_theta(grid4):
    f = ZonalField(grid4, grid4.nodes.copy())
    want = 1.0 - grid4.nodes**2  # symbolic: |d cos|^2 = sin^2
    assert np.abs(grad_sq(f).values - want).max() < 1e-12


def test_integration_by_parts(grid4):
    rng = np.random.default_rng(5)
    f = synthesize(grid4, rng.standard_normal(40) / (1 + np.arange(40.0)))
    lhs = integrate(grad_sq(f))
    rhs = inner(f, laplacian(f))
    assert abs(lhs - rhs) < 1e-10


def test_parseval(grid4):
    rng = np.random.default_rng(7)
    f = synthesize(grid4, rng.standard_normal(50))
    assert inner(f, f) == pytest.approx(float((f.coefficients() ** 2).sum()), abs=1e-10)


def test_roundtrip_band_limited(grid4):
    rng = np.random.default_rng(9)
    coeffs = rng.standard_normal(64)
    f = synthesize(grid4, coeffs)
    back = f.coefficients()[:64]
    assert np.abs(back - coeffs).max() < 1e-12


def test_random_zonal_deterministic(grid4):
    a = random_zonal(grid4, 42, 16, 0.5, 1e-3)
    b = random_zonal(grid4, 42, 16, 0.5, 1e-3)
    assert np.array_equal(a.values, b.values)


def test_random_zonal_respects_floor(grid4):
    f = random_zonal(grid4, 1, 16, 2.0, 0.25)
    assert f.values.min() >= 0.25 - 1e-15


def test_random_zonal_band_limited(grid4):
    f = random_zonal(grid4, 3, 12, 1.0, 0.1)
    assert np.abs(f.coefficients()[13:]).max() < 1e-12


def test_monotone_on_nonnegative(grid4):
    f = random_zonal(grid4, 8, 10, 1.0, 0.2)
    assert integrate(f) > 0
