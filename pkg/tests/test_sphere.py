import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import sph_harm_y

from cmclab.errors import ConfigurationError, DomainError
from cmclab.sphere import (
    SphericalField,
    SphericalGrid,
    TangentTensorField,
    eigenspace_project,
    evaluate,
    evaluate_jet,
    grad_dot,
    grad_norm2,
    gradient,
    harmonic,
    laplacian,
    random_field,
    random_rotation,
    resample,
    rotate_field,
    sphere_integral,
    tangential_derivatives,
)

GRID = SphericalGrid(10)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        SphericalGrid(-1)
    with pytest.raises(ConfigurationError):
        SphericalGrid(8, n_lon=10)
    with pytest.raises(ConfigurationError):
        SphericalGrid(8, n_lat=5)


def test_quadrature_weights_integrate_area():
    assert math.isclose(GRID.weights.sum(), 4.0 * math.pi, rel_tol=1e-14)


def test_synthesis_matches_scipy_harmonics():
    th, ph = GRID.mesh()
    for l, m in [(0, 0), (3, 2), (5, -4), (10, 7)]:
        c = np.zeros((11, 21), dtype=complex)
        c[l, m + 10] = 1.0
        f = SphericalField(GRID, coeffs=c)
        # scipy's complex harmonic carries the same Condon-Shortley phase
        ref = sph_harm_y(l, m, th, ph).real
        assert np.max(np.abs(f.values - ref)) < 1e-13


def test_real_harmonics_orthonormal():
    basis = [harmonic(GRID, l, m) for l in range(4) for m in range(-l, l + 1)]
    G = np.array([[sphere_integral(a * b) for b in basis] for a in basis])
    assert np.max(np.abs(G - np.eye(len(basis)))) < 1e-13


@given(st.integers(0, 2**32 - 1), st.integers(0, 10))
def test_analysis_synthesis_roundtrip(seed, deg):
    f = random_field(GRID, deg, np.random.default_rng(seed))
    back = SphericalField(GRID, values=f.values)
    assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-13
    assert f.band_limited()
    assert f.degree() <= deg


@given(st.integers(0, 2**32 - 1))
def test_random_field_unit_norm(seed):
    f = random_field(GRID, 8, np.random.default_rng(seed))
    assert math.isclose(sphere_integral(f * f), 1.0, rel_tol=1e-12)


def test_laplacian_eigenvalues():
    for l in range(6):
        Y = harmonic(GRID, l, min(l, 2))
        assert np.max(np.abs(laplacian(Y).values + l * (l + 1) * Y.values)) < 1e-12


def test_linear_field_derivatives():
    a = np.array([0.3, -1.1, 0.7])
    f = SphericalField.linear(GRID, a)
    grad, hess, lap = tangential_derivatives(f)
    _, e_th, e_ph = GRID.unit_vectors()
    assert np.max(np.abs(grad.components[..., 0] - e_th @ a)) < 1e-13
    assert np.max(np.abs(grad.components[..., 1] - e_ph @ a)) < 1e-13
    # Hess(a.y) = -(a.y) sigma on the unit sphere
    eye = np.eye(2)
    assert np.max(np.abs(hess.components + f.values[..., None, None] * eye)) < 1e-12
    assert np.max(np.abs(lap.values + 2.0 * f.values)) < 1e-12
    assert hess.is_symmetric()
    # |grad(a.y)|^2 = |a|^2 - (a.y)^2
    assert np.max(np.abs(grad_norm2(f).values - (a @ a - f.values**2))) < 1e-13


def test_integral_examples():
    assert math.isclose(sphere_integral(SphericalField.constant(GRID, 1.0)), 4.0 * math.pi, rel_tol=1e-12)
    a = np.array([0.6, 0.0, 0.8])
    f = SphericalField.linear(GRID, a)
    assert abs(sphere_integral(f)) < 1e-12
    assert math.isclose(sphere_integral(f * f), 4.0 * math.pi / 3.0, rel_tol=1e-12)


def test_second_moment_against_monte_carlo():
    # uniform points on S^2 via normalized Gaussians; 4-sigma band around the sample mean
    rng = np.random.default_rng(7)
    x = rng.standard_normal((2_000_000, 3))
    x /= np.linalg.norm(x, axis=1)[:, None]
    a = np.array([0.6, 0.0, 0.8])
    samples = 4.0 * math.pi * (x @ a) ** 2
    mc, err = samples.mean(), samples.std() / math.sqrt(len(samples))
    quad = sphere_integral(SphericalField.linear(GRID, a) ** 2)
    assert abs(quad - mc) < 4.0 * err
    assert err < 5e-3


@given(st.integers(0, 2**32 - 1), st.integers(0, 5))
def test_parseval(seed, deg):
    f = random_field(GRID, deg, np.random.default_rng(seed), unit_norm=False)
    energy = float(np.sum(np.abs(f.coeffs) ** 2))
    assert math.isclose(sphere_integral(f * f), energy, rel_tol=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_hessian_trace_is_laplacian(seed):
    f = random_field(GRID, 6, np.random.default_rng(seed))
    _, hess, lap = tangential_derivatives(f)
    assert np.max(np.abs(hess.trace().values - laplacian(f).values)) < 1e-11
    assert np.max(np.abs(lap.values - laplacian(f).values)) < 1e-11


@given(st.integers(0, 2**32 - 1))
def test_green_identity(seed):
    rng = np.random.default_rng(seed)
    f, h = random_field(GRID, 4, rng), random_field(GRID, 5, rng)
    assert abs(sphere_integral(grad_dot(f, h)) + sphere_integral(f * laplacian(h))) < 1e-12


@given(st.integers(0, 2**32 - 1))
def test_rotation_equivariance_of_calculus(seed):
    rng = np.random.default_rng(seed)
    f = random_field(GRID, 4, rng)
    R = random_rotation(rng)
    lhs = laplacian(rotate_field(f, R)) + grad_norm2(rotate_field(f, R))
    rhs = rotate_field(laplacian(f) + grad_norm2(f), R)
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-10


def test_evaluate_jet_matches_grid():
    f = random_field(GRID, 7, np.random.default_rng(3))
    th, ph = GRID.mesh()
    val, grad, hess = evaluate_jet(f, th.ravel(), ph.ravel())
    g, h, _ = tangential_derivatives(f)
    assert np.max(np.abs(val - f.values.ravel())) < 1e-13
    assert np.max(np.abs(grad - g.components.reshape(-1, 2))) < 1e-12
    assert np.max(np.abs(hess - h.components.reshape(-1, 2, 2))) < 1e-11
    with pytest.raises(DomainError):
        evaluate_jet(f, np.array([0.0]), np.array([0.0]))


def test_eigenspace_project_and_resample():
    rng = np.random.default_rng(5)
    f = random_field(GRID, 6, rng)
    parts = sum((eigenspace_project(f, l) for l in range(7)), SphericalField.constant(GRID, 0.0))
    assert np.max(np.abs(parts.values - f.values)) < 1e-13
    big = resample(f, SphericalGrid(14))
    th = np.array([0.4, 1.9])
    ph = np.array([0.1, 5.0])
    assert np.max(np.abs(evaluate(big, th, ph) - evaluate(f, th, ph))) < 1e-13
    with pytest.raises(ConfigurationError):
        resample(f, SphericalGrid(3))
    with pytest.raises(DomainError):
        eigenspace_project(f, 11)


def test_field_errors():
    with pytest.raises(ConfigurationError):
        SphericalField(GRID)
    with pytest.raises(ConfigurationError):
        SphericalField(GRID, values=np.zeros((3, 3)))
    with pytest.raises(ConfigurationError):
        SphericalField.constant(GRID, 1.0) + SphericalField.constant(SphericalGrid(4), 1.0)
    with pytest.raises(ConfigurationError):
        TangentTensorField(GRID, np.zeros(GRID.shape + (3,)), 1)
    with pytest.raises(DomainError):
        gradient(SphericalField.constant(GRID, 1.0)).trace()
