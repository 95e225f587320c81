import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings, strategies as st

from rsv.special_functions import (
    HarmonicBasis,
    SphereQuadrature,
    bessel_j,
    bessel_j_derivative,
    bessel_j_zeros,
    harmonic_indices,
    lb_eigen,
    multiplicity,
    spherical_harmonic,
    spherical_harmonic_dtheta,
    tangential_gradient,
)


# ---------------------------------------------------------------------------
# Bessel functions (in-repo implementation; scipy used only as test oracle)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("order", [0.0, 1.0, 2.0, 5.0, 0.5, 1.5, 2.5, 7.5])
def test_bessel_matches_scipy(order):
    z = np.linspace(1e-3, 50.0, 400)
    ours = np.array([bessel_j(order, float(x)) for x in z])
    ref = scipy.special.jv(order, z)
    assert np.max(np.abs(ours - ref)) < 1e-13


def test_bessel_at_zero():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.0, 0.0) == 0.0
    assert bessel_j(2.5, 0.0) == 0.0


@given(
    st.floats(min_value=0.1, max_value=40.0),
    st.sampled_from([0.0, 1.0, 2.0, 3.0, 0.5, 1.5]),
)
@settings(max_examples=80, deadline=None)
def test_bessel_recurrence(z, nu):
    # three-term recurrence J_{nu} + J_{nu+2} = (2(nu+1)/z) J_{nu+1}
    lhs = bessel_j(nu + 1.0, z) * 2.0 * (nu + 1.0) / z
    rhs = bessel_j(nu, z) + bessel_j(nu + 2.0, z)
    assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("order", [0.0, 1.0, 1.5, 3.0])
def test_bessel_derivative_identity(order):
    # d/dz [z^{-nu} J_nu] = -z^{-nu} J_{nu+1}, checked against central FD
    h = 1e-6
    for z in (0.7, 2.3, 9.1):
        f = lambda x: x ** (-order) * bessel_j(order, x)
        fd = (f(z + h) - f(z - h)) / (2 * h)
        exact = -(z ** (-order)) * bessel_j(order + 1.0, z)
        assert abs(fd - exact) < 1e-8
        # and the direct derivative evaluator
        fd2 = (bessel_j(order, z + h) - bessel_j(order, z - h)) / (2 * h)
        assert abs(bessel_j_derivative(order, z) - fd2) < 1e-8


def test_bessel_zeros():
    z0 = bessel_j_zeros(0.0, 3)
    ref = [2.404825557695773, 5.520078110286311, 8.653727912911013]
    assert np.allclose(z0, ref, atol=1e-11)
    # J_{1/2}(z) ~ sin(z): zeros at multiples of pi
    zh = bessel_j_zeros(0.5, 2)
    assert np.allclose(zh, [math.pi, 2 * math.pi], atol=1e-11)
    # zeros interlace with the next order's
    z1 = bessel_j_zeros(1.0, 3)
    assert z0[0] < z1[0] < z0[1] < z1[1] < z0[2]


# ---------------------------------------------------------------------------
# Laplace-Beltrami spectrum bookkeeping
# ---------------------------------------------------------------------------


def test_lb_eigen_values():
    assert lb_eigen(0, 2) == (0.0, 1)
    assert lb_eigen(1, 2) == (1.0, 2)
    assert lb_eigen(2, 2) == (4.0, 2)
    assert lb_eigen(1, 3) == (2.0, 3)
    assert lb_eigen(2, 3) == (6.0, 5)
    assert lb_eigen(3, 3) == (12.0, 7)
    assert multiplicity(4, 3) == 9


def test_harmonic_indices_cover_multiplicities():
    for n in (2, 3):
        idx = harmonic_indices(n, 5)
        for s in range(6):
            count = sum(1 for (d, _i) in idx if d == s)
            assert count == multiplicity(s, n)


# ---------------------------------------------------------------------------
# spherical harmonics and quadrature
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_quadrature_measures_sphere(n):
    quad = SphereQuadrature(n)
    total = quad.integrate(np.ones_like(quad.weights))
    assert abs(total - (2 * math.pi if n == 2 else 4 * math.pi)) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_harmonics_orthonormal(n):
    basis = HarmonicBasis(n, max_degree=8)
    gram = basis.gram()
    assert np.max(np.abs(gram - np.eye(gram.shape[0]))) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_unsold_sum(n):
    # sum over an orthonormal degree-s family of Y^2 is constant mult/|S^{n-1}|
    quad = SphereQuadrature(n, 20)
    for s in (1, 2, 4):
        total = np.zeros(quad.weights.shape[0])
        for i in range(multiplicity(s, n)):
            y = np.asarray(spherical_harmonic(n, s, i, quad.directions))
            total += y * y
        expected = multiplicity(s, n) / (2 * math.pi if n == 2 else 4 * math.pi)
        assert np.max(np.abs(total - expected)) < 1e-10


@pytest.mark.parametrize("n,s,i", [(2, 1, 0), (2, 3, 1), (3, 1, 1), (3, 2, 3), (3, 4, 2)])
def test_tangential_gradient_dirichlet_energy(n, s, i):
    # int |grad_tan Y|^2 = s(s+n-2) int Y^2 = s(s+n-2) on the unit sphere
    quad = SphereQuadrature(n, 48)
    g = tangential_gradient(n, s, i, quad.directions)
    energy = quad.integrate(np.einsum("qi,qi->q", g, g))
    mu, _ = lb_eigen(s, n)
    assert abs(energy - mu) < 1e-10
    # gradients are tangential
    radial = np.einsum("qi,qi->q", g, quad.directions)
    assert np.max(np.abs(radial)) < 1e-12


def test_dtheta_matches_finite_differences():
    h = 1e-5
    for n, s, i in [(2, 2, 0), (2, 3, 1), (3, 2, 1), (3, 3, 4)]:
        for theta in (0.4, 1.1, 2.3):
            phi = 0.7
            if n == 2:
                d = lambda t: np.array([math.cos(t), math.sin(t)])
            else:
                d = lambda t: np.array(
                    [math.sin(t) * math.cos(phi), math.sin(t) * math.sin(phi), math.cos(t)]
                )
            fd = (
                spherical_harmonic(n, s, i, d(theta + h))
                - spherical_harmonic(n, s, i, d(theta - h))
            ) / (2 * h)
            val = spherical_harmonic_dtheta(n, s, i, d(theta))
            assert abs(val - fd) < 1e-8


@pytest.mark.parametrize("n", [2, 3])
def test_projection_roundtrip(n):
    basis = HarmonicBasis(n, max_degree=6)
    rng = np.random.default_rng(7)
    coeffs = {
        (s, i): float(rng.normal())
        for (s, i) in harmonic_indices(n, 4)
    }
    values = basis.synthesize(coeffs)
    back = basis.project(values)
    for key, c in coeffs.items():
        assert abs(back[key] - c) < 1e-11
