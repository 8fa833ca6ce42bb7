"""Gaussian inner product and the harmonic/radial splitting of cubics."""

from fractions import Fraction

import numpy as np

from cubiclines.harmonic import (
    gaussian_gram,
    gaussian_inner_product,
    harmonic_model,
    laplacian_matrix,
    radial_vectors,
)
from cubiclines.surfaces import MONOMIAL_INDEX, MONOMIALS


def _unit(mono):
    v = [0] * 20
    v[MONOMIAL_INDEX[mono]] = 1
    return v


def test_gram_spot_values():
    # moments of the standard normal: E[g^6] = 15, E[g^4]E[g^2] = 3
    assert gaussian_inner_product(_unit((3, 0, 0, 0)), _unit((3, 0, 0, 0))) == 15
    assert gaussian_inner_product(_unit((3, 0, 0, 0)), _unit((1, 2, 0, 0))) == 3
    assert gaussian_inner_product(_unit((3, 0, 0, 0)), _unit((2, 1, 0, 0))) == 0
    assert gaussian_inner_product(_unit((1, 1, 1, 0)), _unit((1, 1, 1, 0))) == 1


def test_gram_symmetric_positive_definite():
    g = np.array(gaussian_gram(), dtype=float)
    assert (g == g.T).all()
    np.linalg.cholesky(g)  # raises if not positive definite


def test_laplacian_kernel_dimensions():
    model = harmonic_model()
    assert model.harmonic.shape == (16, 20)
    assert model.radial.shape == (4, 20)
    # squarefree monomials are harmonic
    lap = laplacian_matrix()
    idx = MONOMIAL_INDEX[(1, 1, 1, 0)]
    assert all(row[idx] == 0 for row in lap)


def test_exact_harmonicity():
    lap = laplacian_matrix()
    model = harmonic_model()
    for vec, _ in model.exact_harmonic:
        for row in lap:
            assert sum(Fraction(c) * v for c, v in zip(row, vec)) == 0


def test_exact_orthonormality():
    model = harmonic_model()
    basis = list(model.exact_harmonic) + list(model.exact_radial)
    for i, (vi, ni) in enumerate(basis):
        for j, (vj, nj) in enumerate(basis):
            dot = gaussian_inner_product(vi, vj)
            assert dot == (ni if i == j else 0), (i, j)


def test_float_rows_orthonormal():
    model = harmonic_model()
    g = np.array(gaussian_gram(), dtype=float)
    rows = np.vstack([model.harmonic, model.radial])
    prods = rows @ g @ rows.T
    assert np.abs(prods - np.eye(20)).max() < 1e-12


def test_radial_vectors_are_radial():
    # |x|^2 x_0 = x_0^3 + x_0 x_1^2 + x_0 x_2^2 + x_0 x_3^2
    v = radial_vectors()[0]
    expected = {(3, 0, 0, 0): 1, (1, 2, 0, 0): 1, (1, 0, 2, 0): 1, (1, 0, 0, 2): 1}
    for mono, idx in MONOMIAL_INDEX.items():
        assert v[idx] == expected.get(mono, 0)


def test_projection_coefficient_variance():
    # <f, H_{3,1}> for f sampled at interpolation weight lam is lam * xi_1,
    # a centered Gaussian with variance lam^2
    from cubiclines.realcubics import sample_real_cubic

    model = harmonic_model()
    g = np.array(gaussian_gram(), dtype=float)
    lam = 0.6
    rng = np.random.default_rng(20240819)
    samples = np.array(
        [sample_real_cubic(lam, rng) for _ in range(10000)]
    )
    coords = samples @ g @ model.harmonic[0]
    assert abs(coords.mean()) < 0.03
    assert abs(coords.var() - lam**2) < 0.1 * lam**2
