"""Real-line counting and the simplex-curve estimator."""

import numpy as np
import pytest

from cubiclines.errors import CubicLinesError
from cubiclines.realcubics import (
    REAL_LINE_COUNTS,
    SimplexCurvePoint,
    count_real_lines,
    estimate_curve,
    random_rotation,
    sample_real_cubic,
)
from cubiclines.surfaces import MONOMIAL_INDEX, MONOMIALS, transform_cubic

FERMAT = [1.0 if sorted(m, reverse=True)[0] == 3 else 0.0 for m in MONOMIALS]


def _clebsch():
    """x0^3 + x1^3 + x2^3 + x3^3 - (x0 + x1 + x2 + x3)^3, all 27 lines real."""
    from math import factorial

    coeffs = [0.0] * 20
    for mono, idx in MONOMIAL_INDEX.items():
        multi = factorial(3)
        for e in mono:
            multi //= factorial(e)
        coeffs[idx] -= multi
        if sorted(mono, reverse=True)[0] == 3:
            coeffs[idx] += 1.0
    return coeffs


def test_clebsch_has_27_real_lines():
    assert count_real_lines(_clebsch(), np.random.default_rng(1)) == 27


def test_fermat_has_3_real_lines():
    assert count_real_lines(FERMAT, np.random.default_rng(2)) == 3


def test_random_rotation_is_orthogonal():
    rng = np.random.default_rng(3)
    for _ in range(10):
        q = random_rotation(rng)
        assert np.abs(q @ q.T - np.eye(4)).max() < 1e-12
        assert abs(np.linalg.det(q) - 1.0) < 1e-12 or abs(np.linalg.det(q) + 1.0) < 1e-12


def test_rotation_invariance_of_counts():
    # an orthogonal change of variables permutes the lines of the surface,
    # so every individual count is preserved (independent solver streams,
    # so agreement is a property of the surfaces, not of shared randomness)
    q = random_rotation(np.random.default_rng(77))
    for index in range(8):
        f = sample_real_cubic(0.4, np.random.default_rng((515, index)))
        moved = np.asarray(transform_cubic(f, q), dtype=float)
        n = count_real_lines(f, np.random.default_rng((516, index)))
        m = count_real_lines(moved, np.random.default_rng((517, index)))
        assert m == n


def test_sample_real_cubic_shape_and_interpolation():
    rng = np.random.default_rng(4)
    f = sample_real_cubic(0.5, rng)
    assert f.shape == (20,)
    assert np.isfinite(f).all()
    a = sample_real_cubic(0.2, np.random.default_rng(9))
    b = sample_real_cubic(0.8, np.random.default_rng(9))
    assert not np.allclose(a, b)


def test_kostlan_covariance():
    # At weight 1/3 the coefficient covariance 1/9 H^T H + 4/9 R^T R is
    # proportional to diag(3!/m!), i.e. independent monomial coefficients with
    # multinomial variances, whose kernel is E f(x)f(y) = (x.y)^3 / 54.
    from math import factorial

    from cubiclines.harmonic import harmonic_model

    model = harmonic_model()
    cov = (model.harmonic.T @ model.harmonic) / 9
    cov += 4 * (model.radial.T @ model.radial) / 9
    mult = [factorial(3) for _ in MONOMIALS]
    for i, m in enumerate(MONOMIALS):
        for e in m:
            mult[i] //= factorial(e)
    assert np.abs(54 * cov - np.diag(mult)).max() < 1e-12

    # empirical spot check at a pair of well-correlated unit points
    rng = np.random.default_rng(20240820)
    x = np.array([1.0, 0.0, 0.0, 0.0])
    y = np.array([0.8, 0.6, 0.0, 0.0])
    mono = np.array([[np.prod(p ** np.array(m)) for m in MONOMIALS] for p in (x, y)])
    draws = np.array([sample_real_cubic(1 / 3, rng) for _ in range(20000)])
    vals = draws @ mono.T
    emp_ratio = np.mean(vals[:, 0] * vals[:, 1]) / np.mean(vals[:, 0] ** 2)
    assert emp_ratio == pytest.approx(0.8**3, abs=0.05)


def test_counts_are_admissible():
    rng = np.random.default_rng(5)
    for _ in range(20):
        f = sample_real_cubic(1 / 3, rng)
        assert count_real_lines(f, rng) in REAL_LINE_COUNTS


def test_count_input_validation():
    with pytest.raises(ValueError):
        count_real_lines([1.0, 2.0], np.random.default_rng(0))


def test_curve_point_validation():
    pt = SimplexCurvePoint(0.3, 0.5, 0.25, 0.25, 0.0, 100, 0)
    assert pt.mean == pytest.approx(0.5 * 3 + 0.25 * 7 + 0.25 * 15)
    with pytest.raises(ValueError):
        SimplexCurvePoint(0.3, 0.5, 0.1, 0.1, 0.1, 100, 0)
    with pytest.raises(ValueError):
        SimplexCurvePoint(0.3, -0.5, 0.5, 0.5, 0.5, 100, 0)


def test_pi3_drops_from_radial_to_harmonic_end():
    # near the radial end almost every surface has only 3 real lines; near
    # the harmonic end richer configurations take over
    low, high = estimate_curve([0.05, 0.95], 40, 31415)
    assert low.pi3 > high.pi3


def test_estimate_curve_basic():
    points = estimate_curve([0.1, 0.6], 30, 12345)
    assert len(points) == 2
    for pt in points:
        assert pt.n_samples == 30
        assert 0 <= pt.n_failures <= 30
        assert abs(sum(pt.probabilities) - 1.0) < 1e-12
    # small weight concentrates on 3 real lines
    assert points[0].pi3 > points[1].pi3


def test_estimate_curve_deterministic():
    a = estimate_curve([0.4], 20, 99)
    b = estimate_curve([0.4], 20, 99)
    assert a == b
    rng = np.random.default_rng(99)
    c = estimate_curve([0.4], 20, rng)
    d = estimate_curve([0.4], 20, np.random.default_rng(99))
    assert c == d


def test_estimate_curve_validation():
    with pytest.raises(ValueError):
        estimate_curve([0.0], 10, 1)
    with pytest.raises(ValueError):
        estimate_curve([0.5], 0, 1)
