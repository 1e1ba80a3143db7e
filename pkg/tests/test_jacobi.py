import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import eval_jacobi, roots_jacobi

from twopoint.jacobi import (
    JacobiIndex, cosine_coeffs, cosine_coeffs_all, default_order, gauss_jacobi, jacobi_mass,
    jacobi_P, jacobi_Q, jacobi_Q_all, jacobi_Q_rows,
)
from twopoint.spaces import all_spaces, describe

CATALOG_INDICES = sorted({(p.alpha, p.beta) for p in all_spaces(16)})


def hypergeometric_P(a, b, k, x):
    """Independent oracle: terminating series binom(k+a, k) 2F1(-k, k+a+b+1; a+1; (1-x)/2)."""
    with mpmath.workdps(40):
        z = (1 - mpmath.mpf(x)) / 2
        total = sum(mpmath.rf(-k, j) * mpmath.rf(k + a + b + 1, j) / (mpmath.rf(a + 1, j) * mpmath.factorial(j)) * z**j
                    for j in range(k + 1))
        return float(mpmath.binomial(k + a, k) * total)


def beta_moment(a, b, j):
    """Exact int x^j (1-x)^a (1+x)^b dx via x = 2u - 1 and Beta integrals."""
    with mpmath.workdps(40):
        total = sum(mpmath.binomial(j, i) * 2**i * (-1) ** (j - i) * mpmath.beta(i + b + 1, a + 1)
                    for i in range(j + 1))
        return float(2 ** (a + b + 1) * total)


def test_degree_zero_and_one():
    assert jacobi_P((1.0, 0.0), 0, 0.3) == 1
    for x in np.linspace(-1, 1, 9):
        assert jacobi_P((1.0, 0.0), 1, x) == pytest.approx(1.5 * x + 0.5, abs=1e-14)
    assert jacobi_P((0.0, 0.0), 4, 1.0) == pytest.approx(1.0)


def test_normalized_examples():
    assert jacobi_Q((0.0, 0.0), 2, 0.0) == pytest.approx(-0.5, abs=1e-15)
    assert jacobi_Q((3.0, 1.0), 7, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert np.all(jacobi_Q((2.5, -0.5), 0, np.linspace(-1, 1, 5)) == 1)


def test_out_of_range_x_rejected():
    with pytest.raises(ValueError):
        jacobi_P((0.0, 0.0), 3, 1.5)


def test_invalid_index_rejected():
    with pytest.raises(ValueError):
        JacobiIndex(-1.0, 0.0)


@pytest.mark.parametrize("a, b", CATALOG_INDICES)
def test_recurrence_matches_hypergeometric_series(a, b):
    for k in range(13):
        for x in (-1.0, -0.7, 0.0, 0.35, 0.9, 1.0):
            assert jacobi_P((a, b), k, x) == pytest.approx(hypergeometric_P(a, b, k, x), rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("a, b", CATALOG_INDICES)
def test_recurrence_matches_scipy(a, b):
    x = np.linspace(-1, 1, 41)
    for k in (5, 20, 60):
        np.testing.assert_allclose(jacobi_P((a, b), k, x), eval_jacobi(k, a, b, x), rtol=1e-9, atol=1e-9)


def test_row_generator_matches_table():
    x = np.linspace(-1, 1, 17)
    rows = np.array(list(jacobi_Q_rows((3.0, 1.0), 30, x)))
    np.testing.assert_array_equal(rows, jacobi_Q_all((3.0, 1.0), 30, x))


@pytest.mark.parametrize("a, b", CATALOG_INDICES)
def test_Q_bounded_by_one(a, b):
    x = np.linspace(-1, 1, 10_000)
    assert np.abs(jacobi_Q_all((a, b), 256, x)).max() <= 1 + 1e-12


@pytest.mark.parametrize("a, b", CATALOG_INDICES[::3])
def test_orthogonality(a, b):
    rule = gauss_jacobi((a, b), 40)
    Q = jacobi_Q_all((a, b), 32, rule.nodes)
    gram = (Q * rule.weights) @ Q.T
    off = gram - np.diag(np.diag(gram))
    assert np.abs(off).max() < 1e-10 * np.diag(gram).max()


def test_gauss_examples():
    r1 = gauss_jacobi((0.0, 0.0), 1)
    assert r1.nodes == pytest.approx([0.0]) and r1.weights == pytest.approx([2.0])
    r3 = gauss_jacobi((0.0, 0.0), 3)
    assert r3.integrate(r3.nodes**4) == pytest.approx(2 / 5, abs=1e-12)
    assert r3.order == 3


@pytest.mark.parametrize("a, b", CATALOG_INDICES)
def test_gauss_matches_scipy_and_mass(a, b):
    rule = gauss_jacobi((a, b), 24)
    x, w = roots_jacobi(24, a, b)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-13)
    np.testing.assert_allclose(rule.weights, w, rtol=1e-10)
    mass = 2 ** (a + b + 1) * math.gamma(a + 1) * math.gamma(b + 1) / math.gamma(a + b + 2)
    assert rule.weights.sum() == pytest.approx(mass, rel=1e-12)
    assert jacobi_mass((a, b)) == pytest.approx(mass, rel=1e-12)


@given(st.sampled_from(CATALOG_INDICES), st.integers(1, 30))
def test_gauss_degree_exactness(idx, n):
    a, b = idx
    rule = gauss_jacobi(idx, n)
    for j in (2 * n - 2, 2 * n - 1):
        exact = beta_moment(a, b, j)
        assert rule.integrate(rule.nodes**j) == pytest.approx(exact, rel=1e-10, abs=1e-12 * rule.weights.sum())


def test_default_order():
    assert default_order(10) == 64
    assert default_order(100) == 216


def test_cosine_examples():
    np.testing.assert_allclose(cosine_coeffs((0.0, 0.0), 0), [1.0])
    np.testing.assert_allclose(cosine_coeffs((0.0, 0.0), 1), [0.0, 1.0], atol=1e-15)
    # Legendre P_2(cos t) = (1 + 3 cos 2t) / 4
    np.testing.assert_allclose(cosine_coeffs((0.0, 0.0), 2), [0.25, 0.0, 0.75], atol=1e-15)


@pytest.mark.parametrize("p", all_spaces(16)[::4], ids=describe)
def test_cosine_nonnegative_and_reconstructs(p):
    theta = np.linspace(0, np.pi, 301)
    for k in (3, 17, 64):
        c = cosine_coeffs(p, k)
        assert c.min() >= -1e-10
        recon = np.cos(np.outer(theta, np.arange(k + 1))) @ c
        np.testing.assert_allclose(recon, jacobi_Q(p, k, np.cos(theta)), atol=1e-10)


def test_cosine_table_rows_match_single_degree():
    table = cosine_coeffs_all((3.0, 1.0), 40)
    for k in (0, 7, 40):
        np.testing.assert_allclose(table[k, : k + 1], cosine_coeffs((3.0, 1.0), k), atol=1e-12)
    assert np.all(np.triu(table, 1) == 0)
