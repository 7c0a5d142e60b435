from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from polysolve.linalg import (SingularMatrixError, balance, eigen, hessenberg, lu_factor,
                              lu_inverse_abs_apply, lu_solve, lu_solve_factored, rational_rref)

small_ints = st.integers(-6, 6)


def random_complex(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def match_spectra(a, b):
    from scipy.optimize import linear_sum_assignment

    D = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(D)
    return D[r, c].max()


def test_lu_solve_matches_numpy(rng):
    for n in (1, 3, 8, 30):
        A = random_complex(rng, n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        x = lu_solve(A, b)
        assert np.allclose(x, np.linalg.solve(A, b), rtol=1e-10, atol=1e-12)


def test_lu_solve_matrix_rhs(rng):
    A = random_complex(rng, 6)
    B = rng.normal(size=(6, 4))
    X = lu_solve_factored(lu_factor(A), B)
    assert np.allclose(A @ X, B, atol=1e-12)


def test_inverse_abs_apply(rng):
    A = random_complex(rng, 5)
    v = rng.uniform(0, 1, 5)
    assert np.allclose(lu_inverse_abs_apply(lu_factor(A), v), np.abs(np.linalg.inv(A)) @ v)


def test_singular_detection():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError):
        lu_factor(A)
    # without checking the factorization still completes
    lu, piv = lu_factor(A, check=False)
    assert np.all(np.isfinite(lu))


def test_rref_example():
    R, piv = rational_rref([[2, 4, 6], [1, 3, 5]])
    assert piv == [0, 1]
    assert R == [[1, 0, -1], [0, 1, 2]]
    assert all(isinstance(v, Fraction) for r in R for v in r)


def test_rref_column_order():
    A = [[1, 1, 0], [0, 1, 1]]
    R, piv = rational_rref(A, column_order=[2, 1, 0])
    assert piv == [2, 1]
    with pytest.raises(ValueError):
        rational_rref(A, column_order=[0, 0, 1])


@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_rref_matches_sympy(m, n, data):
    A = [[data.draw(small_ints) for _ in range(n)] for _ in range(m)]
    R, piv = rational_rref(A)
    S, spiv = sympy.Matrix(A).rref()
    assert tuple(piv) == spiv
    for i in range(m):
        assert [sympy.Rational(v.numerator, v.denominator) for v in R[i]] == list(S.row(i))


def test_balance_is_similarity(rng):
    A = random_complex(rng, 7) * np.logspace(-4, 4, 7)[:, None]
    B, d = balance(A)
    assert np.allclose(B, (A * d[None, :]) / d[:, None])
    assert np.allclose(np.sort_complex(np.linalg.eigvals(B)), np.sort_complex(np.linalg.eigvals(A)),
                       rtol=1e-8, atol=1e-8)


def test_hessenberg_form(rng):
    A = random_complex(rng, 8)
    H = hessenberg(A)
    assert np.allclose(np.tril(H, -2), 0)
    assert match_spectra(np.linalg.eigvals(H), np.linalg.eigvals(A)) < 1e-9


@pytest.mark.parametrize("n", [1, 2, 5, 20, 60])
def test_eigen_matches_numpy(rng, n):
    A = random_complex(rng, n)
    E = eigen(A)
    assert match_spectra(E.values, np.linalg.eigvals(A)) < 1e-9 * max(1, np.abs(A).max() * n)
    assert E.accepted(1e-10).all()
    for k in range(n):
        v = E.vectors[:, k]
        assert np.linalg.norm(A @ v - E.values[k] * v) <= 1e-9 * np.linalg.norm(A)


def test_eigen_real_and_companion():
    # companion matrix of (z - 1)(z - 2)(z - 3)
    C = np.array([[0, 0, 6], [1, 0, -11], [0, 1, 6]], dtype=float)
    vals = np.sort(eigen(C).values.real)
    assert np.allclose(vals, [1, 2, 3], atol=1e-10)


def test_eigen_repeated_and_defective():
    J = np.array([[2.0, 1.0], [0.0, 2.0]])
    E = eigen(J)
    assert np.allclose(E.values, [2, 2], atol=1e-7)
    I = np.eye(4)
    assert np.allclose(eigen(I).values, 1)


def test_eigen_rejects_bad_input():
    with pytest.raises(ValueError):
        eigen(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigen(np.array([[np.nan]]))


def test_eigen_without_vectors(rng):
    A = random_complex(rng, 10)
    E = eigen(A, vectors=False)
    assert E.vectors.shape == (10, 0)
    assert match_spectra(E.values, np.linalg.eigvals(A)) < 1e-9


def test_lu_small_examples(rng):
    b = np.array([2.0, 3.0])
    assert np.allclose(lu_solve(np.eye(2), b), b)
    assert np.allclose(lu_solve(np.diag([2.0, 3.0]), b), [1, 1])
    A = random_complex(rng, 20)
    b = rng.normal(size=20)
    x = lu_solve(A, b)
    bound = 1e-12 * (np.linalg.norm(A) * np.linalg.norm(x) + np.linalg.norm(b))
    assert np.linalg.norm(A @ x - b) <= bound


def test_rref_identity_and_duplicates():
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    assert rational_rref(I3) == (I3, [0, 1, 2])
    R, piv = rational_rref([[1, 2, 3], [2, 4, 6], [1, 2, 3]])
    assert piv == [0]
    assert R[1] == [0, 0, 0] and R[2] == [0, 0, 0]


@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_rref_idempotent(m, n, data):
    A = [[data.draw(small_ints) for _ in range(n)] for _ in range(m)]
    R, piv = rational_rref(A)
    assert rational_rref(R) == (R, piv)


def test_eigen_small_examples():
    assert np.allclose(np.sort(eigen(np.array([[0.0, 1.0], [1.0, 0.0]])).values.real), [-1, 1])
    c = np.poly(np.arange(1, 7))  # monic, highest degree first
    C = np.zeros((6, 6))
    C[1:, :-1] = np.eye(5)
    C[:, -1] = -c[::-1][:-1]
    vals = np.sort(eigen(C).values.real)
    assert np.allclose(vals, np.arange(1, 7), atol=1e-8)


def test_trace_and_determinant(rng):
    for n in (2, 5, 12, 20):
        A = random_complex(rng, n)
        vals = eigen(A, vectors=False).values
        assert abs(vals.sum() - np.trace(A)) <= 1e-8 * np.linalg.norm(A)
        det = np.linalg.det(A)
        assert abs(np.prod(vals) - det) <= 1e-6 * abs(det)


def _bisection_roots(coeffs, lo=-20.0, hi=20.0):
    """Real roots of a real-rooted polynomial by bisection and deflation."""
    p = np.array(coeffs, dtype=float)
    roots = []
    while len(p) > 1:
        grid = np.linspace(lo, hi, 4001)
        vals = np.polyval(p, grid)
        k = int(np.argmax(np.sign(vals[:-1]) != np.sign(vals[1:])))
        a, b = grid[k], grid[k + 1]
        for _ in range(200):
            m = 0.5 * (a + b)
            if np.sign(np.polyval(p, m)) == np.sign(np.polyval(p, a)):
                a = m
            else:
                b = m
        r = 0.5 * (a + b)
        roots.append(r)
        p, _ = np.polydiv(p, [1.0, -r])
    return np.sort(roots)


def test_companion_roots_match_bisection(rng):
    for _ in range(10):
        roots = np.sort(rng.choice(np.arange(-9, 10), size=5, replace=False) + rng.uniform(-0.3, 0.3, 5))
        c = np.poly(roots)
        C = np.zeros((5, 5))
        C[1:, :-1] = np.eye(4)
        C[:, -1] = -c[::-1][:-1]
        got = np.sort(eigen(C).values.real)
        assert np.allclose(got, _bisection_roots(c), atol=1e-7)
