from fractions import Fraction

import numpy as np
import pytest
import sympy

from conftest import random_dense_system, random_poly
from polysolve import Polynomial, PolySystem, parse_poly, parse_system
from polysolve.macaulay import (EigenConfig, InconsistentSystemError, QuotientBasis, TruncationError,
                                build_macaulay, certify, companion_matrix, coordinate_matrices,
                                macaulay_bound, multiplication_matrix, quotient_from_macaulay,
                                reduce_and_select_basis, solve_eigen)
from polysolve.solutions import match_distance
from polysolve.systems import curves7, four_points

X, Y = ("x",), ("x", "y")


def ints(A):
    return [[int(v) for v in row] for row in A]


@pytest.fixture(scope="module")
def example():
    F = four_points()
    M = build_macaulay(F, 3)
    Q, R = reduce_and_select_basis(M)
    return F, M, Q, R


def test_macaulay_matrix_of_four_point_system(example):
    F, M, Q, R = example
    assert M.shape == (6, 10)
    assert M.row_labels() == ["f1", "x*f1", "y*f1", "f2", "x*f2", "y*f2"]
    # display layout: non-basis columns first, basis columns last
    cols = [(3, 0), (2, 1), (1, 2), (0, 3), (2, 0), (0, 2), (0, 0), (1, 0), (0, 1), (1, 1)]
    P = M.with_columns(cols)
    assert ints(P.entries) == [
        [0, 0, 0, 0, 1, 1, -2, 0, 0, 0],
        [1, 0, 1, 0, 0, 0, 0, -2, 0, 0],
        [0, 1, 0, 1, 0, 0, 0, 0, -2, 0],
        [0, 0, 0, 0, 3, -1, -2, 0, 0, 0],
        [3, 0, -1, 0, 0, 0, 0, -2, 0, 0],
        [0, 3, 0, -1, 0, 0, 0, 0, -2, 0],
    ]


def test_reduced_matrix_of_four_point_system(example):
    F, M, Q, R = example
    assert Q.monomials == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert R.columns == [(3, 0), (2, 1), (1, 2), (0, 3), (2, 0), (0, 2), (0, 0), (1, 0), (0, 1), (1, 1)]
    assert R.row_labels() == ["x^3 - x", "x^2*y - y", "x*y^2 - x", "y^3 - y", "x^2 - 1", "y^2 - 1"]
    assert ints(R.entries) == [
        [1, 0, 0, 0, 0, 0, 0, -1, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 1, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 1, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, -1, 0, 0, 0],
    ]
    # each reduced row is an element of the ideal: it vanishes on all four points
    for p in R.polys:
        for z in [(-1, -1), (-1, 1), (1, -1), (1, 1)]:
            assert p.evaluate(z) == 0


def test_multiplication_matrices_of_four_point_system(example):
    F, M, Q, R = example
    Mx, My = coordinate_matrices(Q)
    assert ints(Mx) == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    assert ints(My) == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    assert ints(Mx.dot(My)) == ints(My.dot(Mx))
    assert all(isinstance(v, Fraction) for v in Mx.flat)
    assert np.allclose(np.sort(np.linalg.eigvals(np.array(Mx, dtype=float)).real), [-1, -1, 1, 1])


def test_csv_dump(example):
    F, M, Q, R = example
    lines = M.to_csv().splitlines()
    assert lines[0] == ",x^3,x^2*y,x*y^2,y^3,x^2,x*y,y^2,x,y,1"
    assert lines[1] == "f1,0,0,0,0,1,0,1,0,0,-2"
    mx = multiplication_matrix(Q, Polynomial.variable(0, 2)).to_csv().splitlines()
    assert mx[0] == ",[1],[x],[y],[x*y]"
    assert mx[1] == "[1],0,1,0,0"


def test_multiplier_one_gives_identity(example):
    F, M, Q, R = example
    I = multiplication_matrix(Q, Polynomial.constant(1, 2)).matrix
    assert ints(I) == np.eye(4, dtype=int).tolist()


def test_solve_four_points():
    S = solve_eigen(four_points())
    assert sorted(tuple(round(v.real) for v in s.point) for s in S) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    assert all(s.residual <= 1e-12 and s.is_real for s in S)


def test_companion_small():
    C = companion_matrix(parse_poly("x^2 - 3*x + 2", X)).matrix
    assert ints(C) == [[0, -2], [1, 3]]
    assert np.allclose(np.sort(np.linalg.eigvals(np.array(C, dtype=float))), [1, 2])
    C12 = companion_matrix(parse_poly("x^12 - 1", X)).matrix
    assert C12.shape == (12, 12)
    assert [int(v) for v in C12[:, -1]] == [1] + [0] * 11
    assert all(C12[i, i - 1] == 1 for i in range(1, 12))


def test_companion_rejects_constants():
    with pytest.raises(ValueError):
        companion_matrix(parse_poly("5", X))
    with pytest.raises(ValueError):
        companion_matrix(parse_poly("0", X))
    with pytest.raises(ValueError):
        companion_matrix(parse_poly("x*y", Y))


def test_companion_charpoly_by_cofactor_expansion(rng):
    t = sympy.Symbol("t")
    for _ in range(20):
        c = [int(v) for v in rng.integers(-9, 10, 3)] + [int(rng.choice([-3, -2, -1, 1, 2, 3]))]
        f = Polynomial(1, {(i,): Fraction(ci) for i, ci in enumerate(c) if ci})
        C = companion_matrix(f).matrix
        S = sympy.Matrix(3, 3, lambda i, j: sympy.Rational(C[i, j].numerator, C[i, j].denominator))
        char = (t * sympy.eye(3) - S).det(method="laplace")
        expect = sum(sympy.Rational(ci, c[3]) * t ** i for i, ci in enumerate(c))
        assert sympy.expand(char - expect) == 0


def test_companion_equals_quotient_matrix():
    f = parse_poly("2*x^4 - 3*x^3 + x - 7", X)
    Q, _ = reduce_and_select_basis(build_macaulay(PolySystem((f,), X), 4))
    assert Q.monomials == ((0,), (1,), (2,), (3,))
    Mx = coordinate_matrices(Q)[0]
    assert (Mx == companion_matrix(f).matrix).all()
    # NF(x^4) = -(c0 + c1 x + c2 x^2 + c3 x^3) / c4
    assert list(Q.table[(4,)]) == [Fraction(7, 2), Fraction(-1, 2), 0, Fraction(3, 2)]


def test_build_macaulay_univariate_and_preconditions():
    F = PolySystem((parse_poly("x^3 - 2*x + 5", X),), X)
    M = build_macaulay(F, 3)
    assert M.shape == (1, 4)
    assert [int(v) for v in M.entries[0]] == [1, 0, -2, 5]
    with pytest.raises(ValueError):
        build_macaulay(four_points(), 1)


def test_shift_rows_contain_shifted_coefficients(rng):
    F = random_dense_system(rng, (2, 3))
    M = build_macaulay(F, 5)
    idx = M.column_index()
    for r, (i, beta) in enumerate(M.rows):
        g = F.polys[i].mul_monomial(beta)
        assert g.degree() <= 5
        row = {M.columns[j]: v for j, v in enumerate(M.entries[r]) if v != 0}
        assert row == dict(g.terms)
        assert all(m in idx for m in g.terms)


def test_unit_ideal_is_inconsistent():
    F = parse_system("vars: x, y\nx*y - 1\nx*y - 2\n")
    with pytest.raises(InconsistentSystemError):
        quotient_from_macaulay(F)
    with pytest.raises(InconsistentSystemError):
        quotient_from_macaulay(PolySystem((Polynomial.constant(1, 1),), X))


def test_truncation_error():
    Q, _ = reduce_and_select_basis(build_macaulay(four_points(), 3))
    with pytest.raises(TruncationError):
        Q.normal_form(parse_poly("x^5", Y))


def test_univariate_roots():
    F = PolySystem((parse_poly("(x - 1)*(x - 2)*(x - 3)", X),), X)
    S = solve_eigen(F)
    assert np.allclose(sorted(s.point[0].real for s in S), [1, 2, 3], atol=1e-12)


def test_curves7():
    S = solve_eigen(curves7())
    assert len(S) == 7 and all(s.is_real for s in S)
    pts = S.points
    for z in [(0, 0), (1, 1)]:
        assert np.min(np.linalg.norm(pts - np.array(z), axis=1)) < 1e-10
    assert max(s.residual for s in S) <= 1e-8


def test_normal_form_idempotent_and_kills_generators():
    F = curves7()
    Q, _, _ = quotient_from_macaulay(F)
    for i, b in enumerate(Q.monomials):
        v = Q.normal_form(Polynomial(2, {b: 1}))
        assert [int(c) for c in v] == [int(i == j) for j in range(Q.delta)]
    Ms = coordinate_matrices(Q)
    one = Q.table[(0, 0)]
    from polysolve.macaulay import _poly_of_matrices

    for f in F.polys:
        assert all(c == 0 for c in _poly_of_matrices(f, Ms, one))


def _complex_quotient(F):
    cfg = EigenConfig(exact=False)
    Q, _, _ = quotient_from_macaulay(F, cfg)
    return Q, cfg


@pytest.mark.parametrize("seed", range(8))
def test_complex_commutativity_and_spectra(seed):
    rng = np.random.default_rng(seed)
    F = random_dense_system(rng, (2, 2) if seed % 2 else (2, 3))
    Q, cfg = _complex_quotient(F)
    Mx, My = coordinate_matrices(Q)
    comm = np.linalg.norm(Mx @ My - My @ Mx)
    assert comm <= 1e-10 * np.linalg.norm(Mx) * np.linalg.norm(My)
    S = solve_eigen(F, cfg)
    assert len(S) == Q.delta == int(np.prod(F.degrees))
    for k, M in enumerate((Mx, My)):
        ev = np.linalg.eigvals(M)
        assert match_distance(ev[:, None], S.points[:, k:k + 1]) <= 1e-8 * max(1, np.abs(ev).max())


@pytest.mark.parametrize("seed", range(5))
def test_eigenvector_structure(seed):
    rng = np.random.default_rng(100 + seed)
    F = random_dense_system(rng, (2, 2))
    Q, cfg = _complex_quotient(F)
    g = Polynomial(2, {(1, 0): 0.3 + 0j, (0, 1): -0.7 + 0j, (0, 0): 0.1 + 0j})
    Mg = multiplication_matrix(Q, g).numeric()
    for s in solve_eigen(F, cfg):
        w = np.array([Polynomial(2, {b: 1}).to_complex().evaluate(s.point) for b in Q.monomials])
        lam = g.evaluate(s.point)
        assert np.linalg.norm(w @ Mg - lam * w) <= 1e-8 * np.linalg.norm(w) * max(1, np.linalg.norm(Mg))


def test_exact_and_complex_routes_agree(rng):
    for _ in range(5):
        F = random_dense_system(rng, (2, 2))
        A = solve_eigen(F)
        B = solve_eigen(F, EigenConfig(exact=False))
        assert len(A) == len(B)
        assert match_distance(A.points, B.points) <= 1e-8


def test_escalation_reported_in_stats():
    S = solve_eigen(curves7())
    assert S.stats["degree"] >= macaulay_bound(curves7())
    assert S.stats["delta"] == 7


def test_certify_rejects_bad_basis(example):
    F, M, Q, R = example
    from polysolve.macaulay import RankDeficiencyError

    bad = dict(Q.table)
    bad[(2, 0)] = np.array([Fraction(2), 0, 0, 0], dtype=object)
    Qb = QuotientBasis(Q.monomials, 2, Q.field, bad, Q.names)
    with pytest.raises(RankDeficiencyError):
        certify(Qb, F)


def test_non_radical_is_reported():
    F = parse_system("vars: x, y\nx^2\ny - x\n")
    S = solve_eigen(F)
    assert any("clustered" in d for d in S.diagnostics)


def test_random_poly_helper_is_degree_exact(rng):
    assert random_poly(rng, 3, 4).degree() == 4
