"""Solving x^2 + y^2 = 2, 3x^2 - y^2 = 2 with a Macaulay matrix.

Walks through the eigenvalue pipeline one stage at a time: build the
matrix of shifted equations, row-reduce it exactly over QQ, read off a
basis of the quotient ring, form multiplication matrices and take
eigenvectors.
"""

from fractions import Fraction

import numpy as np

from polysolve import Polynomial, solve_eigen
from polysolve.macaulay import (build_macaulay, coordinate_matrices, multiplication_matrix,
                                reduce_and_select_basis)
from polysolve.systems import four_points

F = four_points()
print(F.format())

# every shift x^b * f_i of degree <= 3, one row each
M = build_macaulay(F, 3)
print(f"Macaulay matrix: {M.shape[0]} rows x {M.shape[1]} columns")

# exact Gauss-Jordan; the columns left without a pivot form the basis
Q, R = reduce_and_select_basis(M)
# shown with the basis columns moved to the right
print(M.with_columns(R.columns).to_csv())
print("reduced rows, each one an element of the ideal:")
for label in R.row_labels():
    print("   ", label)
labels = [lab for lab in multiplication_matrix(Q, Polynomial.constant(1, 2)).to_csv().splitlines()[0].split(",") if lab]
print("quotient basis:", labels)

Mx, My = coordinate_matrices(Q)
print("\nM_x =\n", np.array(Mx, dtype=int))
print("M_y =\n", np.array(My, dtype=int))
print("M_x M_y == M_y M_x:", (Mx.dot(My) == My.dot(Mx)).all())

# x alone cannot tell (1, 1) from (1, -1); a random combination of the
# coordinates separates all four roots.  Its left eigenvectors are the
# evaluation vectors ([1], [x], [y], [xy]) at the solutions.
h = Polynomial(2, {(1, 0): Fraction(37, 100), (0, 1): Fraction(-81, 100)})
Mh = multiplication_matrix(Q, h).numeric()
vals, vecs = np.linalg.eig(Mh.T)
print("\nleft eigenvectors of M_h, scaled so the [1] entry is 1:")
for k in range(4):
    w = vecs[:, k] / vecs[0, k]
    print(f"    h = {vals[k].real:+.2f}:", np.round(w.real, 12) + 0.0)

S = solve_eigen(F)
print("\nsolve_eigen:")
for s in S:
    print(f"    {np.round(s.point.real, 12) + 0.0}  residual {s.residual:.1e}")
