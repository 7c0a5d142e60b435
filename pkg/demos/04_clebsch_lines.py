"""The 27 lines on the Clebsch diagonal cubic surface.

A line a + t*b lies on a cubic surface f = 0 exactly when the four
coefficients of f(a + t*b) as a polynomial in t vanish.  Normalizing
the parametrization leaves four equations in four unknowns.  This
script solves them by homotopy continuation (81 paths), confirms the
count with a Groebner basis and checks each line on the surface.
Expect about two minutes.
"""

import time
from fractions import Fraction

import numpy as np

from polysolve import GRLEX, buchberger, count_report, solve_homotopy, standard_monomials
from polysolve.systems import clebsch_cubic, clebsch_lines

F = clebsch_lines()
r = count_report(F)
print(f"{len(F)} equations of degrees {F.degrees}; bezout {r.bezout}, mixed volume {r.bkk}")

t0 = time.perf_counter()
S = solve_homotopy(F)
print(f"homotopy: {S.stats['paths']} paths, {S.stats['converged']} converged, "
      f"{S.stats['diverged']} diverged ({time.perf_counter() - t0:.0f}s)")
print(f"{len(S)} solutions, {len(S.real())} real, max residual {max(s.residual for s in S):.1e}")

# rebuild each line in R^3 and sample the surface along it
f = clebsch_cubic().to_complex()
worst = 0.0
for s in S:
    a1, a2, b1, b2 = s.point.real
    a = np.array([a1, a2, -(7 + a1 + 3 * a2) / 5])
    b = np.array([b1, b2, -(11 + 3 * b1 + 5 * b2) / 7])
    for t in np.linspace(-2, 2, 9):
        worst = max(worst, abs(f.evaluate(a + t * b)))
print(f"largest |f| at 9 points on each of the lines: {worst:.1e}")

t0 = time.perf_counter()
GB = buchberger(F, GRLEX)
Q = standard_monomials(GB)
print(f"\nreduced grlex Groebner basis: {len(GB)} polynomials, {Q.delta} standard monomials "
      f"({time.perf_counter() - t0:.0f}s)")
