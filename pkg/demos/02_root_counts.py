"""How many solutions should we expect?

Three upper bounds of increasing sharpness: Bezout (product of degrees),
Kushnirenko (normalized volume of a shared Newton polytope) and BKK
(mixed volume of the individual Newton polytopes).  Each count is
compared with the number of solutions the eigenvalue method finds.
"""

import numpy as np

from polysolve import count_report, normalized_volume, solve_eigen, Support
from polysolve.root_counts import convex_hull, mixed_volume
from polysolve.systems import clebsch_lines, curves7, sparse_pair

# two cubics with all monomials of the hexagon {x, y, x^2, xy, y^2, x^2y, xy^2}
F = curves7()
A = Support.of(F.polys[0])
P = convex_hull(A)
print("hexagon vertices:", P.vertices)
print("Euclidean area:", P.volume, " normalized volume:", normalized_volume(A))
r = count_report(F)
S = solve_eigen(F)
torus = [s for s in S if np.all(np.abs(s.point) > 1e-8)]
print(f"bezout {r.bezout}, kushnirenko {r.kushnirenko}, bkk {r.bkk}")
print(f"found {len(S)} solutions, {len(torus)} with no zero coordinate\n")

# different supports: a trinomial and a four-term polynomial
G = sparse_pair()
r = count_report(G)
print(G.format())
print(f"bezout {r.bezout}, kushnirenko {r.kushnirenko}, bkk {r.bkk}")
for note in r.notes:
    print("  note:", note)
print(f"found {len(solve_eigen(G))} solutions\n")

# mixed volume is symmetric and multilinear; a few sanity checks
simplex = lambda d: [(0, 0), (d, 0), (0, d)]
print("MV(2-simplex, 3-simplex) =", mixed_volume([simplex(2), simplex(3)]), "(= 2*3)")
print("MV(A, A) =", mixed_volume([A.points, A.points]), "(= vol A)\n")

# four cubics in four unknowns: the lines on the Clebsch surface
r = count_report(clebsch_lines())
print(f"Clebsch line system: bezout {r.bezout}, bkk {r.bkk}; the surface carries 27 lines")
