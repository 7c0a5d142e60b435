"""Closest point on a curve via Lagrange multipliers.

Minimizing (x1 - 2)^2 + (x2 - 3)^2 on a curve h = 0 means solving
grad g = lam * grad h together with h = 0.  The number of complex
critical points is the Euclidean distance degree of the curve: 2 for a
circle, 4 for a generic ellipse.
"""

import numpy as np

from polysolve import parse_poly, solve_eigen
from polysolve.cli import lagrange_system

names = ("x1", "x2")
g = parse_poly("(x1 - 2)^2 + (x2 - 3)^2", names)

for label, h in [("unit circle", "x1^2 + x2^2 - 1"), ("ellipse", "x1^2 + 4*x2^2 - 4")]:
    L = lagrange_system(g, [parse_poly(h, names)], names)
    print(f"{label}: {h} = 0")
    print("  " + L.format().replace("\n", "\n  ").rstrip())
    S = solve_eigen(L)
    print(f"  {len(S)} critical points, {len(S.real())} real")
    best = min(S.real(), key=lambda s: g.to_complex().evaluate(s.point[:2]).real)
    x = best.point[:2].real
    print(f"  closest point ({x[0]:.6f}, {x[1]:.6f}), distance {np.sqrt(g.evaluate(tuple(x)).real):.6f}\n")
