"""Following twelve roots of unity to the integers 1..12.

The start system x^12 - 1 is deformed into (x - 1)(x - 2)...(x - 12).
The tracker records every accepted step so the paths can be plotted;
pass a file name to save them as CSV.
"""

import csv
import sys

import numpy as np

from polysolve import solve_homotopy
from polysolve.homotopy import TrackerConfig
from polysolve.systems import wilkinson

F = wilkinson(12)
steps = []
R = solve_homotopy(F, TrackerConfig(seed=0), trace=lambda st: steps.append((st.path, st.t, complex(st.x[0]))),
                   full=True)

print(f"gamma = {R.solutions.stats['gamma'][0]:+.4f}{R.solutions.stats['gamma'][1]:+.4f}i")
print("path  start               end           steps  rejected")
for p in R.paths:
    start = next(x for k, t, x in steps if k == p.path)
    print(f"{p.path:4d}  {start.real:+.3f}{start.imag:+.3f}i  {p.x[0].real:14.10f}  {p.steps:5d}  {p.rejections:8d}")

roots = np.sort(R.solutions.points[:, 0].real)
print("\nmax distance to 1..12:", np.max(np.abs(roots - np.arange(1, 13))))
# the largest imaginary excursion shows how far the paths swing into C
print("largest |Im x| along any path:", max(abs(x.imag) for _, _, x in steps))

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["path", "t", "re_x", "im_x"])
        for k, t, x in steps:
            w.writerow([k, t, x.real, x.imag])
    print("wrote", sys.argv[1])
