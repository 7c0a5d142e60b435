"""Counting and computing solutions of polynomial systems.

Root counts (Bezout, Kushnirenko, BKK), a Macaulay-matrix eigenvalue solver,
total-degree homotopy continuation and Buchberger's algorithm over QQ.
"""

from .poly import (CC, GREVLEX, GRLEX, LEX, QQ, MonomialOrder, ParseError, Polynomial,
                   PolySystem, format_poly, parse_poly, parse_system, read_system,
                   substitute_line)
from .root_counts import (NewtonPolytope, RootCountReport, Support, bezout_bound, convex_hull,
                          count_report, minkowski_sum, mixed_volume, mixed_volume_2d,
                          normalized_volume, volume)
from .linalg import eigen, lu_solve, rational_rref
from .solutions import Solution, SolutionSet
from .macaulay import (EigenConfig, MacaulayMatrix, MultiplicationMatrix, QuotientBasis,
                       build_macaulay, companion_matrix, multiplication_matrix,
                       reduce_and_select_basis, solve_eigen)
from .homotopy import Homotopy, PathState, TrackerConfig, solve_homotopy, total_degree_start, track_path
from .groebner import (DivisionResult, GroebnerBasis, buchberger, divide, eliminate,
                       groebner_normal_form, solve_groebner_eigen, standard_monomials)

__version__ = "0.1.0"
