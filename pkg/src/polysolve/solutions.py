"""Solution containers, fast numeric evaluation and Newton refinement."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import EPS, SingularMatrixError, lu_factor, lu_inverse_abs_apply, lu_solve_factored
from .poly import PolySystem

REAL_TOL = 1e-6


class CompiledSystem:
    """A polynomial system frozen into numpy arrays for repeated evaluation.

    Monomials are evaluated from per-variable power tables, so one call costs
    a handful of vectorized gathers regardless of the number of terms.
    """

    def __init__(self, F: PolySystem):
        if F.field != "CC":
            F = F.to_complex()
        self.n = F.nvars
        self.s = len(F)
        monos = sorted({m for p in F.polys for m in p.terms})
        index = {m: j for j, m in enumerate(monos)}
        self.E = np.array(monos, dtype=np.int64).reshape(len(monos), self.n)
        self.C = np.zeros((self.s, len(monos)), dtype=complex)
        for i, p in enumerate(F.polys):
            for m, c in p.terms.items():
                self.C[i, index[m]] = c
        self.maxdeg = int(self.E.max()) if self.E.size else 0
        # d/dx_k: coefficient scale E[:, k], exponents E - e_k (clipped; scale is 0 there)
        self.Ek = [np.maximum(self.E - np.eye(self.n, dtype=np.int64)[k], 0) for k in range(self.n)]
        self.scale = [self.E[:, k].astype(float) for k in range(self.n)]
        self._cols = np.arange(self.n)
        # value and all partial derivatives from one gather: blocks E, E_0, ..., E_{n-1}
        m = len(monos)
        self._allE = np.vstack([self.E] + self.Ek) if m else self.E
        D = np.zeros((self.n + 1, self.s, m), dtype=complex)
        D[0] = self.C
        for k in range(self.n):
            D[k + 1] = self.C * self.scale[k]
        self._D = D

    def _monomials(self, pw: np.ndarray, E: np.ndarray) -> np.ndarray:
        return np.prod(pw[self._cols, E], axis=1)

    def _powers(self, x: np.ndarray) -> np.ndarray:
        pw = np.ones((self.n, self.maxdeg + 1), dtype=complex)
        for e in range(1, self.maxdeg + 1):
            pw[:, e] = pw[:, e - 1] * x
        return pw

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return self.C @ self._monomials(self._powers(x), self.E)

    def jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        pw = self._powers(x)
        J = np.empty((self.s, self.n), dtype=complex)
        for k in range(self.n):
            J[:, k] = self.C @ (self.scale[k] * self._monomials(pw, self.Ek[k]))
        return J

    def magnitude(self, x) -> np.ndarray:
        """sum |c| |x^a| per equation: the scale of rounding errors in evaluation."""
        ax = np.abs(np.asarray(x, dtype=complex))
        pw = np.ones((self.n, self.maxdeg + 1))
        for e in range(1, self.maxdeg + 1):
            pw[:, e] = pw[:, e - 1] * ax
        return np.abs(self.C) @ np.prod(pw[self._cols, self.E], axis=1)

    def rounding_bound(self, x) -> np.ndarray:
        """Componentwise bound on the floating-point error of ``self(x)``."""
        return (self.maxdeg + self.n + 2) * EPS * self.magnitude(x)

    def both(self, x):
        """``(F(x), J(x))`` in one pass."""
        x = np.asarray(x, dtype=complex)
        pw = self._powers(x)
        mons = self._monomials(pw, self._allE).reshape(self.n + 1, -1)
        out = np.einsum("ksm,km->sk", self._D, mons)
        return out[:, 0].copy(), out[:, 1:].copy()


def newton_refine(F: CompiledSystem, x, tol: float = 1e-12, max_iter: int = 10):
    """Newton (Gauss-Newton if overdetermined) from ``x``.

    Returns ``(x, converged)``.  Converged means the last update satisfied
    ``|dx| <= tol * (1 + |x|)`` or fell below the perturbation that rounding
    errors in evaluating F alone can cause (ill-conditioned roots never meet
    a fixed relative tolerance in double precision).
    """
    x = np.array(x, dtype=complex)
    for _ in range(max_iter):
        val, J = F.both(x)
        if not np.all(np.isfinite(val)) or not np.all(np.isfinite(J)):
            return x, False
        noise = F.rounding_bound(x)
        try:
            if F.s == F.n:
                fac = lu_factor(J)
                dx = lu_solve_factored(fac, val)
                floor = np.linalg.norm(lu_inverse_abs_apply(fac, noise))
            else:
                pinv = np.linalg.pinv(J)
                dx = pinv @ val
                floor = np.linalg.norm(np.abs(pinv) @ noise)
        except SingularMatrixError:
            return x, False
        x = x - dx
        nd = np.linalg.norm(dx)
        if nd <= max(tol * (1.0 + np.linalg.norm(x)), floor):
            return x, True
    return x, False


def backward_error(F: CompiledSystem, x) -> float:
    """max_i |f_i(x)| / sum |c| |x^a|: relative size of the coefficient change making x exact."""
    if not F.s:
        return 0.0
    mag = F.magnitude(x)
    return float(np.max(np.abs(F(x)) / np.where(mag > 0, mag, 1.0)))


def residual(F: CompiledSystem, x) -> float:
    return float(np.max(np.abs(F(x)))) if F.s else 0.0


@dataclass
class Solution:
    point: np.ndarray
    residual: float
    is_real: bool
    provenance: str

    def to_record(self) -> dict:
        return {
            "coordinates": [[float(z.real), float(z.imag)] for z in self.point],
            "residual": float(self.residual),
            "is_real": bool(self.is_real),
            "provenance": self.provenance,
        }

    @classmethod
    def from_record(cls, rec: dict) -> Solution:
        pt = np.array([complex(re, im) for re, im in rec["coordinates"]])
        return cls(pt, rec["residual"], rec["is_real"], rec["provenance"])

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return (np.array_equal(self.point, other.point) and self.residual == other.residual
                and self.is_real == other.is_real and self.provenance == other.provenance)


@dataclass
class SolutionSet:
    solutions: list[Solution]
    names: tuple[str, ...] = ()
    diagnostics: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i) -> Solution:
        return self.solutions[i]

    @property
    def points(self) -> np.ndarray:
        n = len(self.names) if self.names else 0
        if not self.solutions:
            return np.zeros((0, n), dtype=complex)
        return np.array([s.point for s in self.solutions])

    def real(self) -> list[Solution]:
        return [s for s in self.solutions if s.is_real]

    def to_records(self) -> list[dict]:
        return [s.to_record() for s in self.solutions]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @staticmethod
    def records_from_json(text: str) -> list[Solution]:
        return [Solution.from_record(r) for r in json.loads(text)]


def make_solution(F: CompiledSystem, x, provenance: str, real_tol: float = REAL_TOL) -> Solution:
    x = np.asarray(x, dtype=complex)
    return Solution(x, residual(F, x), bool(np.all(np.abs(x.imag) <= real_tol)), provenance)


BACKWARD_TOL = 1e-12


def accept(F: CompiledSystem, sol: Solution, tol: float) -> bool:
    """Residual check: absolute residual <= tol, or a backward error at rounding level.

    The second clause keeps roots whose absolute residual is dominated by
    cancellation among huge terms (Wilkinson-type polynomials).
    """
    return sol.residual <= tol or backward_error(F, sol.point) <= BACKWARD_TOL


def match_distance(P: np.ndarray, Q: np.ndarray) -> float:
    """Largest distance in an optimal one-to-one matching of two point sets.

    Infinite when the sizes differ.  Uses a bottleneck-free Hungarian
    assignment on Euclidean distances, which is what the tests need.
    """
    from scipy.optimize import linear_sum_assignment

    P = np.atleast_2d(np.asarray(P, dtype=complex))
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    if len(P) != len(Q):
        return float("inf")
    if len(P) == 0:
        return 0.0
    D = np.linalg.norm(P[:, None, :] - Q[None, :, :], axis=2)
    r, c = linear_sum_assignment(D)
    return float(D[r, c].max())


def cluster_points(points: Sequence[np.ndarray], tol: float) -> list[list[int]]:
    """Group indices of points closer than ``tol`` (single linkage)."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(points[i] - points[j]) < tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())
