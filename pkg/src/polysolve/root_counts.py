"""Newton polytopes and the Bezout / Kushnirenko / BKK root counts.

All geometry is exact.  Supports are integer point sets; hulls are built by
incremental (beneath-beyond) insertion with integer orientation tests, which
also yields a placing triangulation and hence the volume.  Mixed volumes use
inclusion-exclusion over Minkowski sums, which costs 2^n - 1 hulls and is
only meant for n <= 4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .poly import PolySystem, Polynomial

MAX_HULL_DIM = 6
MAX_MV_DIM = 4

Point = tuple[int, ...]


# ---------------------------------------------------------------------------
# supports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Support:
    """A finite, nonempty set of exponent vectors in N^n (or Z^n)."""

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(sorted({tuple(int(v) for v in p) for p in self.points}))
        if not pts:
            raise ValueError("a support must be nonempty")
        n = len(pts[0])
        if n == 0 or any(len(p) != n for p in pts):
            raise ValueError("support points must share a positive length")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, f: Polynomial) -> Support:
        return cls(tuple(f.support()))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def translate(self, v: Sequence[int]) -> Support:
        return Support(tuple(tuple(a + b for a, b in zip(p, v)) for p in self.points))

    def __add__(self, other: Support) -> Support:
        """Minkowski sum of the point sets."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Support(tuple(tuple(a + b for a, b in zip(p, q))
                             for p in self.points for q in other.points))


# ---------------------------------------------------------------------------
# exact integer helpers
# ---------------------------------------------------------------------------

def _det(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _rank_pivots(rows: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a maximal linearly independent subset of ``rows`` (greedy)."""
    basis: list[list[Fraction]] = []
    pivcols: list[int] = []
    chosen = []
    for idx, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for b, pc in zip(basis, pivcols):
            if v[pc] != 0:
                f = v[pc] / b[pc]
                v = [a - f * c for a, c in zip(v, b)]
        nz = next((j for j, a in enumerate(v) if a != 0), None)
        if nz is not None:
            basis.append(v)
            pivcols.append(nz)
            chosen.append(idx)
    return chosen


def _normal(points: Sequence[Sequence[int]]) -> list[int]:
    """Integer normal of the hyperplane through n points of Z^n."""
    q0 = points[0]
    D = [[a - b for a, b in zip(q, q0)] for q in points[1:]]
    n = len(q0)
    return [(-1) ** i * _det([row[:i] + row[i + 1:] for row in D]) for i in range(n)]


# ---------------------------------------------------------------------------
# incremental hull
# ---------------------------------------------------------------------------

class _Hull:
    """Beneath-beyond hull of a full-dimensional integer point set.

    Facets are simplicial (coplanar pieces allowed).  ``nvolume`` is the
    normalized volume n! * Vol accumulated over the placing triangulation.
    """

    def __init__(self, pts: np.ndarray):
        self.pts = pts
        m, n = pts.shape
        self.n = n
        big = int(np.abs(pts).max()) if pts.size else 0
        bound = math.factorial(n) * (2 * big + 1) ** (n - 1) * n * (big + 1) * 4
        self.dtype = np.int64 if bound < 2 ** 62 else object
        self.simplices: list[tuple[int, ...]] = []
        self.nvolume = 0
        rows = [tuple(int(v) for v in p) for p in pts]
        diffs = [[a - b for a, b in zip(r, rows[0])] for r in rows]
        init = [0] + _rank_pivots(diffs)
        if len(init) != n + 1:
            raise ValueError("point set is not full-dimensional")
        self.interior = [sum(rows[i][k] for i in init) for k in range(n)]  # (n+1) * centroid
        cap = 64
        self.normals = np.zeros((cap, n), dtype=self.dtype)
        self.offsets = np.zeros(cap, dtype=self.dtype)
        self.alive = np.zeros(cap, dtype=bool)
        self.fverts: list[tuple[int, ...] | None] = []
        self.ridges: dict[frozenset, set[int]] = {}
        self.nvolume = abs(_det([diffs[i] for i in init[1:]]))
        self.simplices.append(tuple(init))
        for drop in range(n + 1):
            self._add_facet(tuple(v for k, v in enumerate(init) if k != drop))
        chosen = set(init)
        for i in range(m):
            if i not in chosen:
                self.insert(i)

    def _add_facet(self, verts: tuple[int, ...]) -> int:
        rows = [tuple(int(v) for v in self.pts[i]) for i in verts]
        a = _normal(rows)
        b = sum(x * y for x, y in zip(a, rows[0]))
        side = sum(x * y for x, y in zip(a, self.interior)) - (self.n + 1) * b
        if side > 0:
            a = [-x for x in a]
            b = -b
        fid = len(self.fverts)
        if fid == len(self.offsets):
            grow = len(self.offsets)
            self.normals = np.concatenate([self.normals, np.zeros((grow, self.n), dtype=self.dtype)])
            self.offsets = np.concatenate([self.offsets, np.zeros(grow, dtype=self.dtype)])
            self.alive = np.concatenate([self.alive, np.zeros(grow, dtype=bool)])
        self.normals[fid] = a
        self.offsets[fid] = b
        self.alive[fid] = True
        self.fverts.append(verts)
        for k in range(len(verts)):
            self.ridges.setdefault(frozenset(verts[:k] + verts[k + 1:]), set()).add(fid)
        return fid

    def _drop_facet(self, fid: int) -> None:
        verts = self.fverts[fid]
        self.alive[fid] = False
        for k in range(len(verts)):
            key = frozenset(verts[:k] + verts[k + 1:])
            owners = self.ridges[key]
            owners.discard(fid)
            if not owners:
                del self.ridges[key]
        self.fverts[fid] = None

    def insert(self, i: int) -> None:
        p = self.pts[i].astype(self.dtype)
        nf = len(self.fverts)
        height = self.normals[:nf] @ p - self.offsets[:nf]
        visible = np.nonzero(self.alive[:nf] & (height > 0))[0]
        if visible.size == 0:
            return
        vis = set(int(f) for f in visible)
        horizon = []
        for f in vis:
            verts = self.fverts[f]
            self.nvolume += int(height[f])
            self.simplices.append(verts + (i,))
            for k in range(len(verts)):
                ridge = verts[:k] + verts[k + 1:]
                if any(g not in vis for g in self.ridges[frozenset(ridge)]):
                    horizon.append(ridge)
        for f in vis:
            self._drop_facet(f)
        for ridge in horizon:
            self._add_facet(ridge + (i,))

    def facets(self):
        return [(v, self.normals[f]) for f, v in enumerate(self.fverts) if v is not None]

    def vertex_indices(self) -> list[int]:
        incident: dict[int, list] = {}
        for verts, a in self.facets():
            for v in verts:
                incident.setdefault(v, []).append([int(x) for x in a])
        out = []
        for v, normals in incident.items():
            uniq = list({tuple(a) for a in normals})
            if len(uniq) >= self.n and len(_rank_pivots(uniq)) == self.n:
                out.append(v)
        return sorted(out)


def _affine_frame(points: Sequence[Point]):
    """Affine dimension of ``points`` and coordinates that embed their span."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points]
    rows = _rank_pivots(diffs)
    k = len(rows)
    if k == 0:
        return 0, []
    # coordinate axes on which the span projects injectively
    cols = _rank_pivots([list(c) for c in zip(*[diffs[r] for r in rows])])
    return k, cols


# ---------------------------------------------------------------------------
# polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolytope:
    """Convex hull of a support.

    ``simplices`` index into ``vertices`` and triangulate the hull when it is
    full-dimensional; lower-dimensional hulls have ``volume == 0`` and no
    simplices.
    """

    dim: int
    vertices: tuple[Point, ...]
    simplices: tuple[tuple[int, ...], ...] = field(repr=False)
    normalized_volume: int
    affine_dim: int

    @property
    def volume(self) -> Fraction:
        return Fraction(self.normalized_volume, math.factorial(self.dim))

    @property
    def is_degenerate(self) -> bool:
        return self.affine_dim < self.dim


def _hull_vertices(points: Sequence[Point]) -> tuple[list[Point], int, int]:
    """(vertices, affine dimension, normalized volume) of conv(points)."""
    points = sorted(set(points))
    n = len(points[0])
    if n > MAX_HULL_DIM:
        raise ValueError(f"dimension {n} exceeds the hull cap of {MAX_HULL_DIM}")
    k, cols = _affine_frame(points)
    if k == 0:
        return [points[0]], 0, 0
    if k == 1:
        proj = [(p[cols[0]], p) for p in points]
        return [min(proj)[1], max(proj)[1]], 1, (0 if n > 1 else max(proj)[0] - min(proj)[0])
    arr = np.array([[p[c] for c in cols] for p in points], dtype=np.int64)
    hull = _Hull(arr)
    verts = [points[i] for i in hull.vertex_indices()]
    return verts, k, (hull.nvolume if k == n else 0)


def convex_hull(A: Support | Iterable[Sequence[int]]) -> NewtonPolytope:
    """Exact vertices and a triangulation of conv(A)."""
    if not isinstance(A, Support):
        A = Support(tuple(tuple(p) for p in A))
    verts, k, nvol = _hull_vertices(A.points)
    verts = sorted(verts)
    simplices: tuple = ()
    if k == A.dim and k >= 2:
        hull = _Hull(np.array(verts, dtype=np.int64))
        simplices = tuple(tuple(sorted(s)) for s in hull.simplices)
        nvol = hull.nvolume
    elif k == A.dim == 1:
        simplices = ((0, 1),)
    return NewtonPolytope(A.dim, tuple(verts), simplices, nvol, k)


def simplex_normalized_volume(vertices: Sequence[Point]) -> int:
    v0 = vertices[0]
    return abs(_det([[a - b for a, b in zip(v, v0)] for v in vertices[1:]]))


def volume(P: NewtonPolytope | Support) -> Fraction:
    """Euclidean volume Vol(P)."""
    if isinstance(P, Support):
        P = convex_hull(P)
    return P.volume


def normalized_volume(A: Support | NewtonPolytope) -> int:
    """vol(A) = n! * Vol(conv A), an integer for lattice polytopes."""
    if isinstance(A, NewtonPolytope):
        return A.normalized_volume
    if not isinstance(A, Support):
        A = Support(tuple(tuple(p) for p in A))
    return _hull_vertices(A.points)[2]


def minkowski_sum(P: NewtonPolytope, Q: NewtonPolytope) -> NewtonPolytope:
    """Hull of the pairwise vertex sums."""
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    sums = {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    return convex_hull(Support(tuple(sums)))


def mixed_volume(supports: Sequence[Support | Iterable[Sequence[int]]]) -> int:
    """MV(A_1, ..., A_n), normalized so that MV(A, ..., A) = vol(A).

    Inclusion-exclusion over the 2^n - 1 partial Minkowski sums:
    MV = sum_S (-1)^(n - |S|) Vol(sum_{i in S} conv A_i).
    """
    sups = [s if isinstance(s, Support) else Support(tuple(tuple(p) for p in s))
            for s in supports]
    n = len(sups)
    if n == 0 or any(s.dim != n for s in sups):
        raise ValueError("mixed_volume needs n supports in dimension n")
    if n > MAX_MV_DIM:
        raise ValueError(f"inclusion-exclusion mixed volume is capped at n = {MAX_MV_DIM}")
    if n == 1:
        pts = [p[0] for p in sups[0].points]
        return max(pts) - min(pts)
    verts: dict[tuple[int, ...], list[Point]] = {}
    nvols: dict[tuple[int, ...], int] = {}
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            if size == 1:
                pts = list(sups[S[0]].points)
            else:
                head, last = verts[S[:-1]], verts[(S[-1],)]
                pts = list({tuple(a + b for a, b in zip(p, q)) for p in head for q in last})
            v, _, nv = _hull_vertices(pts)
            verts[S] = v
            nvols[S] = nv
    total = sum((-1) ** (n - len(S)) * nv for S, nv in nvols.items())
    mv = Fraction(total, math.factorial(n))
    if mv.denominator != 1 or mv < 0:
        raise ArithmeticError(f"mixed volume came out as {mv}")
    return int(mv)


def mixed_volume_2d(A1, A2) -> int:
    """Vol(A1 + A2) - Vol(A1) - Vol(A2), the planar formula."""
    A1 = A1 if isinstance(A1, Support) else Support(tuple(map(tuple, A1)))
    A2 = A2 if isinstance(A2, Support) else Support(tuple(map(tuple, A2)))
    if A1.dim != 2 or A2.dim != 2:
        raise ValueError("planar formula needs 2-dimensional supports")
    mv = volume(A1 + A2) - volume(A1) - volume(A2)
    return int(mv)


# ---------------------------------------------------------------------------
# root counts
# ---------------------------------------------------------------------------

def bezout_bound(degrees: Sequence[int]) -> int:
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    return math.prod(degrees)


@dataclass
class RootCountReport:
    bezout: int
    kushnirenko: int | None = None
    bkk: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"bezout": self.bezout, "kushnirenko": self.kushnirenko,
                "bkk": self.bkk, "notes": list(self.notes)}


def count_report(F: PolySystem) -> RootCountReport:
    """All root counts that apply to ``F``.

    Kushnirenko is reported only when every equation has the same support;
    BKK needs a square system with n <= 4.  Both count solutions in the torus.
    """
    if any(p.is_zero() for p in F.polys):
        raise ValueError("system contains the zero polynomial")
    degrees = [max(d, 1) for d in F.degrees]
    report = RootCountReport(bezout=bezout_bound(degrees))
    if not F.is_square():
        report.notes.append(f"not square ({len(F)} equations, {F.nvars} unknowns): "
                            "only the Bezout product is reported")
        return report
    sups = [Support.of(p) for p in F.polys]
    origin = (0,) * F.nvars
    if all(s == sups[0] for s in sups):
        report.kushnirenko = normalized_volume(sups[0])
    if F.nvars <= MAX_MV_DIM:
        report.bkk = mixed_volume(sups)
    else:
        report.notes.append(f"BKK skipped: n = {F.nvars} exceeds {MAX_MV_DIM}")
    report.notes.append("Kushnirenko and BKK count isolated solutions in the torus (C*)^n")
    if all(origin in s for s in sups):
        report.notes.append("0 lies in every support, so the torus counts also bound solutions in C^n")
    return report
