"""Dense linear algebra kernels.

Exact row reduction over QQ (``Fraction`` entries), LU solves over CC, and a
complex Hessenberg/shifted-QR eigenvalue solver with eigenvectors obtained by
inverse iteration.  Sizes are small (at most a few hundred), so everything is
plain O(n^3) numpy with Python loops over columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

EPS = np.finfo(float).eps


class SingularMatrixError(ArithmeticError):
    pass


class EigenConvergenceError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# LU
# ---------------------------------------------------------------------------

def lu_factor(A, check: bool = True, rtol: float = 1e3 * EPS):
    """Partial-pivoting LU of a square matrix, packed LAPACK-style.

    Returns ``(lu, piv)`` where ``piv[k]`` is the row swapped with ``k`` at
    step ``k``.  With ``check`` a pivot below ``rtol * max|A|`` raises
    :class:`SingularMatrixError`; without it tiny pivots are nudged so the
    factorization always completes (inverse iteration relies on that).
    """
    lu = np.array(A, dtype=complex)
    n, m = lu.shape
    if n != m:
        raise ValueError("lu_factor needs a square matrix")
    scale = np.abs(lu).max() if lu.size else 0.0
    if scale == 0.0:
        if check:
            raise SingularMatrixError("zero matrix")
        scale = 1.0
    piv = np.zeros(n, dtype=int)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        piv[k] = p
        if p != k:
            lu[[k, p]] = lu[[p, k]]
        pivot = lu[k, k]
        if abs(pivot) <= rtol * scale:
            if check:
                raise SingularMatrixError(f"pivot {abs(pivot):.3e} at column {k} below tolerance")
            lu[k, k] = pivot = (EPS * scale) if pivot == 0 else pivot
        if k + 1 < n:
            lu[k + 1:, k] /= pivot
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve_factored(factors, b) -> np.ndarray:
    """Solve with a factorization from :func:`lu_factor`; ``b`` may be a matrix."""
    lu, piv = factors
    b = np.asarray(b)
    x = np.array(b, dtype=complex).reshape(b.shape[0], -1)
    n = lu.shape[0]
    for k in range(n):
        p = piv[k]
        if p != k:
            x[[k, p]] = x[[p, k]]
    for k in range(n):
        x[k + 1:] -= lu[k + 1:, k, None] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        x[:k] -= lu[:k, k, None] * x[k]
    return x.reshape(b.shape)


def lu_inverse_abs_apply(factors, v) -> np.ndarray:
    """|A^-1| @ v for nonnegative v (componentwise error propagation)."""
    n = factors[0].shape[0]
    return np.abs(lu_solve_factored(factors, np.eye(n))) @ v


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by LU with partial pivoting."""
    return lu_solve_factored(lu_factor(A), b)


# ---------------------------------------------------------------------------
# exact row reduction
# ---------------------------------------------------------------------------

def rational_rref(A: Sequence[Sequence], column_order: Sequence[int] | None = None):
    """Exact reduced row echelon form over QQ.

    Columns are scanned for pivots in ``column_order`` (default: left to
    right), so earlier columns are preferred as pivots.  The result keeps the
    input's column layout.  Returns ``(R, pivots)``: ``R`` is a list of rows,
    nonzero rows first, and ``pivots[i]`` is the pivot column of row ``i``.
    """
    rows = [[Fraction(v) for v in r] for r in A]
    if not rows:
        return [], []
    ncols = len(rows[0])
    order = list(range(ncols)) if column_order is None else list(column_order)
    if sorted(order) != list(range(ncols)):
        raise ValueError("column_order must be a permutation of the columns")
    pivots: list[int] = []
    r = 0
    for col in order:
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = 1 / pr[col]
        nz = [j for j in range(ncols) if pr[j] != 0]
        for j in nz:
            pr[j] *= inv
        for i in range(len(rows)):
            if i != r:
                f = rows[i][col]
                if f != 0:
                    ri = rows[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(col)
        r += 1
    return rows, pivots


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------

@dataclass
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray  # columns, unit 2-norm
    residuals: np.ndarray  # ||A v - lambda v|| / ||A||_F

    def accepted(self, tol: float = 1e-10) -> np.ndarray:
        return self.residuals <= tol


def balance(A: np.ndarray, radix: float = 2.0, max_sweeps: int = 100):
    """Diagonal similarity ``D^-1 A D`` equalizing row and column norms.

    Returns ``(B, d)`` with ``d`` the diagonal of ``D``.  Powers of the radix
    keep the scaling exact.
    """
    B = np.array(A, dtype=complex)
    n = B.shape[0]
    d = np.ones(n)
    for _ in range(max_sweeps):
        converged = True
        for i in range(n):
            off = np.arange(n) != i
            c = np.abs(B[off, i]).sum()
            r = np.abs(B[i, off]).sum()
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c >= g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                d[i] *= f
                B[i, :] /= f
                B[:, i] *= f
        if converged:
            break
    return B, d


def hessenberg(A: np.ndarray) -> np.ndarray:
    """Upper Hessenberg form by Householder reflections (similarity)."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    half = (a - d) / 2.0
    disc = np.sqrt(half * half + b * c)
    mu1 = d - b * c / (half + disc) if half + disc != 0 else d
    mu2 = d - b * c / (half - disc) if half - disc != 0 else d
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def hessenberg_qr_eigenvalues(H: np.ndarray, deflation_tol: float = 1e-14,
                              max_sweeps: int | None = None) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by shifted QR.

    Wilkinson shifts with an exceptional shift every 10 stalled sweeps; a
    subdiagonal entry is zeroed once it drops below ``deflation_tol`` times
    its two diagonal neighbours.
    """
    H = np.array(H, dtype=complex)
    n = H.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    if max_sweeps is None:
        max_sweeps = 100 * n
    eig = np.zeros(n, dtype=complex)
    norm = np.abs(H).max() or 1.0
    hi = n - 1
    sweeps = 0
    stall = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = H[0, 0]
            break
        lo = 0
        for k in range(hi, 0, -1):
            scale = abs(H[k, k]) + abs(H[k - 1, k - 1])
            if scale == 0.0:
                scale = norm
            if abs(H[k, k - 1]) <= deflation_tol * scale:
                H[k, k - 1] = 0.0
                lo = k
                break
        if lo == hi:
            eig[hi] = H[hi, hi]
            hi -= 1
            stall = 0
            continue
        sweeps += 1
        stall += 1
        if sweeps > max_sweeps:
            raise EigenConvergenceError(
                f"QR iteration did not converge after {max_sweeps} sweeps "
                f"({hi + 1} eigenvalues outstanding)")
        if stall % 10 == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * np.exp(1j * 0.7 * stall)
        else:
            mu = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        blk = H[lo:hi + 1, lo:hi + 1]
        m = hi - lo + 1
        blk[np.arange(m), np.arange(m)] -= mu
        rots = []
        for k in range(m - 1):
            a, b = blk[k, k], blk[k + 1, k]
            r = np.hypot(abs(a), abs(b))
            if r == 0.0:
                c, s = 1.0 + 0j, 0j
            else:
                c, s = a / r, b / r
            rows = blk[k:k + 2, k:].copy()
            blk[k, k:] = np.conj(c) * rows[0] + np.conj(s) * rows[1]
            blk[k + 1, k:] = -s * rows[0] + c * rows[1]
            rots.append((c, s))
        for k, (c, s) in enumerate(rots):
            top = min(k + 2, m - 1) + 1
            cols = blk[:top, k:k + 2].copy()
            blk[:top, k] = cols[:, 0] * c + cols[:, 1] * s
            blk[:top, k + 1] = -cols[:, 0] * np.conj(s) + cols[:, 1] * np.conj(c)
        blk[np.arange(m), np.arange(m)] += mu
        H[lo:hi + 1, lo:hi + 1] = blk
    return eig


def inverse_iteration(A: np.ndarray, lam: complex, rng: np.random.Generator,
                      iterations: int = 3, perturbation: float = 1e-12) -> np.ndarray:
    """Unit eigenvector for ``lam`` from one LU of ``A - (lam + eps) I``."""
    n = A.shape[0]
    scale = max(1.0, np.abs(A).max())
    sigma = lam + perturbation * scale
    factors = lu_factor(A - sigma * np.eye(n), check=False)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iterations):
        v = lu_solve_factored(factors, v)
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            raise EigenConvergenceError("inverse iteration broke down")
        v /= nv
    return v


def eigen(A, *, vectors: bool = True, seed: int = 0,
          deflation_tol: float = 1e-14) -> EigenDecomposition:
    """Eigenvalues (and right eigenvectors) of a dense complex matrix.

    Balancing, Householder reduction to Hessenberg form, shifted QR for the
    eigenvalues, then inverse iteration on the balanced matrix for the
    eigenvectors.  Raises :class:`EigenConvergenceError` rather than
    returning unconverged values.
    """
    A = np.array(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("eigen needs a square matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    n = A.shape[0]
    B, d = balance(A)
    values = hessenberg_qr_eigenvalues(hessenberg(B), deflation_tol=deflation_tol)
    if not vectors:
        return EigenDecomposition(values, np.zeros((n, 0), dtype=complex), np.zeros(0))
    rng = np.random.default_rng(seed)
    V = np.zeros((n, n), dtype=complex)
    res = np.zeros(n)
    normA = np.linalg.norm(A) or 1.0
    for k, lam in enumerate(values):
        v = d * inverse_iteration(B, lam, rng)
        v /= np.linalg.norm(v)
        V[:, k] = v
        res[k] = np.linalg.norm(A @ v - lam * v) / normA
    return EigenDecomposition(values, V, res)
