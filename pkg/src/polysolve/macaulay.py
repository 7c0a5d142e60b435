"""Macaulay matrices, truncated normal forms and the eigenvalue solver.

Pipeline: stack the shifts x^b * f_i up to a truncation degree d, eliminate
with the largest monomials (grlex) as preferred pivots, read off a monomial
basis B of R/I together with normal forms of the border monomials x_k * b,
build multiplication matrices and recover the solutions from the left
eigenvectors of a random linear combination of them.
"""

from __future__ import annotations

import io
import csv
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .linalg import eigen, rational_rref
from .poly import (CC, GRLEX, QQ, Monomial, MonomialOrder, Polynomial, PolySystem,
                   display_key, format_poly, monomials_up_to)
from .solutions import (REAL_TOL, CompiledSystem, SolutionSet, accept, cluster_points,
                        make_solution, newton_refine)

log = logging.getLogger(__name__)


class MacaulayError(ArithmeticError):
    pass


class RankDeficiencyError(MacaulayError):
    """The truncation degree is too low to certify a quotient basis."""


class InconsistentSystemError(MacaulayError):
    """The ideal is the whole ring: no solutions (delta = 0)."""


class TruncationError(MacaulayError):
    """A product g * b falls outside the monomials with known normal forms."""


def _mono_label(m: Monomial, names: Sequence[str]) -> str:
    return format_poly(Polynomial.monomial(m), names)


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class MacaulayMatrix:
    rows: list[tuple[int, Monomial]]
    columns: list[Monomial]
    entries: np.ndarray
    degree: int
    field: str
    names: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def column_index(self) -> dict[Monomial, int]:
        return {m: j for j, m in enumerate(self.columns)}

    def row_labels(self) -> list[str]:
        out = []
        for i, beta in self.rows:
            lab = f"f{i + 1}"
            if any(beta):
                lab = _mono_label(beta, self.names) + "*" + lab
            out.append(lab)
        return out

    def with_columns(self, columns: Sequence[Monomial]) -> MacaulayMatrix:
        idx = self.column_index()
        perm = [idx[m] for m in columns]
        return MacaulayMatrix(self.rows, list(columns), self.entries[:, perm],
                              self.degree, self.field, self.names)

    def to_csv(self) -> str:
        return _matrix_csv(self.row_labels(), [_mono_label(m, self.names) for m in self.columns],
                           self.entries)


@dataclass
class ReducedMatrix:
    """Row-reduced Macaulay matrix; each row is a polynomial of the ideal."""
    polys: list[Polynomial]
    columns: list[Monomial]
    entries: np.ndarray
    names: tuple[str, ...]

    def row_labels(self) -> list[str]:
        return [format_poly(p, self.names) for p in self.polys]

    def to_csv(self) -> str:
        return _matrix_csv(self.row_labels(), [_mono_label(m, self.names) for m in self.columns],
                           self.entries)


def _fmt_entry(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else repr(v)
    return str(v)


def _matrix_csv(row_labels, col_labels, entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(col_labels))
    for lab, row in zip(row_labels, entries):
        w.writerow([lab] + [_fmt_entry(v) for v in row])
    return buf.getvalue()


@dataclass
class QuotientBasis:
    """Monomial basis of R/I plus normal forms of everything it was built with.

    ``table`` maps a monomial to its coefficient vector over ``monomials``
    (object array of Fractions over QQ, complex array over CC).  ``reducer``
    optionally computes normal forms of arbitrary polynomials (a Groebner
    basis provides one); without it only tabulated monomials can be reduced.
    """
    monomials: tuple[Monomial, ...]
    nvars: int
    field: str
    table: dict[Monomial, np.ndarray]
    names: tuple[str, ...] = ()
    reducer: Callable[[Polynomial], np.ndarray] | None = None

    @property
    def delta(self) -> int:
        return len(self.monomials)

    def index(self, m: Monomial) -> int:
        return self.monomials.index(tuple(m))

    def _zero(self) -> np.ndarray:
        if self.field == QQ:
            return np.array([Fraction(0)] * self.delta, dtype=object)
        return np.zeros(self.delta, dtype=complex)

    def normal_form(self, f: Polynomial) -> np.ndarray:
        """Coefficient vector of NF(f) over the basis."""
        if self.reducer is not None:
            return self.reducer(f)
        out = self._zero()
        for m, c in f.terms.items():
            try:
                out = out + c * self.table[m]
            except KeyError:
                raise TruncationError(
                    f"no normal form known for monomial {_mono_label(m, self.names or _names(self.nvars))}"
                ) from None
        return out

    def normal_form_poly(self, f: Polynomial) -> Polynomial:
        v = self.normal_form(f)
        return Polynomial(self.nvars, {m: c for m, c in zip(self.monomials, v) if c != 0},
                          field=self.field)


def _names(n):
    from .poly import default_names
    return default_names(n)


@dataclass
class MultiplicationMatrix:
    g: Polynomial
    basis: QuotientBasis
    matrix: np.ndarray

    def numeric(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)

    def to_csv(self) -> str:
        names = self.basis.names or _names(self.basis.nvars)
        labels = [f"[{_mono_label(m, names)}]" for m in self.basis.monomials]
        return _matrix_csv(labels, labels, self.matrix)


# ---------------------------------------------------------------------------


def companion_matrix(f: Polynomial) -> MultiplicationMatrix:
    """C_f: ones on the subdiagonal, last column -c_i / c_d."""
    if f.nvars != 1:
        raise ValueError("companion_matrix needs a univariate polynomial")
    d = f.degree()
    if d < 1:
        raise ValueError("companion_matrix needs a polynomial of degree >= 1")
    cd = f.coefficient((d,))
    exact = f.field == QQ
    zero = Fraction(0) if exact else 0j
    one = Fraction(1) if exact else 1 + 0j
    C = np.array([[zero] * d for _ in range(d)], dtype=object if exact else complex)
    for i in range(1, d):
        C[i, i - 1] = one
    for i in range(d):
        C[i, d - 1] = -f.coefficient((i,)) / cd
    monos = tuple((i,) for i in range(d))
    table = {}
    for i in range(d):
        e = np.array([zero] * d, dtype=C.dtype)
        e[i] = one
        table[(i,)] = e
    table[(d,)] = C[:, d - 1].copy()
    Q = QuotientBasis(monos, 1, f.field, table, names=("x",))
    return MultiplicationMatrix(Polynomial.variable(0, 1, f.field), Q, C)


def macaulay_bound(F: PolySystem) -> int:
    return sum(d - 1 for d in F.degrees) + 1


def build_macaulay(F: PolySystem, d: int, order: MonomialOrder = GRLEX) -> MacaulayMatrix:
    """Rows x^b * f_i with deg <= d; columns all monomials of degree <= d, largest first."""
    if not F.polys:
        raise ValueError("empty system")
    if d < max(F.degrees):
        raise ValueError(f"truncation degree {d} below the largest degree {max(F.degrees)}")
    n = F.nvars
    cols = sorted(monomials_up_to(n, d), key=order.key, reverse=True)
    idx = {m: j for j, m in enumerate(cols)}
    rows: list[tuple[int, Monomial]] = []
    for i, f in enumerate(F.polys):
        if f.is_zero():
            continue
        for beta in monomials_up_to(n, d - f.degree()):
            rows.append((i, beta))
    exact = F.field == QQ
    if exact:
        M = np.empty((len(rows), len(cols)), dtype=object)
        M.fill(Fraction(0))
    else:
        M = np.zeros((len(rows), len(cols)), dtype=complex)
    for r, (i, beta) in enumerate(rows):
        for m, c in F.polys[i].terms.items():
            M[r, idx[_add(m, beta)]] = c
    return MacaulayMatrix(rows, cols, M, d, F.field, F.names)


# ---------------------------------------------------------------------------
# basis selection


def _select_from_pivots(columns: list[Monomial], pivots: set[int], d: int):
    """Basis = non-pivot monomials below the first degree that has none."""
    nonpiv = [j for j in range(len(columns)) if j not in pivots]
    if not nonpiv or all(any(columns[j]) for j in nonpiv):
        raise InconsistentSystemError("1 lies in the ideal: the system has no solutions")
    degs = {sum(columns[j]) for j in nonpiv}
    gap = next((e for e in range(1, d + 1) if e not in degs), None)
    if gap is None:
        raise RankDeficiencyError(f"no degree gap among the non-pivot monomials at d={d}")
    basis = sorted((columns[j] for j in nonpiv if sum(columns[j]) < gap), key=display_key)
    return basis, gap


def _border(basis, n):
    out = set()
    for b in basis:
        for k in range(n):
            out.add(tuple(e + (i == k) for i, e in enumerate(b)))
    return out


def _reduced_layout(columns, pivots, basis):
    piv_cols = [columns[j] for j in sorted(pivots)]
    bset = set(basis)
    junk = [m for j, m in enumerate(columns) if j not in pivots and m not in bset]
    return piv_cols + junk + list(basis)


def _reduce_exact(M: MacaulayMatrix):
    R, pivots = rational_rref(M.entries.tolist())
    pset = set(pivots)
    basis, gap = _select_from_pivots(M.columns, pset, M.degree)
    n = len(M.columns[0])
    col = M.column_index()
    bcols = [col[b] for b in basis]
    delta = len(basis)
    table: dict[Monomial, np.ndarray] = {}
    for k, b in enumerate(basis):
        e = np.array([Fraction(0)] * delta, dtype=object)
        e[k] = Fraction(1)
        table[b] = e
    for r, p in enumerate(pivots):
        m = M.columns[p]
        if sum(m) <= gap:
            table[m] = np.array([-R[r][j] for j in bcols], dtype=object)
    layout = _reduced_layout(M.columns, pset, basis)
    perm = [col[m] for m in layout]
    rows = [R[r] for r in range(len(pivots))]
    E = np.array([[row[j] for j in perm] for row in rows], dtype=object).reshape(len(rows), len(perm))
    polys = [Polynomial(n, {M.columns[j]: v for j, v in enumerate(row) if v != 0}) for row in rows]
    Q = QuotientBasis(tuple(basis), n, QQ, table, names=M.names)
    return Q, ReducedMatrix(polys, layout, E, M.names)


def _greedy_columns(A: np.ndarray, rtol: float) -> list[int]:
    """Left-to-right greedy choice of linearly independent columns.

    A column joins when its component orthogonal to the columns chosen so
    far exceeds ``rtol * ||A||_F`` (two passes of Gram-Schmidt).
    """
    tol = rtol * (np.linalg.norm(A) or 1.0)
    Q = np.zeros((A.shape[0], 0), dtype=complex)
    chosen = []
    for j in range(A.shape[1]):
        v = A[:, j].astype(complex)
        for _ in range(2):
            v = v - Q @ (Q.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv > tol:
            chosen.append(j)
            Q = np.column_stack([Q, v / nv])
            if Q.shape[1] == A.shape[0]:
                break
    return chosen


def _reduce_numeric(M: MacaulayMatrix, rtol: float = 1e-10):
    A = np.array(M.entries, dtype=complex)
    pivots = _greedy_columns(A, rtol)
    pset = set(pivots)
    basis, gap = _select_from_pivots(M.columns, pset, M.degree)
    n = len(M.columns[0])
    col = M.column_index()
    bcols = [col[b] for b in basis]
    bset = set(basis)
    other = [j for j in range(len(M.columns)) if M.columns[j] not in bset]
    delta = len(basis)
    # NF(m) = -y^T A_B where y^T A_E = e_m^T over the non-basis columns E
    targets = [col[m] for m in sorted(_border(basis, n) - bset, key=display_key)]
    AE = A[:, other]
    pos = {j: i for i, j in enumerate(other)}
    rhs = np.zeros((len(other), len(targets)), dtype=complex)
    for t, j in enumerate(targets):
        rhs[pos[j], t] = 1.0
    Y, *_ = np.linalg.lstsq(AE.T, rhs, rcond=None)
    err = np.linalg.norm(AE.T @ Y - rhs, axis=0)
    if len(targets) and err.max() > 1e-6:
        raise RankDeficiencyError(f"border normal forms not determined at d={M.degree} "
                                  f"(residual {err.max():.2e})")
    NF = -(A[:, bcols].T @ Y)
    table: dict[Monomial, np.ndarray] = {}
    for k, b in enumerate(basis):
        e = np.zeros(delta, dtype=complex)
        e[k] = 1.0
        table[b] = e
    for t, j in enumerate(targets):
        table[M.columns[j]] = NF[:, t]
    # reduced rows: rows of [I | ... | -NF] in the printed layout
    layout = _reduced_layout(M.columns, pset, basis)
    lpos = {m: i for i, m in enumerate(layout)}
    E = np.zeros((len(targets), len(layout)), dtype=complex)
    polys = []
    for t, j in enumerate(targets):
        m = M.columns[j]
        E[t, lpos[m]] = 1.0
        terms = {m: 1.0 + 0j}
        for k, b in enumerate(basis):
            E[t, lpos[b]] = -NF[k, t]
            if NF[k, t] != 0:
                terms[b] = complex(-NF[k, t])
        polys.append(Polynomial(n, terms, field=CC))
    Q = QuotientBasis(tuple(basis), n, CC, table, names=M.names)
    return Q, ReducedMatrix(polys, layout, E, M.names)


def reduce_and_select_basis(M: MacaulayMatrix, rtol: float = 1e-10):
    """Eliminate ``M`` and read off ``(QuotientBasis, ReducedMatrix)``.

    Exact Gauss-Jordan over QQ, greedy orthogonal column selection over CC.
    Raises :class:`InconsistentSystemError` when 1 is a pivot and
    :class:`RankDeficiencyError` when no basis can be certified at this
    truncation degree.
    """
    if M.field == QQ:
        return _reduce_exact(M)
    return _reduce_numeric(M, rtol)


# ---------------------------------------------------------------------------


def multiplication_matrix(Q: QuotientBasis, g: Polynomial) -> MultiplicationMatrix:
    """Column i holds the normal-form coefficients of g * b_i."""
    if g.nvars != Q.nvars:
        raise ValueError("multiplier lives in a different ring")
    if Q.field == CC and g.field == QQ:
        g = g.to_complex()
    elif Q.field == QQ and g.field == CC:
        raise TypeError("complex multiplier for an exact quotient basis")
    cols = [Q.normal_form(g.mul_monomial(b)) for b in Q.monomials]
    dtype = object if Q.field == QQ else complex
    mat = np.array(cols, dtype=dtype).reshape(Q.delta, Q.delta).T.copy()
    return MultiplicationMatrix(g, Q, mat)


def coordinate_matrices(Q: QuotientBasis) -> list[np.ndarray]:
    return [multiplication_matrix(Q, Polynomial.variable(k, Q.nvars, Q.field)).matrix
            for k in range(Q.nvars)]


def _poly_of_matrices(f: Polynomial, Ms: list[np.ndarray], v: np.ndarray) -> np.ndarray:
    """f(M_1, ..., M_n) applied to v, for commuting M_k."""
    out = None
    for m, c in f.terms.items():
        w = v
        for k, e in enumerate(m):
            for _ in range(e):
                w = Ms[k].dot(w)
        w = c * w
        out = w if out is None else out + w
    return out


def certify(Q: QuotientBasis, F: PolySystem, tol: float = 1e-8) -> None:
    """Check that Q describes R/<F>: commuting M_k and NF(f_i) = 0.

    Raises :class:`RankDeficiencyError` otherwise.
    """
    Ms = coordinate_matrices(Q)
    exact = Q.field == QQ
    if 0 not in [sum(b) for b in Q.monomials]:
        raise RankDeficiencyError("basis lacks the monomial 1")
    one = Q.table[(0,) * Q.nvars]
    scale = max([float(np.abs(np.array(M, dtype=complex)).max()) for M in Ms] + [1.0])
    for a in range(len(Ms)):
        for b in range(a + 1, len(Ms)):
            C = Ms[a].dot(Ms[b]) - Ms[b].dot(Ms[a])
            if exact:
                bad = any(v != 0 for v in C.flat)
            else:
                bad = np.linalg.norm(C) > tol * scale * scale
            if bad:
                raise RankDeficiencyError("multiplication matrices do not commute")
    Fq = F if exact or F.field == CC else F.to_complex()
    for f in Fq.polys:
        r = _poly_of_matrices(f, Ms, one)
        if exact:
            bad = any(v != 0 for v in r)
        else:
            size = sum(abs(c) for c in f.terms.values()) * scale ** max(f.degree(), 0)
            bad = np.linalg.norm(r) > tol * max(size, 1.0)
        if bad:
            raise RankDeficiencyError("a generator does not reduce to zero")


@dataclass
class EigenConfig:
    seed: int = 0
    tol: float = 1e-8
    real_tol: float = REAL_TOL
    exact: bool | None = None  # None: exact iff the input is over QQ
    degree: int | None = None
    max_escalation: int = 3
    cluster_tol: float = 1e-6


@dataclass
class EigenResult:
    solutions: SolutionSet
    basis: QuotientBasis
    macaulay: MacaulayMatrix | None = None
    reduced: ReducedMatrix | None = None
    matrices: list[np.ndarray] = field(default_factory=list)


def quotient_from_macaulay(F: PolySystem, cfg: EigenConfig | None = None):
    """Escalate the truncation degree until a basis is certified.

    Returns ``(Q, M, reduced)``.
    """
    cfg = cfg or EigenConfig()
    exact = (F.field == QQ) if cfg.exact is None else cfg.exact
    if exact and F.field != QQ:
        raise TypeError("exact elimination needs rational coefficients")
    G = F if exact or F.field == CC else F.to_complex()
    d0 = cfg.degree if cfg.degree is not None else max(macaulay_bound(F), max(F.degrees))
    last: Exception | None = None
    for d in range(d0, d0 + cfg.max_escalation + 1):
        M = build_macaulay(G, d)
        try:
            Q, R = reduce_and_select_basis(M)
            certify(Q, G)
        except RankDeficiencyError as exc:
            log.info("truncation degree %d rejected: %s", d, exc)
            last = exc
            continue
        return Q, M, R
    raise RankDeficiencyError(f"no certified basis up to degree {d0 + cfg.max_escalation}: {last}")


def solutions_from_quotient(F: PolySystem, Q: QuotientBasis, cfg: EigenConfig,
                            provenance: str = "eigen"):
    """Left eigenvectors of a random M_h give the evaluation vectors of the roots."""
    n = Q.nvars
    names = F.names
    Ms = [np.array(M, dtype=complex) for M in coordinate_matrices(Q)]
    rng = np.random.default_rng(cfg.seed)
    lam = rng.uniform(-1.0, 1.0, n)
    Mh = sum(l * M for l, M in zip(lam, Ms))
    dec = eigen(Mh.T, seed=cfg.seed)
    diags: list[str] = []
    groups = cluster_points([np.array([v]) for v in dec.values],
                            cfg.cluster_tol * max(1.0, float(np.abs(dec.values).max(initial=0.0))))
    if any(len(g) > 1 for g in groups):
        diags.append(f"clustered eigenvalues of M_h ({sum(len(g) for g in groups if len(g) > 1)} "
                     "values): input may be non-radical")
    i1 = Q.index((0,) * n)
    direct = [Q.monomials.index(tuple(int(i == k) for i in range(n)))
              if tuple(int(i == k) for i in range(n)) in Q.monomials else None for k in range(n)]
    compiled = CompiledSystem(F)
    sols = []
    for j in range(len(dec.values)):
        w = dec.vectors[:, j]
        if abs(w[i1]) <= 1e-10 * np.linalg.norm(w):
            diags.append(f"eigenvector {j} vanishes at monomial 1; skipped")
            continue
        w = w / w[i1]
        if all(k is not None for k in direct):
            z = np.array([w[k] for k in direct])
        else:
            v = w.conj()
            den = w @ v
            z = np.array([(w @ M @ v) / den for M in Ms])
        z, _ = newton_refine(compiled, z)
        s = make_solution(compiled, z, provenance, cfg.real_tol)
        if not accept(compiled, s, cfg.tol):
            diags.append(f"eigen root {j} rejected: residual {s.residual:.2e}")
            continue
        sols.append(s)
    if len(sols) < Q.delta:
        log.warning("%d of %d eigenvalues did not yield verified roots", Q.delta - len(sols), Q.delta)
    return SolutionSet(sols, names, diags, {"delta": Q.delta, "lambda": lam.tolist()})


def solve_eigen(F: PolySystem, cfg: EigenConfig | None = None, *, full: bool = False):
    """Solve a zero-dimensional system with the Macaulay/eigenvalue method."""
    cfg = cfg or EigenConfig()
    Q, M, R = quotient_from_macaulay(F, cfg)
    out = solutions_from_quotient(F, Q, cfg)
    out.stats["degree"] = M.degree
    if full:
        return EigenResult(out, Q, M, R, coordinate_matrices(Q))
    return out
