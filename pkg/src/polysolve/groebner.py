"""Multivariate division and Buchberger's algorithm over QQ.

Internally a polynomial is a dict ``monomial -> Fraction``.  Reduction keeps
a heap of pending monomials keyed by the monomial order, so each step only
touches the terms it changes.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .poly import (GREVLEX, QQ, Monomial, MonomialOrder, Polynomial, PolySystem,
                   display_key)

PAIR_CAP = 100_000


class ResourceCapError(RuntimeError):
    pass


class InfiniteQuotientError(ValueError):
    pass


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class _GPoly:
    """Basis element: monic, terms sorted by decreasing order key."""
    __slots__ = ("lm", "tail", "terms")

    def __init__(self, terms: dict, key):
        lm = max(terms, key=key)
        inv = 1 / terms[lm]
        self.terms = {m: c * inv for m, c in terms.items()}
        self.lm = lm
        self.tail = [(m, c) for m, c in self.terms.items() if m != lm]


def _exact_terms(f: Polynomial) -> dict:
    if f.field != QQ:
        raise TypeError("Groebner computations need exact rational coefficients")
    return {m: Fraction(c) for m, c in f.terms.items()}


def _reduce(p: dict, G: Sequence[_GPoly], key, full: bool = True) -> dict:
    """Remainder of ``p`` modulo ``G`` (first divisor in list order wins).

    With ``full=False`` stops as soon as the leading term is irreducible.
    """
    p = dict(p)
    heap = [(_neg(key(m)), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.pop(m, 0)
        if c == 0:
            continue
        g = next((g for g in G if _divides(g.lm, m)), None)
        if g is None:
            rem[m] = c
            if not full:
                rem.update({mm: cc for mm, cc in p.items() if cc != 0})
                return rem
            continue
        q = _sub(m, g.lm)
        for mm, cc in g.tail:
            t = _add(mm, q)
            v = p.get(t, 0) - c * cc
            if v == 0:
                p.pop(t, None)
            else:
                p[t] = v
                if t not in queued:
                    queued.add(t)
                    heapq.heappush(heap, (_neg(key(t)), t))
    return rem


def _neg(k: tuple):
    # order keys are tuples of ints or nested int tuples; flatten and negate
    out = []
    for x in k:
        if isinstance(x, tuple):
            out.extend(-y for y in x)
        else:
            out.append(-x)
    return tuple(out)


@dataclass
class DivisionResult:
    quotients: list[Polynomial]
    remainder: Polynomial


def divide(g: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> DivisionResult:
    """Multivariate division: g = sum q_i f_i + r, no term of r divisible by any LT(f_i)."""
    n = g.nvars
    p = _exact_terms(g)
    fs = []
    for f in divisors:
        if f.nvars != n:
            raise ValueError("divisor lives in a different ring")
        t = _exact_terms(f)
        if not t:
            raise ZeroDivisionError("division by the zero polynomial")
        lm = max(t, key=order.key)
        fs.append((lm, t[lm], t))
    quot = [dict() for _ in fs]
    rem = {}
    while p:
        m = max(p, key=order.key)
        c = p[m]
        for i, (lm, lc, t) in enumerate(fs):
            if _divides(lm, m):
                q = _sub(m, lm)
                a = c / lc
                quot[i][q] = quot[i].get(q, 0) + a
                for mm, cc in t.items():
                    s = _add(mm, q)
                    v = p.get(s, 0) - a * cc
                    if v == 0:
                        p.pop(s, None)
                    else:
                        p[s] = v
                break
        else:
            rem[m] = c
            del p[m]
    return DivisionResult([Polynomial(n, q) for q in quot], Polynomial(n, rem))


@dataclass
class GroebnerBasis:
    order: MonomialOrder
    generators: list[Polynomial]
    nvars: int
    names: tuple[str, ...] = ()
    reduced: bool = True
    stats: dict | None = None

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def _gpolys(self) -> list[_GPoly]:
        return [_GPoly(_exact_terms(g), self.order.key) for g in self.generators]

    def normal_form(self, f: Polynomial) -> Polynomial:
        return groebner_normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    a = _GPoly(_exact_terms(f), order.key)
    b = _GPoly(_exact_terms(g), order.key)
    return Polynomial(f.nvars, _spoly(a, b))


def _spoly(a: _GPoly, b: _GPoly) -> dict:
    L = _lcm(a.lm, b.lm)
    qa, qb = _sub(L, a.lm), _sub(L, b.lm)
    out: dict = {}
    for m, c in a.tail:
        out[_add(m, qa)] = c
    for m, c in b.tail:
        t = _add(m, qb)
        v = out.get(t, 0) - c
        if v == 0:
            out.pop(t, None)
        else:
            out[t] = v
    return out


def buchberger(F: PolySystem | Sequence[Polynomial], order: MonomialOrder = GREVLEX,
               pair_cap: int = PAIR_CAP) -> GroebnerBasis:
    """Reduced Groebner basis (normal selection, Gebauer-Moeller criteria)."""
    polys = list(F.polys if isinstance(F, PolySystem) else F)
    names = F.names if isinstance(F, PolySystem) else ()
    if not polys:
        raise ValueError("empty generator list")
    n = polys[0].nvars
    key = order.key
    basis: list[_GPoly] = []
    active: list[int] = []
    pairs: list = []  # heap of (key(lcm), tie, i, j)
    counter = 0
    processed = 0
    zero_reductions = 0

    def update(h: int):
        nonlocal pairs, active, counter
        H = basis[h]
        C = [(g, _lcm(basis[g].lm, H.lm)) for g in active]
        D = []
        while C:
            g1, L1 = C.pop()
            if _coprime(basis[g1].lm, H.lm) or not (
                    any(_divides(L2, L1) for _, L2 in C) or any(_divides(L2, L1) for _, L2 in D)):
                D.append((g1, L1))
        E = [(g, L) for g, L in D if not _coprime(basis[g].lm, H.lm)]
        kept = []
        for item in pairs:
            _, _, i, j, L = item
            if (_divides(H.lm, L) and _lcm(basis[i].lm, H.lm) != L
                    and _lcm(basis[j].lm, H.lm) != L):
                continue
            kept.append(item)
        for g, L in E:
            counter += 1
            kept.append((key(L), counter, g, h, L))
        heapq.heapify(kept)
        if len(kept) > pair_cap:
            raise ResourceCapError(f"pair queue exceeded {pair_cap}")
        pairs = kept
        active = [g for g in active if not _divides(H.lm, basis[g].lm)] + [h]

    def add(terms: dict):
        basis.append(_GPoly(terms, key))
        update(len(basis) - 1)

    for f in polys:
        r = _reduce(_exact_terms(f), [basis[i] for i in active], key)
        if r:
            add(r)
    while pairs:
        _, _, i, j, _L = heapq.heappop(pairs)
        processed += 1
        if processed > pair_cap:
            raise ResourceCapError(f"more than {pair_cap} S-pairs processed")
        r = _reduce(_spoly(basis[i], basis[j]), [basis[k] for k in active], key)
        if r:
            add(r)
        else:
            zero_reductions += 1
    # interreduce the minimal basis
    G = sorted((basis[i] for i in active), key=lambda g: key(g.lm))
    out = []
    for idx, g in enumerate(G):
        others = G[:idx] + G[idx + 1:]
        tail = _reduce(dict(g.tail), others, key)
        tail[g.lm] = Fraction(1)
        out.append(Polynomial(n, tail))
    stats = {"pairs": processed, "zero_reductions": zero_reductions, "elements": len(basis)}
    return GroebnerBasis(order, out, n, names, True, stats)


def groebner_normal_form(g: Polynomial, GB: GroebnerBasis) -> Polynomial:
    return Polynomial(g.nvars, _reduce(_exact_terms(g), GB._gpolys(), GB.order.key))


def standard_monomials(GB: GroebnerBasis):
    """Monomials outside the leading-term ideal, as a :class:`QuotientBasis`."""
    from .macaulay import QuotientBasis

    n = GB.nvars
    lms = GB.leading_monomials
    if any(not any(m) for m in lms):
        # 1 is a leading monomial: the quotient is zero
        monos: list[Monomial] = []
    else:
        bounds = []
        for k in range(n):
            pure = [m[k] for m in lms if m[k] > 0 and sum(m) == m[k]]
            if not pure:
                raise InfiniteQuotientError(
                    f"no pure power of variable {k} among the leading terms: infinite quotient")
            bounds.append(min(pure))
        monos = []
        stack = [(0,) * n]
        seen = set(stack)
        while stack:
            m = stack.pop()
            if any(_divides(l, m) for l in lms):
                continue
            monos.append(m)
            for k in range(n):
                t = tuple(e + (i == k) for i, e in enumerate(m))
                if t[k] < bounds[k] and t not in seen:
                    seen.add(t)
                    stack.append(t)
        monos.sort(key=display_key)
    monos = tuple(monos)
    gp = GB._gpolys()
    pos = {m: i for i, m in enumerate(monos)}

    def reducer(f: Polynomial) -> np.ndarray:
        r = _reduce(_exact_terms(f), gp, GB.order.key)
        v = np.array([Fraction(0)] * len(monos), dtype=object)
        for m, c in r.items():
            v[pos[m]] = c
        return v

    table = {}
    for b in monos:
        for k in range(n):
            t = tuple(e + (i == k) for i, e in enumerate(b))
            if t not in table:
                table[t] = reducer(Polynomial.monomial(t))
        table[b] = reducer(Polynomial.monomial(b))
    return QuotientBasis(monos, n, QQ, table, GB.names, reducer)


def eliminate(F: PolySystem | Sequence[Polynomial], keep: int,
              pair_cap: int = PAIR_CAP) -> list[Polynomial]:
    """Generators of I ∩ K[x_1..x_keep] from a lex basis with x_1 < ... < x_n."""
    polys = list(F.polys if isinstance(F, PolySystem) else F)
    n = polys[0].nvars
    if not 0 <= keep <= n:
        raise ValueError(f"keep must lie in 0..{n}")
    order = MonomialOrder("lex", tuple(range(n - 1, -1, -1)))
    GB = buchberger(polys, order, pair_cap)
    return [g for g in GB.generators if all(v < keep for v in g.variables())]


def solve_groebner_eigen(F: PolySystem, cfg=None, order: MonomialOrder = GREVLEX):
    """Solutions from the multiplication matrices of a Groebner quotient basis."""
    from .macaulay import EigenConfig, solutions_from_quotient
    from .solutions import SolutionSet

    cfg = cfg or EigenConfig()
    GB = buchberger(F, order)
    Q = standard_monomials(GB)
    if Q.delta == 0:
        return SolutionSet([], F.names, ["1 lies in the ideal: no solutions"], {"delta": 0})
    out = solutions_from_quotient(F, Q, cfg, provenance="groebner-eigen")
    out.stats["groebner_size"] = len(GB)
    return out
