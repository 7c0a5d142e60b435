"""Sparse multivariate polynomials over QQ (exact) or CC (double precision).

A polynomial is an immutable map from exponent tuples to coefficients.
Exact polynomials store :class:`fractions.Fraction` coefficients, floating
ones store Python ``complex``.  The two never mix implicitly: combine them
only after an explicit :meth:`Polynomial.to_complex`.
"""

from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

QQ = "QQ"
CC = "CC"

MAX_EXPONENT = 10_000

Monomial = tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed polynomial text.  ``pos`` is a 0-based column."""

    def __init__(self, message: str, pos: int, line: int | None = None):
        self.pos = pos
        self.line = line
        where = f"column {pos + 1}" if line is None else f"line {line}, column {pos + 1}"
        super().__init__(f"{message} ({where})")


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


def _coerce(c, fld: str):
    if fld == QQ:
        if isinstance(c, Fraction):
            return c
        if isinstance(c, numbers.Integral):
            return Fraction(int(c))
        raise TypeError(
            f"inexact coefficient {c!r} in an exact polynomial; call to_complex() first"
        )
    z = complex(c)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite coefficient {c!r}")
    return z


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables.

    Parameters
    ----------
    nvars : int
        Number of variables of the ambient ring.
    terms : mapping, optional
        ``{exponent tuple: coefficient}``.  Zero coefficients are dropped and
        repeated monomials are not possible by construction.
    field : {"QQ", "CC"}, optional
        Inferred from the coefficients when omitted: any float or complex
        coefficient makes the polynomial floating.
    """

    __slots__ = ("nvars", "field", "_terms", "_hash", "_horner")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None,
                 field: str | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        terms = terms or {}
        if field is None:
            field = QQ if all(_is_exact(c) for c in terms.values()) else CC
        if field not in (QQ, CC):
            raise ValueError(f"unknown field {field!r}")
        clean: dict[Monomial, object] = {}
        for mono, c in terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if any(e > MAX_EXPONENT for e in mono):
                raise OverflowError(f"exponent overflow in {mono}")
            c = _coerce(c, field)
            if c != 0:
                clean[mono] = c
        self.nvars = nvars
        self.field = field
        self._terms = clean
        self._hash = None
        self._horner = None

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, nvars: int, terms: dict, field: str) -> Polynomial:
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars = nvars
        p.field = field
        p._terms = terms
        p._hash = None
        p._horner = None
        return p

    @classmethod
    def zero(cls, nvars: int, field: str = QQ) -> Polynomial:
        return cls._raw(nvars, {}, field)

    @classmethod
    def constant(cls, c, nvars: int, field: str | None = None) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def variable(cls, i: int, nvars: int, field: str = QQ) -> Polynomial:
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1}, field)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, field: str | None = None) -> Polynomial:
        return cls(len(exps), {tuple(exps): c}, field)

    # basic properties ------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, object]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return -1
        return max(m[i] for m in self._terms)

    def coefficient(self, mono: Sequence[int]):
        return self._terms.get(tuple(mono), Fraction(0) if self.field == QQ else 0j)

    def support(self) -> frozenset[Monomial]:
        if not self._terms:
            raise ValueError("the zero polynomial has no support")
        return frozenset(self._terms)

    def variables(self) -> set[int]:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    def to_complex(self) -> Polynomial:
        if self.field == CC:
            return self
        return Polynomial._raw(
            self.nvars, {m: complex(c) for m, c in self._terms.items()}, CC)

    # comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (numbers.Number)):
            return self._terms == ({(0,) * self.nvars: other} if other != 0 else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic -----------------------------------------------------------

    def _check(self, other: Polynomial) -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars} variables")
        if other.field != self.field:
            raise TypeError("cannot mix exact and floating polynomials; use to_complex()")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, numbers.Number):
            return Polynomial.constant(_coerce(other, self.field), self.nvars, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial._raw(self.nvars, out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()}, self.field)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Polynomial:
        c = _coerce(c, self.field)
        if c == 0:
            return Polynomial.zero(self.nvars, self.field)
        return Polynomial._raw(self.nvars, {m: c * v for m, v in self._terms.items()}, self.field)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        out = {m: c for m, c in out.items() if c != 0}
        if any(e > MAX_EXPONENT for m in out for e in m):
            raise OverflowError("exponent overflow")
        return Polynomial._raw(self.nvars, out, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, numbers.Number):
            return NotImplemented
        if self.field == QQ:
            return self.scale(Fraction(1) / _coerce(other, QQ))
        return self.scale(1 / complex(other))

    def __pow__(self, k: int):
        if not isinstance(k, numbers.Integral) or k < 0:
            raise ValueError("power must be a nonnegative integer")
        result = Polynomial.constant(1, self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, mono: Sequence[int], c=1) -> Polynomial:
        c = _coerce(c, self.field)
        return Polynomial._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(m, mono)): c * v for m, v in self._terms.items()},
            self.field,
        )

    # calculus & evaluation ------------------------------------------------

    def diff(self, i: int) -> Polynomial:
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Polynomial._raw(self.nvars, out, self.field)

    def gradient(self) -> list[Polynomial]:
        return [self.diff(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``.

        Exact points on exact polynomials give exact results.  Anything else is
        evaluated in complex arithmetic with a nested Horner scheme.
        """
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        if self.field == QQ and all(_is_exact(v) for v in point):
            total = Fraction(0)
            for m, c in self._terms.items():
                term = c
                for v, e in zip(point, m):
                    if e:
                        term *= Fraction(v) ** e
                total += term
            return total
        if not self._terms:
            return 0j
        if self._horner is None:
            self._horner = _horner_tree(self._terms, 0, self.nvars)
        return _horner_eval(self._horner, [complex(v) for v in point], 0)

    __call__ = evaluate

    def compose(self, images: Sequence[Polynomial]) -> Polynomial:
        """Substitute variable ``i`` by ``images[i]`` and expand."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0]
        for img in images:
            target._check(img)
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1, target.nvars, target.field)}
                                               for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        out = Polynomial.zero(target.nvars, target.field)
        for m, c in self._terms.items():
            term = Polynomial.constant(_coerce(c, target.field), target.nvars, target.field)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    # ordering -------------------------------------------------------------

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms, key=order.key)

    def leading_term(self, order: MonomialOrder):
        m = self.leading_monomial(order)
        return m, self._terms[m]

    def sorted_terms(self, order: MonomialOrder, reverse: bool = True):
        return sorted(self._terms.items(), key=lambda mc: order.key(mc[0]), reverse=reverse)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r}, nvars={self.nvars})"


def _horner_tree(terms: Mapping[Monomial, object], k: int, n: int):
    if k == n:
        return sum(terms.values())
    groups: dict[int, dict] = {}
    for m, c in terms.items():
        groups.setdefault(m[k], {})[m] = c
    return sorted(((e, _horner_tree(g, k + 1, n)) for e, g in groups.items()), reverse=True)


def _horner_eval(node, x: list[complex], k: int) -> complex:
    if k == len(x):
        return complex(node)
    xv = x[k]
    acc = 0j
    prev = node[0][0]
    for e, sub in node:
        acc = acc * xv ** (prev - e) + _horner_eval(sub, x, k + 1)
        prev = e
    return acc * xv ** prev


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """lex, grlex or grevlex with an explicit variable precedence.

    ``precedence`` lists variable indices from most to least significant;
    ``None`` means ``x0 > x1 > ... > x_{n-1}``.  :meth:`key` maps a monomial to
    a tuple whose natural ordering is the monomial order.
    """

    kind: str = "grevlex"
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.precedence is not None:
            p = tuple(self.precedence)
            if sorted(p) != list(range(len(p))):
                raise ValueError(f"precedence {p} is not a permutation")
            object.__setattr__(self, "precedence", p)

    def _perm(self, m: Sequence[int]) -> tuple[int, ...]:
        if self.precedence is None:
            return tuple(m)
        return tuple(m[i] for i in self.precedence)

    def key(self, m: Sequence[int]) -> tuple:
        p = self._perm(m)
        if self.kind == "lex":
            return p
        if self.kind == "grlex":
            return (sum(p), p)
        return (sum(p), tuple(-e for e in reversed(p)))

    def less(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.key(a) < self.key(b)


GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def display_key(m: Sequence[int]) -> tuple:
    """Ascending degree, then earlier variables first: 1, x, y, x^2, x*y, ..."""
    return (sum(m), tuple(-e for e in m))


def monomials_up_to(nvars: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree <= d, in :func:`display_key` order."""
    out: list[Monomial] = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, k + 1)

    for deg in range(d + 1):
        rec((), deg, 0)
    return out


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolySystem:
    """Polynomials f_1..f_s sharing ``nvars`` variables named by ``names``."""

    polys: tuple[Polynomial, ...]
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("a system needs at least one polynomial")
        n = polys[0].nvars
        if any(p.nvars != n for p in polys):
            raise ValueError("all polynomials must share nvars")
        names = tuple(self.names) or default_names(n)
        if len(names) != n:
            raise ValueError(f"{len(names)} names for {n} variables")
        fields = {p.field for p in polys}
        if len(fields) > 1:
            raise TypeError("system mixes exact and floating polynomials")
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "names", names)

    @property
    def nvars(self) -> int:
        return self.polys[0].nvars

    @property
    def field(self) -> str:
        return self.polys[0].field

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.degree() for p in self.polys)

    def is_square(self) -> bool:
        return len(self.polys) == self.nvars

    def to_complex(self) -> PolySystem:
        return PolySystem(tuple(p.to_complex() for p in self.polys), self.names)

    def evaluate(self, point) -> list:
        return [p.evaluate(point) for p in self.polys]

    def jacobian(self) -> list[list[Polynomial]]:
        return [p.gradient() for p in self.polys]

    def format(self) -> str:
        lines = ["vars: " + ", ".join(self.names)]
        lines += [format_poly(p, self.names) for p in self.polys]
        return "\n".join(lines) + "\n"


def default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return f"({c.real!r}{c.imag:+.17g}j)"


def format_poly(f: Polynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text: grlex-descending terms, explicit ``*`` and ``^``."""
    names = tuple(names) if names else default_names(f.nvars)
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for m, c in f.sorted_terms(GRLEX):
        vs = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
        neg = f.field == QQ and c < 0
        mag = -c if neg else c
        if vs and mag == 1 and f.field == QQ:
            body = "*".join(vs)
        else:
            body = "*".join([_format_coeff(mag)] + vs)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("var", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.index = {n: k for k, n in enumerate(names)}
        self.n = len(names)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term() * sign
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                acc = acc + t if tok[1] == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = acc * self.power()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                d = self.take()
                if d[0] != "num":
                    raise ParseError("division only by an integer literal", d[2])
                if d[1] == 0:
                    raise ParseError("division by zero", d[2])
                acc = acc.scale(Fraction(1, d[1]))
            else:
                return acc

    def power(self) -> Polynomial:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", e[2])
            if e[1] > MAX_EXPONENT:
                raise ParseError("exponent overflow", e[2])
            return base ** e[1]
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Polynomial.constant(val, self.n, QQ)
        if kind == "var":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}", pos)
            return Polynomial.variable(self.index[val], self.n)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("unexpected " + ("end of input" if kind == "end" else repr(val)), pos)


def parse_poly(text: str, names: Sequence[str]) -> Polynomial:
    """Parse polynomial text over QQ in the variables ``names``."""
    return _Parser(text, names).parse()


def parse_system(text: str) -> PolySystem:
    """Parse the system file format: a ``vars:`` header, then one polynomial per line."""
    names = None
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if names is None:
            if not line.startswith("vars:"):
                raise ParseError("first line must be 'vars: ...'", 0, lineno)
            names = tuple(v.strip() for v in line[5:].split(","))
            for v in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                    raise ParseError(f"bad variable name {v!r}", raw.find("vars:") + 5, lineno)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable name", 0, lineno)
            continue
        offset = len(raw) - len(raw.lstrip())
        try:
            polys.append(parse_poly(line, names))
        except ParseError as exc:
            raise ParseError(str(exc).rsplit(" (", 1)[0], exc.pos + offset, lineno) from None
    if names is None:
        raise ParseError("missing 'vars:' header", 0, 1)
    if not polys:
        raise ParseError("system has no polynomials", 0, lineno if text else 1)
    return PolySystem(tuple(polys), names)


def read_system(path) -> PolySystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# ---------------------------------------------------------------------------
# lines on a surface
# ---------------------------------------------------------------------------

LINE_NAMES = ("a1", "a2", "a3", "b1", "b2", "b3")


def substitute_line(f: Polynomial) -> list[Polynomial]:
    """Restrict a cubic in three variables to the line ``x_i = a_i + t*b_i``.

    Returns the coefficients of t^3, t^2, t, 1 as polynomials in
    ``(a1, a2, a3, b1, b2, b3)``.  The line lies on ``f = 0`` exactly when all
    four vanish.
    """
    if f.nvars != 3:
        raise ValueError("substitute_line needs a polynomial in 3 variables")
    if f.degree() > 3:
        raise ValueError("substitute_line needs a polynomial of degree <= 3")
    # ring (a1, a2, a3, b1, b2, b3, t)
    nv = 7
    t = Polynomial.variable(6, nv, f.field)
    images = [Polynomial.variable(i, nv, f.field) + Polynomial.variable(3 + i, nv, f.field) * t
              for i in range(3)]
    g = f.compose(images)
    coeffs: dict[int, dict] = {k: {} for k in range(4)}
    for m, c in g:
        if m[6] > 3:
            raise ArithmeticError("degree in t exceeds 3 after substitution")
        coeffs[m[6]][m[:6]] = c
    return [Polynomial(6, coeffs[k], f.field) for k in (3, 2, 1, 0)]
