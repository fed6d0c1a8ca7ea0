"""Grid-tagged first/second order operators with exact composition.

An operator is a finite sum ``sum_k c_k(v) * W^k`` where ``W^k`` is

* ``T^k`` on the linear grid (``x -> x + k``),
* ``T^k`` on the q-linear grid (``z -> q^k z``),
* ``(d/dx)^k`` on the continuum (``k >= 0``).

Coefficients are :class:`LaurentPoly` in the grid variable.  Operators are kept
in normal form (coefficient to the left of the word), so equality is exact
term-wise comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List

from .laurent import LaurentPoly
from .scalars import GRat, RatFunc, parse_scalar, simplify

CONTINUUM = "continuum"
LINEAR = "linear"
QLINEAR = "qlinear"

MAX_DERIVATIVE_ORDER = 4
NEG_INF = float("-inf")


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GridKind:
    kind: str
    q: object = None

    def __post_init__(self):
        if self.kind not in (CONTINUUM, LINEAR, QLINEAR):
            raise ValueError(f"unknown grid {self.kind!r}")
        if self.kind == QLINEAR:
            if self.q is None:
                raise ValueError("q-linear grid needs a base q")
            if not isinstance(self.q, RatFunc) and self.q in (0, 1, -1):
                raise ValueError(f"degenerate base q = {self.q}")

    @property
    def var(self) -> str:
        return "z" if self.kind == QLINEAR else "x"

    def __str__(self):
        return self.kind if self.kind != QLINEAR else f"qlinear(q={self.q})"


def continuum() -> GridKind:
    return GridKind(CONTINUUM)


def linear() -> GridKind:
    return GridKind(LINEAR)


def qlinear(q=None) -> GridKind:
    return GridKind(QLINEAR, RatFunc.symbol("q") if q is None else q)


class GridOperator:
    __slots__ = ("grid", "terms")

    def __init__(self, grid: GridKind, terms: Dict[int, LaurentPoly] | None = None):
        clean: Dict[int, LaurentPoly] = {}
        for k, c in (terms or {}).items():
            if not isinstance(c, LaurentPoly):
                c = LaurentPoly.const(c, grid.var)
            if c.var != grid.var:
                raise GridMismatch(f"coefficient in {c.var} on {grid}")
            if grid.kind == CONTINUUM and k < 0:
                raise ValueError("continuum words must be nonnegative")
            if not c.is_zero():
                clean[int(k)] = c
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GridOperator is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, grid: GridKind) -> "GridOperator":
        return cls(grid, {0: LaurentPoly.const(1, grid.var)})

    @classmethod
    def zero(cls, grid: GridKind) -> "GridOperator":
        return cls(grid, {})

    @classmethod
    def mult(cls, grid: GridKind, coeff) -> "GridOperator":
        """Multiplication by a Laurent polynomial (or scalar)."""
        return cls(grid, {0: coeff})

    @classmethod
    def word(cls, grid: GridKind, k: int, coeff=1) -> "GridOperator":
        return cls(grid, {k: coeff})

    # -- algebra -----------------------------------------------------------
    def _same(self, other: "GridOperator"):
        if other.grid != self.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def _lift(self, other) -> "GridOperator":
        if isinstance(other, GridOperator):
            self._same(other)
            return other
        return GridOperator.mult(self.grid, other)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out[k] + c if k in out else c
        return GridOperator(self.grid, out)

    __radd__ = __add__

    def __neg__(self):
        return GridOperator(self.grid, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def _conj(self, k: int, c: LaurentPoly):
        """Normal form of ``W^k * c``: list of ``(word, coeff)``."""
        kind = self.grid.kind
        if k == 0:
            return [(0, c)]
        if kind == LINEAR:
            return [(k, c.shift(k))]
        if kind == QLINEAR:
            return [(k, c.scale(self.grid.q ** k))]
        out, deriv = [], c
        for j in range(k + 1):
            if deriv.is_zero():
                break
            out.append((k - j, deriv * comb(k, j)))
            deriv = deriv.derivative()
        return out

    def compose(self, other: "GridOperator") -> "GridOperator":
        self._same(other)
        out: Dict[int, LaurentPoly] = {}
        for k, a in self.terms.items():
            for m, b in other.terms.items():
                for w, cb in self._conj(k, b):
                    word = w + m
                    if self.grid.kind == CONTINUUM and word > MAX_DERIVATIVE_ORDER:
                        raise ValueError(f"derivative order {word} exceeds cap {MAX_DERIVATIVE_ORDER}")
                    term = a * cb
                    out[word] = out[word] + term if word in out else term
        return GridOperator(self.grid, out)

    def __mul__(self, other):
        if isinstance(other, GridOperator):
            return self.compose(other)
        if isinstance(other, LaurentPoly):
            return self.compose(GridOperator.mult(self.grid, other))
        if other == 0:
            return GridOperator.zero(self.grid)
        return GridOperator(self.grid, {k: c * other for k, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, LaurentPoly):
            return GridOperator.mult(self.grid, other).compose(self)
        if other == 0:
            return GridOperator.zero(self.grid)
        return GridOperator(self.grid, {k: other * c for k, c in self.terms.items()})

    def __truediv__(self, c):
        return GridOperator(self.grid, {k: v / c for k, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative operator power")
        out = GridOperator.identity(self.grid)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GridOperator):
            return self.grid == other.grid and self.terms == other.terms
        if isinstance(other, (int, Fraction, GRat, RatFunc)):
            return self == GridOperator.mult(self.grid, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.grid, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def scalar_value(self):
        """The scalar ``c`` if this operator is ``c * I``, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {0}:
            return None
        c = self.terms[0]
        if set(c.coeffs) != {0}:
            return None
        return c[0]

    def map_coeffs(self, f) -> "GridOperator":
        return GridOperator(self.grid, {k: c.map_coeffs(f) for k, c in self.terms.items()})

    # -- action ------------------------------------------------------------
    def apply(self, p: LaurentPoly) -> LaurentPoly:
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly.const(p, self.grid.var)
        if p.var != self.grid.var:
            raise GridMismatch(f"polynomial in {p.var} on {self.grid}")
        out = LaurentPoly({}, self.grid.var)
        kind = self.grid.kind
        for k, c in self.terms.items():
            if kind == LINEAR:
                img = p.shift(k)
            elif kind == QLINEAR:
                img = p.scale(self.grid.q ** k)
            else:
                img = p
                for _ in range(k):
                    img = img.derivative()
            out = out + c * img
        return out

    def __call__(self, p):
        return self.apply(p)

    def max_word(self) -> int:
        return max((abs(k) for k in self.terms), default=0)

    def __repr__(self):
        return f"GridOperator[{self.grid}]({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        sym = {LINEAR: "T", QLINEAR: "T", CONTINUUM: "d"}[self.grid.kind]
        for k in sorted(self.terms):
            c = self.terms[k]
            if k == 0:
                parts.append(f"({c})")
            elif self.grid.kind == CONTINUUM:
                parts.append(f"({c})*d^{k}" if k > 1 else f"({c})*d")
            else:
                parts.append(f"({c})*{sym}^{k}")
        return " + ".join(parts)


def commutator(a: GridOperator, b: GridOperator) -> GridOperator:
    return a * b - b * a


def anticommutator(a: GridOperator, b: GridOperator) -> GridOperator:
    return a * b + b * a


def q_commutator(a: GridOperator, b: GridOperator, q) -> GridOperator:
    """``a b - q b a``."""
    return a * b - q * (b * a)


def equals(a: GridOperator, b: GridOperator) -> bool:
    a._same(b)
    return a == b


def monomial(grid: GridKind, n: int) -> LaurentPoly:
    return LaurentPoly.monomial(n, 1, grid.var)


def degree_profile(op: GridOperator, nmax: int) -> List[float]:
    """``deg(op * v^n) - n`` for ``n = 0..nmax``; ``-inf`` when the image is 0."""
    out: List[float] = []
    for n in range(nmax + 1):
        img = op.apply(monomial(op.grid, n))
        out.append(NEG_INF if img.is_zero() else img.degree() - n)
    return out


def shifts(grid: GridKind):
    """``(T+, T-)`` on a discrete grid, ``(d, None)`` on the continuum."""
    if grid.kind == CONTINUUM:
        return GridOperator.word(grid, 1), None
    return GridOperator.word(grid, 1), GridOperator.word(grid, -1)


# -- operator literal parser ----------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<shift>T[+-])|(?P<name>M1|M2|R1|R2|[A-Za-z]+)|(?P<op>[-+*/^()]))"
)


class OperatorSyntaxError(ValueError):
    pass


def _tokenize(text: str):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OperatorSyntaxError(f"unexpected input at {pos}: {text[pos:]!r}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, grid: GridKind, names: Dict[str, GridOperator]):
        self.toks = _tokenize(text)
        self.i = 0
        self.grid = grid
        self.names = names

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, val):
        kind, v = self.take()
        if v != val:
            raise OperatorSyntaxError(f"expected {val!r}, got {v!r}")

    def parse(self) -> GridOperator:
        out = self.expr()
        if self.i != len(self.toks):
            raise OperatorSyntaxError(f"trailing input: {self.toks[self.i:]}")
        return out

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                val = val * self._inverse(rhs)
        return val

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, v = self.take()
            if kind != "num" or "/" in v:
                raise OperatorSyntaxError("exponent must be an integer")
            n = sign * int(v)
            return base ** n if n >= 0 else self._inverse(base) ** (-n)
        return base

    def _inverse(self, op: GridOperator) -> GridOperator:
        if len(op.terms) == 1:
            (k, c), = op.terms.items()
            if len(c.coeffs) == 1 and (k == 0 or self.grid.kind != CONTINUUM):
                (e, v), = c.coeffs.items()
                # (c v^e W^k)^-1 = W^-k (1/c) v^-e
                inv_c = GridOperator.mult(self.grid, LaurentPoly({-e: 1 / v}, self.grid.var))
                return GridOperator.word(self.grid, -k) * inv_c if k else inv_c
        raise OperatorSyntaxError("can only divide by a scalar, monomial or shift")

    def atom(self):
        kind, v = self.take()
        g = self.grid
        if kind == "num":
            return GridOperator.mult(g, Fraction(v))
        if kind == "shift":
            if g.kind == CONTINUUM:
                raise OperatorSyntaxError("shifts are not defined on the continuum")
            return GridOperator.word(g, 1 if v == "T+" else -1)
        if v == "(":
            val = self.expr()
            self.expect(")")
            return val
        if kind == "name":
            if v in self.names:
                return self.names[v]
            if v == g.var:
                return GridOperator.mult(g, LaurentPoly.monomial(1, 1, g.var))
            if v == "i":
                return GridOperator.mult(g, GRat(0, 1))
            if v == "q":
                if g.kind != QLINEAR:
                    raise OperatorSyntaxError("q outside the q-linear grid")
                return GridOperator.mult(g, g.q)
            if v == "d":
                if g.kind != CONTINUUM:
                    raise OperatorSyntaxError("d is only defined on the continuum")
                return GridOperator.word(g, 1)
            if v == "I":
                return GridOperator.identity(g)
        raise OperatorSyntaxError(f"unexpected token {v!r}")


def parse_operator(text: str, grid: GridKind, names: Dict[str, GridOperator] | None = None) -> GridOperator:
    """Parse an operator literal such as ``"z^-1*(T+ - T-)/(q - q^-1)"``.

    Grammar: ``+ - * / ^`` with the usual precedence, parentheses, rational
    numbers, ``i``, the grid variable (``x`` or ``z``), ``q`` (q-linear only),
    ``T+``/``T-`` (discrete grids), ``d`` (continuum), ``I`` and any extra
    named operators passed in ``names`` (e.g. the basis ``L, M1, M2, R1, R2``).
    Division is restricted to scalars, monomials and shifts.
    """
    return _Parser(text, grid, names or {}).parse()


__all__ = [
    "CONTINUUM", "LINEAR", "QLINEAR", "GridKind", "GridOperator", "GridMismatch",
    "commutator", "anticommutator", "q_commutator", "equals", "degree_profile",
    "continuum", "linear", "qlinear", "monomial", "parse_operator", "shifts", "NEG_INF",
    "parse_scalar", "simplify",
]
