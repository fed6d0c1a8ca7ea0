"""Sparse Laurent polynomials with exact scalar coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Mapping

from .scalars import GRat, RatFunc, format_scalar, simplify


class LaurentPoly:
    """``sum c_k * var**k`` over integer ``k`` (negative allowed)."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Mapping[int, object] | None = None, var: str = "x"):
        clean: Dict[int, object] = {}
        for k, c in (coeffs or {}).items():
            if c != 0:
                clean[int(k)] = simplify(c)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # constructors
    @classmethod
    def const(cls, c, var: str = "x") -> "LaurentPoly":
        return cls({0: c}, var)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "x") -> "LaurentPoly":
        return cls({k: c}, var)

    @classmethod
    def from_list(cls, cs: Iterable, var: str = "x") -> "LaurentPoly":
        """Dense coefficients, constant term first."""
        return cls(dict(enumerate(cs)), var)

    # structure
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self):
        """Highest exponent, or ``None`` for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else None

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def is_polynomial(self) -> bool:
        return all(k >= 0 for k in self.coeffs)

    def leading(self):
        return self.coeffs[self.degree()] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int):
        return self.coeffs.get(k, Fraction(0))

    def items(self):
        return sorted(self.coeffs.items())

    def _check(self, other: "LaurentPoly"):
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.const(other, self.var)

    # arithmetic
    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()}, self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if not isinstance(other, (int, Fraction, GRat, RatFunc)):
                return NotImplemented
            if other == 0:
                return LaurentPoly({}, self.var)
            return LaurentPoly({k: c * other for k, c in self.coeffs.items()}, self.var)
        self._check(other)
        out: Dict[int, object] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, LaurentPoly):
            if len(c.coeffs) != 1:
                raise ValueError("can only divide by a monomial")
            (k, v), = c.coeffs.items()
            return LaurentPoly({e - k: a / v for e, a in self.coeffs.items()}, self.var)
        return LaurentPoly({k: a / c for k, a in self.coeffs.items()}, self.var)

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("negative power of a non-monomial")
            (k, v), = self.coeffs.items()
            return LaurentPoly({k * n: v ** n}, self.var)
        out = LaurentPoly.const(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GRat, RatFunc)):
            return self == LaurentPoly.const(other, self.var)
        return NotImplemented

    def __hash__(self):
        return hash((self.var, tuple(sorted(self.coeffs.items()))))

    # substitutions
    def shift(self, k) -> "LaurentPoly":
        """``p(var + k)``; polynomial part only (Laurent terms are rejected)."""
        if not self.is_polynomial():
            raise ValueError("additive shift of a Laurent polynomial with negative powers")
        if k == 0:
            return self
        out: Dict[int, object] = {}
        for m, c in self.coeffs.items():
            for j in range(m + 1):
                out[j] = out.get(j, 0) + c * comb(m, j) * k ** (m - j)
        return LaurentPoly(out, self.var)

    def scale(self, s) -> "LaurentPoly":
        """``p(s * var)``."""
        return LaurentPoly({m: c * s ** m for m, c in self.coeffs.items()}, self.var)

    def affine(self, alpha, beta, var: str | None = None) -> "LaurentPoly":
        """``p(alpha * v + beta)`` as a polynomial in ``v``."""
        if not self.is_polynomial():
            raise ValueError("affine substitution of a Laurent polynomial")
        base = LaurentPoly({1: alpha, 0: beta}, var or self.var)
        out = LaurentPoly({}, var or self.var)
        d = self.degree()
        if d is None:
            return out
        for m in range(d, -1, -1):
            out = out * base + self[m]
        return out

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({m - 1: c * m for m, c in self.coeffs.items() if m != 0}, self.var)

    def map_coeffs(self, f) -> "LaurentPoly":
        return LaurentPoly({m: f(c) for m, c in self.coeffs.items()}, self.var)

    def __call__(self, value):
        acc = Fraction(0)
        for m, c in self.coeffs.items():
            acc = acc + c * value ** m
        return simplify(acc)

    def with_var(self, var: str) -> "LaurentPoly":
        return LaurentPoly(self.coeffs, var)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items(), reverse=True):
            cs = format_scalar(c)
            if isinstance(c, RatFunc) or (" " in cs) or ("+" in cs[1:]) or ("-" in cs[1:]):
                cs = f"({cs})"
            if m == 0:
                parts.append(cs)
                continue
            mono = self.var if m == 1 else f"{self.var}^{m}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def X(var: str = "x") -> LaurentPoly:
    return LaurentPoly.monomial(1, 1, var)
