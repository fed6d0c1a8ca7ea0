"""Exact scalar tower: rationals, Gaussian rationals, univariate rational functions.

``Rat`` is :class:`fractions.Fraction`.  :class:`GRat` adds the imaginary unit,
and :class:`RatFunc` is a rational function in one named formal parameter
(``q``, ``t``, ``eps``, ...) with ``Rat``/``GRat`` coefficients.  Everything is
immutable; mixed arithmetic promotes up the tower.
"""

from __future__ import annotations

import math
import random
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Rat = Fraction


class PoleError(ArithmeticError):
    """A rational function has a genuine pole at the requested point."""

    def __init__(self, point, func=None):
        self.point = point
        self.func = func
        super().__init__(f"pole at {point}" + (f" of {func}" if func is not None else ""))


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"not a rational: {v!r}")


class GRat:
    """Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _rat(re))
        object.__setattr__(self, "im", _rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("GRat is immutable")

    @staticmethod
    def coerce(v) -> "GRat":
        if isinstance(v, GRat):
            return v
        return GRat(_rat(v), 0)

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            o = GRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            o = GRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GRat.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            o = GRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GRat":
        return GRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GRat division by zero")
        return GRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            o = GRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GRat.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GRat(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            o = GRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GRat({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


I = GRat(0, 1)

Coeff = Union[Fraction, GRat]


def simplify(v):
    """Demote a scalar to the smallest tower level that holds it."""
    if isinstance(v, RatFunc):
        if v.is_constant():
            return simplify(v.constant())
        return v
    if isinstance(v, GRat):
        return v.re if v.im == 0 else v
    if isinstance(v, int):
        return Fraction(v)
    return v


# -- dense univariate polynomial helpers (lists, low degree first) -----------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _pneg(a: Sequence) -> list:
    return [-c for c in a]


def _pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(a: Sequence, c) -> list:
    return _trim([x * c for x in a])


def _pdivmod(a: Sequence, b: Sequence):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    lead = b[-1]
    if len(a) < len(b):
        return [], _trim(a)
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        quot[k] = c
        if c != 0:
            for j, y in enumerate(b):
                a[k + j] = a[k + j] - c * y
    return _trim(quot), _trim(a[: len(b) - 1])


def _pmonic(a: Sequence) -> list:
    lead = a[-1]
    return [c / lead for c in a]


def _int_content_free(ints: list) -> list:
    g = math.gcd(*ints)
    return [c // g for c in ints] if g > 1 else ints


def _primitive_int(a: Sequence) -> list:
    """Integer primitive part of a polynomial with rational coefficients."""
    den = math.lcm(*(c.denominator for c in a))
    return _int_content_free([c.numerator * (den // c.denominator) for c in a])


def _int_prem(a: list, b: list) -> list:
    r, lb, db = list(a), b[-1], len(b) - 1
    while len(r) - 1 >= db:
        c, k = r[-1], len(r) - 1 - db
        r = [lb * x for x in r]
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def _int_gcd(a: list, b: list) -> list:
    # primitive remainder sequence: exact, and coefficients stay small
    while b:
        r = _int_prem(a, b)
        a, b = b, (_int_content_free(r) if r else [])
    return a


def _pgcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    if not a or not b:
        return _pmonic(a or b) if (a or b) else []
    if len(a) == 1 or len(b) == 1:
        return [Fraction(1)]
    if all(isinstance(c, Fraction) for c in a) and all(isinstance(c, Fraction) for c in b):
        g = _int_gcd(_primitive_int(a), _primitive_int(b))
        return _pmonic([Fraction(c) for c in g])
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _pmonic(a)


def _peval(a: Sequence, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _valuation(a: Sequence) -> int:
    for i, c in enumerate(a):
        if c != 0:
            return i
    raise ValueError("valuation of zero polynomial")


def _clean(c):
    if isinstance(c, GRat) and c.im == 0:
        return c.re
    if isinstance(c, int):
        return Fraction(c)
    return c


def _cancel(a: Sequence, b: Sequence):
    g = _pgcd(a, b)
    if len(g) > 1:
        return _pdivmod(a, g)[0], _pdivmod(b, g)[0]
    return list(a), list(b)


class RatFunc:
    """Rational function ``num(p)/den(p)`` in a single named parameter ``p``.

    Stored in lowest terms with a monic denominator.
    """

    __slots__ = ("param", "num", "den")

    def __init__(self, param: str, num: Iterable, den: Iterable = (1,), _reduced=False):
        num = _trim([_clean(c) for c in num])
        den = _trim([_clean(c) for c in den])
        if not den:
            raise ZeroDivisionError("RatFunc with zero denominator")
        if not num:
            num, den = [], [Fraction(1)]
        elif not _reduced:
            g = _pgcd(num, den)
            if len(g) > 1:
                num, _ = _pdivmod(num, g)
                den, _ = _pdivmod(den, g)
            lead = den[-1]
            if lead != 1:
                num = [_clean(c / lead) for c in num]
                den = [_clean(c / lead) for c in den]
        object.__setattr__(self, "param", param)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def symbol(cls, param: str) -> "RatFunc":
        return cls(param, [0, 1], [1], _reduced=True)

    @classmethod
    def const(cls, param: str, c) -> "RatFunc":
        return cls(param, [c], [1], _reduced=True)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.param != self.param:
                raise ValueError(f"mixing parameters {self.param!r} and {other.param!r}")
            return other
        if isinstance(other, (int, Fraction, GRat, Rational)):
            return RatFunc.const(self.param, _clean(other))
        raise TypeError(f"cannot coerce {other!r} to RatFunc")

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else Fraction(0)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.param, _padd(self.num, o.num), self.den)
        if len(o.den) == 1:
            return RatFunc(self.param, _padd(self.num, _pmul(o.num, self.den)), self.den)
        return RatFunc(
            self.param,
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.param, _pneg(self.num), self.den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_constant():
            c = o.constant()
            if c == 0:
                return RatFunc(self.param, [])
            return RatFunc(self.param, _pscale(self.num, c), self.den, _reduced=True)
        # cross-cancel first so the final gcd runs on small factors
        n1, d2 = _cancel(self.num, o.den)
        n2, d1 = _cancel(o.num, self.den)
        return RatFunc(self.param, _pmul(n1, n2), _pmul(d1, d2), _reduced=True)._normalized()

    __rmul__ = __mul__

    def _normalized(self) -> "RatFunc":
        lead = self.den[-1]
        if lead == 1:
            return self
        return RatFunc(self.param, [c / lead for c in self.num], [c / lead for c in self.den], _reduced=True)

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("RatFunc division by zero")
        return RatFunc(self.param, self.den, self.num)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("RatFunc division by zero")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = RatFunc.const(self.param, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash((self.param, self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def subs(self, point):
        """Value at ``point``; raises :class:`PoleError` on a pole."""
        d = _peval(self.den, point)
        if d == 0:
            raise PoleError(point, self)
        return simplify(_peval(self.num, point) / d)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        n = _poly_str(self.num, self.param)
        if len(self.den) == 1:
            return n
        return f"({n})/({_poly_str(self.den, self.param)})"


def _poly_str(coeffs: Sequence, var: str) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        cs = format_scalar(c)
        if isinstance(c, GRat) and c.im != 0 and c.re != 0:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{cs}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


Scalar = Union[Fraction, GRat, RatFunc]


def limit_at(f, point):
    """Exact value of ``f`` at ``point`` after cancellation of common factors."""
    if not isinstance(f, RatFunc):
        return simplify(f)
    return f.subs(point)


def lowest_order(f):
    """Laurent order and leading coefficient of ``f`` at parameter = 0."""
    if not isinstance(f, RatFunc):
        if f == 0:
            raise ValueError("lowest_order of zero")
        return 0, simplify(f)
    if not f.num:
        raise ValueError("lowest_order of zero")
    vn, vd = _valuation(f.num), _valuation(f.den)
    return vn - vd, simplify(f.num[vn] / f.den[vd])


def is_zero(v) -> bool:
    return v == 0


def param_of(v):
    return v.param if isinstance(v, RatFunc) else None


# -- textual syntax -----------------------------------------------------------

def format_scalar(v) -> str:
    if isinstance(v, RatFunc):
        return str(v)
    if isinstance(v, GRat):
        if v.im == 0:
            return format_scalar(v.re)
        im = v.im
        ims = "i" if im == 1 else "-i" if im == -1 else f"{format_scalar(im)}*i"
        if v.re == 0:
            return ims
        sep = "" if ims.startswith("-") else "+"
        return f"{format_scalar(v.re)}{sep}{ims}"
    v = _rat(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*i)?\s*")


def parse_scalar(text: str):
    """Parse ``"p/q"``, ``"p/q+r/s*i"``, ``"i"``, ``"-3/2*i"`` ..."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    pos, re_part, im_part, seen = 0, Fraction(0), Fraction(0), False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"bad scalar syntax: {text!r}")
        if seen and not m.group(1):
            raise ValueError(f"bad scalar syntax: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            im_part += sign * mag
        else:
            re_part += sign * mag
        seen = True
        pos = m.end()
    return re_part if im_part == 0 else GRat(re_part, im_part)


# -- random sampling for identity testing ------------------------------------

def random_rational(rng: random.Random, bound: int = 50, avoid: Iterable = ()) -> Fraction:
    """Draw ``p/q`` with ``p, q`` uniform in ``[-bound, bound] \\ {0}``."""
    avoid = set(avoid)
    while True:
        p = rng.choice([k for k in range(-bound, bound + 1) if k])
        q = rng.randint(1, bound)
        v = Fraction(p, q)
        if v not in avoid:
            return v


def random_q(rng: random.Random, bound: int = 50) -> Fraction:
    """A base ``q`` away from 0 and +-1 (the only rational roots of unity)."""
    return random_rational(rng, bound, avoid=(1, -1))
