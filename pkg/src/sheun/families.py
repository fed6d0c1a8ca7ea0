"""Jacobi, Continuous Hahn and Big q-Jacobi polynomials from their terminating series.

Operator variables: ``x`` on the continuum and the linear grid, ``z`` on the
q-linear grid.  The Continuous Hahn polynomials are evaluated at ``i*x/2``;
their hypergeometric argument ``a + i*(i*x/2)`` is the real affine variable
``y = a - x/2``, which is also the eigen-variable of their recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial
from typing import Union

from .laurent import LaurentPoly
from .linalg import InconsistentSystem, SingularSystem, solve
from .operators import GridKind, GridOperator, continuum, linear, qlinear
from .report import Check, check
from .scalars import I, PoleError

HALF = Fraction(1, 2)

LOWER = "lower"
UPPER = "upper"


def poch(a, k: int):
    out = Fraction(1)
    for i in range(k):
        out = out * (a + i)
    return out


def qpoch(a, q, k: int):
    out = Fraction(1)
    for i in range(k):
        out = out * (1 - a * q ** i)
    return out


def _poch_poly(p: LaurentPoly, k: int) -> LaurentPoly:
    out = LaurentPoly.const(1, p.var)
    for i in range(k):
        out = out * (p + i)
    return out


def _qpoch_poly(p: LaurentPoly, q, k: int) -> LaurentPoly:
    out = LaurentPoly.const(1, p.var)
    for i in range(k):
        out = out * (1 - p * q ** i)
    return out


def _nonzero(value, what: str):
    if value == 0:
        raise PoleError(None, what)
    return value


@dataclass(frozen=True)
class Jacobi:
    alpha: object
    beta: object

    grid: GridKind = field(default_factory=continuum, compare=False)

    def series(self, n: int) -> LaurentPoly:
        # prefactor (alpha+1)_n / (alpha+1)_k = (alpha+1+k)_(n-k): no pole
        u = LaurentPoly({0: HALF, 1: -HALF}, "x")
        out = LaurentPoly({}, "x")
        s = self.alpha + self.beta + n + 1
        for k in range(n + 1):
            c = poch(-n, k) * poch(s, k) * poch(self.alpha + 1 + k, n - k) / factorial(k) / factorial(n)
            out = out + u ** k * c
        return out

    def operator(self) -> GridOperator:
        g = self.grid
        return GridOperator(g, {
            2: LaurentPoly({2: 1, 0: -1}, "x"),
            1: LaurentPoly({0: self.alpha - self.beta, 1: self.alpha + self.beta + 2}, "x"),
        })

    def eigenvalue(self, n: int):
        return n * (n + self.alpha + self.beta + 1)

    def shifted(self, da, db) -> "Jacobi":
        return replace(self, alpha=self.alpha + da, beta=self.beta + db)


@dataclass(frozen=True)
class ContinuousHahn:
    a: object
    b: object
    c: object
    d: object
    normalization: str = LOWER

    grid: GridKind = field(default_factory=linear, compare=False)

    @property
    def s(self):
        return self.a + self.b + self.c + self.d

    def _lower_in_y(self, n: int) -> LaurentPoly:
        """``i^n (a+c)_n (a+d)_n / n! * 3F2(-n, n+s-1, y; a+c, a+d; 1)`` as a polynomial in y."""
        y = LaurentPoly.monomial(1, 1, "y")
        ac, ad = self.a + self.c, self.a + self.d
        out = LaurentPoly({}, "y")
        for k in range(n + 1):
            c = poch(-n, k) * poch(n + self.s - 1, k) * poch(ac + k, n - k) * poch(ad + k, n - k)
            out = out + _poch_poly(y, k) * (c / factorial(k) / factorial(n))
        return out * I ** n

    def upper_scale(self, n: int):
        """Factor turning the lowercase polynomial into the terminating series itself."""
        den = I ** n * poch(self.a + self.c, n) * poch(self.a + self.d, n)
        _nonzero(den, f"(a+c)_{n}(a+d)_{n}")
        return Fraction(factorial(n)) / den

    def in_y(self, n: int, normalization: str | None = None) -> LaurentPoly:
        p = self._lower_in_y(n)
        if (normalization or self.normalization) == UPPER:
            p = p * self.upper_scale(n)
        return p

    def series(self, n: int, normalization: str | None = None) -> LaurentPoly:
        """Polynomial in the operator variable ``x`` (argument ``i*x/2``)."""
        return self.in_y(n, normalization).affine(-HALF, self.a, "x")

    def operator(self) -> GridOperator:
        # B(i x/2) = (c + x/2)(d + x/2), D(i x/2) = (a - x/2)(b - x/2)
        def lin(c0, c1):
            return LaurentPoly({0: c0, 1: c1}, "x")

        Bx = lin(self.c, HALF) * lin(self.d, HALF)
        Dx = lin(self.a, -HALF) * lin(self.b, -HALF)
        return GridOperator(self.grid, {2: Bx, 0: -(Bx + Dx), -2: Dx})

    def eigenvalue(self, n: int):
        return n * (n + self.s - 1)

    def shifted(self, da, db, dc, dd) -> "ContinuousHahn":
        return replace(self, a=self.a + da, b=self.b + db, c=self.c + dc, d=self.d + dd)


@dataclass(frozen=True)
class BigQJacobi:
    """Base ``q~ = q^2`` where ``q`` is the base of the q-linear grid."""

    alpha: object
    beta: object
    gamma: object
    q: object

    @property
    def grid(self) -> GridKind:
        return qlinear(self.q)

    @property
    def qt(self):
        return self.q * self.q

    def series(self, n: int) -> LaurentPoly:
        z = LaurentPoly.monomial(1, 1, "z")
        qt = self.qt
        out = LaurentPoly({}, "z")
        for k in range(n + 1):
            den = qpoch(self.alpha * qt, qt, k) * qpoch(self.gamma * qt, qt, k) * qpoch(qt, qt, k)
            _nonzero(den, f"(alpha q~, gamma q~, q~; q~)_{k}")
            c = qpoch(qt ** -n, qt, k) * qpoch(self.alpha * self.beta * qt ** (n + 1), qt, k) * qt ** k
            out = out + _qpoch_poly(z, qt, k) * (c / den)
        return out

    def operator(self) -> GridOperator:
        qt = self.qt
        z = LaurentPoly.monomial(1, 1, "z")
        zi2 = LaurentPoly.monomial(-2, 1, "z")
        Bz = zi2 * (z - 1) * (z * self.beta - self.gamma) * (self.alpha * qt)
        Dz = zi2 * (z - self.alpha * qt) * (z - self.gamma * qt)
        return GridOperator(self.grid, {2: Bz, 0: -(Bz + Dz), -2: Dz})

    def eigenvalue(self, n: int):
        qt = self.qt
        return (qt ** -n - 1) * (1 - self.alpha * self.beta * qt ** (n + 1))


def phi(a, b, c, d, q, n: int) -> LaurentPoly:
    """``P_n(a z; a c/q~, b d/q~, a d/q~; q~)`` with ``q~ = q^2``."""
    qt = q * q
    fam = BigQJacobi(a * c / qt, b * d / qt, a * d / qt, q)
    return fam.series(n).scale(a)


Family = Union[Jacobi, ContinuousHahn, BigQJacobi]


@dataclass(frozen=True)
class OPInstance:
    family: Family
    n: int
    poly: LaurentPoly


def construct(family: Family, n: int) -> OPInstance:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return OPInstance(family, n, family.series(n))


def verify_eigen(family: Family, n: int) -> Check:
    p = family.series(n)
    residual = family.operator().apply(p) - p * family.eigenvalue(n)
    name = f"{type(family).__name__} n={n}: D P_n = lambda_n P_n"
    return check(name, "bispectral eigenvalue equation", residual.is_zero() and p.degree() == n, residual)


# -- recurrence oracle -------------------------------------------------------


@dataclass(frozen=True)
class Recurrence:
    """``v P_n = A P_(n+1) + B P_n + C P_(n-1)`` in the recurrence variable ``v``."""

    A: object
    B: object
    C: object


class DegenerateRecurrence(ValueError):
    pass


def recurrence_polys(family: Family, n: int):
    """``(variable, P_(n-1), P_n, P_(n+1))`` in the normalization the recurrence is stated for."""
    if isinstance(family, ContinuousHahn):
        polys = [family.in_y(k, UPPER) if k >= 0 else LaurentPoly({}, "y") for k in (n - 1, n, n + 1)]
        return (LaurentPoly.monomial(1, 1, "y"), *polys)
    var = "z" if isinstance(family, BigQJacobi) else "x"
    polys = [family.series(k) if k >= 0 else LaurentPoly({}, var) for k in (n - 1, n, n + 1)]
    return (LaurentPoly.monomial(1, 1, var), *polys)


def recurrence_oracle(family: Family, n: int) -> Recurrence:
    """Solve the three-term identity for ``A_n, B_n, C_n`` by coefficient matching."""
    v, pm, p0, pp = recurrence_polys(family, n)
    lhs = v * p0
    k = 2 if n == 0 else 3
    # the top k coefficient rows are triangular; the rest are checked on the residual
    rows = [[pp[e], p0[e], pm[e]][:k] for e in range(n + 1, n + 1 - k, -1)]
    rhs = [lhs[e] for e in range(n + 1, n + 1 - k, -1)]
    try:
        sol = solve(rows, rhs)
    except (InconsistentSystem, SingularSystem) as exc:
        raise DegenerateRecurrence(f"n={n}: {exc}") from exc
    if n == 0:
        sol = sol + [Fraction(0)]
    residual = lhs - pp * sol[0] - p0 * sol[1] - pm * sol[2]
    if not residual.is_zero():
        raise DegenerateRecurrence(f"n={n}: no three-term relation, residual {residual}")
    return Recurrence(*sol)


def closed_form_diagonal(family: Family, rec: Recurrence):
    """Diagonal coefficient predicted by the closed-form recurrence, if any."""
    if isinstance(family, ContinuousHahn):
        return -(rec.A + rec.C)
    if isinstance(family, BigQJacobi):
        return 1 - (rec.A + rec.C)
    return None


def verify_recurrence(family: Family, n: int) -> Check:
    rec = recurrence_oracle(family, n)
    v, pm, p0, pp = recurrence_polys(family, n)
    residual = v * p0 - pp * rec.A - p0 * rec.B - pm * rec.C
    want = closed_form_diagonal(family, rec)
    ok = residual.is_zero() and (want is None or want == rec.B)
    return check(f"{type(family).__name__} n={n}: three-term recurrence", "three-term recurrence", ok,
                 f"residual {residual}, diagonal {rec.B} vs {want}")


__all__ = [
    "Jacobi", "ContinuousHahn", "BigQJacobi", "OPInstance", "construct", "verify_eigen", "phi",
    "Recurrence", "recurrence_oracle", "verify_recurrence", "DegenerateRecurrence", "poch", "qpoch",
    "LOWER", "UPPER",
]
