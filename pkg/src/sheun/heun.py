"""Heun operators as quadratic combinations of S-Heun generators, and their factorization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import sympy

from .generators import SHeunBasis, build_basis
from .laurent import LaurentPoly
from .linalg import InconsistentSystem, nullspace, row_reduce, solve
from .operators import CONTINUUM, LINEAR, QLINEAR, GridKind, GridOperator, degree_profile
from .report import Check, check
from .scalars import RatFunc

HALF = Fraction(1, 2)

ALPHA_WORDS = (("L", "L"), ("L", "M1"), ("L", "M2"), ("M1", "M1"), ("M1", "M2"), ("M2", "M2"))
BETA_WORDS = (("M1", "R2"), ("M2", "R1"), ("M2", "R2"))
STABILIZING = ("L", "M1", "M2")
GENERAL = ("L", "M1", "M2", "R1", "R2")


@dataclass(frozen=True)
class HeunCombo:
    grid: GridKind
    alpha: Tuple[object, ...]
    beta: Tuple[object, ...]

    def __post_init__(self):
        if len(self.alpha) != 6 or len(self.beta) != 3:
            raise ValueError("a Heun combination has six alpha and three beta coefficients")

    @classmethod
    def unit(cls, grid: GridKind, name: str) -> "HeunCombo":
        """All coefficients zero except ``name`` (``alpha1`` .. ``alpha6``, ``beta1`` .. ``beta3``)."""
        a, b = [Fraction(0)] * 6, [Fraction(0)] * 3
        slot = int(name[-1]) - 1
        (a if name.startswith("alpha") else b)[slot] = Fraction(1)
        return cls(grid, tuple(a), tuple(b))


@dataclass(frozen=True)
class HeunForm:
    """Continuum: ``Q3 d^2 + Q2 d + Q1``.  Shift grids: ``A1 T+^2 + A0 + A2 T-^2``."""

    grid: GridKind
    parts: Dict[str, LaurentPoly]

    def __getitem__(self, name):
        return self.parts[name]


FORM_WORDS = {CONTINUUM: {"Q3": 2, "Q2": 1, "Q1": 0}, LINEAR: {"A1": 2, "A0": 0, "A2": -2}}
FORM_WORDS[QLINEAR] = FORM_WORDS[LINEAR]


class HeunShapeError(ValueError):
    def __init__(self, word: int, coeff):
        super().__init__(f"word {word} with coefficient {coeff} is not allowed in a Heun operator")
        self.word = word


def assemble_operator(combo: HeunCombo, basis: SHeunBasis | None = None) -> GridOperator:
    b = basis or build_basis(combo.grid)
    W = GridOperator.zero(combo.grid)
    for c, (x, y) in zip(combo.alpha + combo.beta, ALPHA_WORDS + BETA_WORDS):
        if c != 0:
            W = W + c * (b[x] * b[y])
    return W


def extract_form(W: GridOperator) -> HeunForm:
    words = FORM_WORDS[W.grid.kind]
    allowed = set(words.values())
    for k, c in W.terms.items():
        if k not in allowed:
            raise HeunShapeError(k, c)
    var = W.grid.var
    return HeunForm(W.grid, {n: W.terms.get(k, LaurentPoly({}, var)) for n, k in words.items()})


def assemble(combo: HeunCombo, basis: SHeunBasis | None = None) -> Tuple[GridOperator, HeunForm]:
    W = assemble_operator(combo, basis)
    return W, extract_form(W)


def closed_form(combo: HeunCombo) -> HeunForm:
    """The closed-form coefficient map of a Heun combination."""
    a1, a2, a3, a4, a5, a6 = combo.alpha
    b1, b2, b3 = combo.beta
    g = combo.grid
    if g.kind == CONTINUUM:
        return HeunForm(g, {
            "Q3": LaurentPoly({0: a1, 1: a3, 2: a6, 3: b3}, "x"),
            "Q2": LaurentPoly({0: a2 + a3, 1: a5 + a6, 2: b1 + b2 + 2 * b3}, "x"),
            "Q1": LaurentPoly({0: a4, 1: b2}, "x"),
        })
    if g.kind == LINEAR:
        q4 = Fraction(1, 4)
        A1 = LaurentPoly({
            3: -2 * b2, 2: a6 - 3 * b2 + b3, 1: a3 + a5 + a6 + b1 - b2 + b3,
            0: a1 + a2 + a3 + a4 + a5 + b1}, "x") * q4
        A2 = LaurentPoly({
            3: -2 * b2, 2: a6 + 3 * b2 - b3, 1: a3 - a5 - a6 + b1 - b2 + b3,
            0: a1 - a2 - a3 + a4 + a5 - b1}, "x") * q4
        A0 = LaurentPoly({1: b1 + b2 + b3, 0: a4}, "x") - (A1 + A2)
        return HeunForm(g, {"A1": A1, "A0": A0, "A2": A2})
    q = g.q
    pref = 1 / (1 - q ** 2) ** 2
    A1 = LaurentPoly({
        -2: q * a1, -1: q ** 2 * a3 - q * a2, 0: q ** 2 * a6 - q * a5 + a4,
        1: q ** 3 * b3 - q ** 2 * b1 - q ** 2 * b2}, "z") * pref
    A2 = LaurentPoly({
        -2: q ** 3 * a1, -1: q ** 2 * a3 - q ** 3 * a2, 0: q ** 2 * a6 - q ** 3 * a5 + q ** 4 * a4,
        1: q * b3 - q ** 2 * b1 - q ** 2 * b2}, "z") * pref
    A0 = LaurentPoly({1: b2, 0: a4}, "z") - (A1 + A2)
    return HeunForm(g, {"A1": A1, "A0": A0, "A2": A2})


def verify_assembly(combo: HeunCombo, basis: SHeunBasis | None = None) -> Check:
    _, form = assemble(combo, basis)
    want = closed_form(combo)
    bad = [n for n in form.parts if form[n] != want[n]]
    witness = "; ".join(f"{n}: {form[n]} vs {want[n]}" for n in bad)
    return check(f"{combo.grid.kind}: Heun coefficient map", "Heun assembly", not bad, witness)


def _is_poly_upto(p: LaurentPoly, deg: int) -> bool:
    return p.is_zero() or (p.valuation() >= 0 and p.degree() <= deg)


def verify_structure(form: HeunForm, W: GridOperator | None = None, nmax: int = 10) -> List[Check]:
    g = form.grid
    out = []
    if g.kind == CONTINUUM:
        for name, deg in (("Q3", 3), ("Q2", 2), ("Q1", 1)):
            out.append(check(f"deg {name} <= {deg}", "Heun shape", _is_poly_upto(form[name], deg), form[name]))
    else:
        A1, A0, A2 = form["A1"], form["A0"], form["A2"]
        total = A0 + A1 + A2
        out.append(check("A0 + A1 + A2 is linear", "Heun shape", _is_poly_upto(total, 1), total))
        if g.kind == LINEAR:
            out.append(check("A1, A2 cubic", "Heun shape", _is_poly_upto(A1, 3) and _is_poly_upto(A2, 3), (A1, A2)))
            out.append(check("A1, A2 share the cubic coefficient", "Heun shape", A1[3] == A2[3], (A1[3], A2[3])))
        else:
            z2 = LaurentPoly.monomial(2, 1, "z")
            pi3 = A1 * z2
            rest = A2 * z2 - pi3 * g.q ** 2
            out.append(check("z^2 A1 is a cubic", "Heun shape", _is_poly_upto(pi3, 3), pi3))
            out.append(check("z^2 A2 - q~ z^2 A1 = z pi2", "Heun shape",
                             rest.is_zero() or (rest.valuation() >= 1 and rest.degree() <= 3), rest))
    if W is not None:
        prof = degree_profile(W, nmax)
        out.append(check(f"deg W x^n <= n+1 for n <= {nmax}", "Heun shape", all(d <= 1 for d in prof), prof))
    return out


# -- factorization --------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    xi: Tuple[object, ...]
    eta: Tuple[object, ...]
    kappa: object

    def recompose(self, basis: SHeunBasis) -> GridOperator:
        S = _combo(basis, STABILIZING, self.xi)
        T = _combo(basis, GENERAL, self.eta)
        return S * T + basis.identity() * self.kappa


class NoFactorization(ValueError):
    pass


def _combo(basis: SHeunBasis, names: Sequence[str], coeffs: Sequence) -> GridOperator:
    out = GridOperator.zero(basis.grid)
    for n, c in zip(names, coeffs):
        if c != 0:
            out = out + c * basis[n]
    return out


def _vec(op: GridOperator) -> Dict[Tuple[int, int], object]:
    return {(k, e): c for k, p in op.terms.items() for e, c in p.coeffs.items()}


def _linear_system(columns: Sequence[GridOperator], target: GridOperator):
    vecs = [_vec(c) for c in columns]
    tv = _vec(target)
    keys = sorted(set(tv).union(*vecs))
    return [[v.get(k, 0) for v in vecs] for k in keys], [tv.get(k, 0) for k in keys]


def rational_roots(coeffs: Sequence) -> List[Fraction]:
    """Distinct rational roots of ``sum coeffs[i] u^i``, ascending."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    u = sympy.Symbol("u")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(cs)], u, domain="QQ")
    roots = [Fraction(int(r.p), int(r.q)) for r in poly.ground_roots()]
    return sorted(set(roots))


def _word_conditions(basis: SHeunBasis, W: GridOperator, top: bool):
    """Linear conditions on xi from one extreme word, one list per admissible branch."""
    pick = max if top else min
    stab = [basis[n] for n in STABILIZING]
    gen = [basis[n] for n in GENERAL]
    sw = pick(k for X in stab for k in X.terms)
    tw = pick(k for Y in gen for k in Y.terms)
    s_parts = [X.terms.get(sw, LaurentPoly({}, W.grid.var)) for X in stab]
    s_exps = sorted({e for p in s_parts for e in p.coeffs})
    t_exps = sorted({e for Y in gen for e in Y.terms.get(tw, LaurentPoly({})).coeffs})
    lo, hi = s_exps[0], s_exps[-1]
    lo_w, hi_w = lo + t_exps[0], hi + t_exps[-1]
    w = W.terms.get(sw + tw)
    vanish = [[p[e] for p in s_parts] for e in s_exps]
    if w is None or w.is_zero():
        return [vanish, []]
    if w.valuation() < lo_w or w.degree() > hi_w:
        raise NoFactorization(f"word {sw + tw} coefficient {w} exceeds the product range")
    conds = []
    for r in rational_roots([w[e] for e in range(lo_w, hi_w + 1)]):
        conds.append([[sum(p[e] * r ** (e - lo) for e in s_exps) for p in s_parts]])
    if w[hi_w] == 0:
        conds.append([[p[hi] for p in s_parts]])
    return conds


def _gauge(xi: Sequence) -> Tuple[object, ...]:
    lead = next(c for c in xi if c != 0)
    return tuple(Fraction(c) / lead if not isinstance(c, RatFunc) else c / lead for c in xi)


def _try_point(basis: SHeunBasis, W: GridOperator, xi: Sequence) -> Optional[Factorization]:
    if all(c == 0 for c in xi):
        return None
    xi = _gauge(xi)
    S = _combo(basis, STABILIZING, xi)
    cols = [S * basis[n] for n in GENERAL] + [basis.identity()]
    rows, rhs = _linear_system(cols, W)
    try:
        sol = solve(rows, rhs, unique=False)
    except InconsistentSystem:
        return None
    f = Factorization(xi, tuple(sol[:5]), sol[5])
    return f if f.recompose(basis) == W else None


def _special_values(entries: Iterable) -> List[Fraction]:
    out = set()
    for e in entries:
        if isinstance(e, RatFunc):
            out.update(rational_roots(e.num))
            out.update(rational_roots(e.den))
    return sorted(out)


def _line_points(basis: SHeunBasis, W: GridOperator, va, vb) -> List[Tuple[object, ...]]:
    """Candidate points on ``xi = va + u vb``: exact elimination over ``Q(u)``."""
    u = RatFunc.symbol("u")
    xi = [a + u * b for a, b in zip(va, vb)]
    S = _combo(basis, STABILIZING, xi)
    cols = [S * basis[n] for n in GENERAL] + [basis.identity()]
    rows, rhs = _linear_system(cols, W)
    aug = [r + [b] for r, b in zip(rows, rhs)]
    pivots_vals: list = []
    pivots, _ = row_reduce(aug, 6, pivots_vals)
    residuals = [aug[i][6] for i in range(len(pivots), len(aug)) if aug[i][6] != 0]
    special = _special_values(pivots_vals + [e for row in aug for e in row])
    values: List[Fraction] = []
    if residuals:
        for r in residuals:
            if isinstance(r, RatFunc):
                values.extend(rational_roots(r.num))
    else:
        values.append(next(Fraction(k) for k in range(len(special) + 1) if Fraction(k) not in special))
    values.extend(special)
    seen, pts = set(), []
    for v in values:
        if v not in seen:
            seen.add(v)
            pts.append(tuple(a + v * b for a, b in zip(va, vb)))
    pts.append(tuple(vb))
    return pts


def iter_factorizations(W: GridOperator, basis: SHeunBasis | None = None) -> Iterator[Factorization]:
    """Every factorization the root conditions reach, in the order ``factorize`` tries them."""
    basis = basis or build_basis(W.grid)
    top = _word_conditions(basis, W, True)
    bottom = [[]] if W.grid.kind == CONTINUUM else _word_conditions(basis, W, False)
    tried = set()
    for ct in top:
        for cb in bottom:
            null = nullspace(ct + cb, 3) if ct + cb else [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
            if len(null) == 1:
                points = [tuple(null[0])]
            elif len(null) == 2:
                points = _line_points(basis, W, null[0], null[1])
            else:
                points = [tuple(v) for v in null]
            for p in points:
                if all(c == 0 for c in p):
                    continue
                key = _gauge(p)
                if key in tried:
                    continue
                tried.add(key)
                f = _try_point(basis, W, p)
                if f is not None:
                    yield f


def factorize(W: GridOperator, basis: SHeunBasis | None = None) -> Factorization:
    """``W = (xi . (L, M1, M2)) (eta . (L, M1, M2, R1, R2)) + kappa`` over the rationals.

    The extreme shift words of ``xi . (L, M1, M2)`` must vanish at a root of the
    corresponding extreme words of ``W``; each admissible choice fixes ``xi`` up
    to at most one parameter, which is eliminated exactly.  ``xi`` is gauge-fixed
    by setting its first nonzero slot, in the order ``L, M1, M2``, to one.
    """
    for f in iter_factorizations(W, basis):
        return f
    raise NoFactorization("no rational factorization into stabilizing and general S-Heun factors")


def verify_factorization(W: GridOperator, basis: SHeunBasis | None = None) -> Check:
    basis = basis or build_basis(W.grid)
    try:
        f = factorize(W, basis)
    except NoFactorization as exc:
        return check(f"{W.grid.kind}: factorization", "Heun factorization", False, exc)
    return check(f"{W.grid.kind}: factorization", "Heun factorization", f.recompose(basis) == W, f)


__all__ = [
    "HeunCombo", "HeunForm", "HeunShapeError", "assemble", "assemble_operator", "extract_form",
    "closed_form", "verify_assembly", "verify_structure", "Factorization", "NoFactorization",
    "factorize", "iter_factorizations", "verify_factorization", "rational_roots",
]
