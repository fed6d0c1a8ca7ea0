"""General S-Heun operators, the five-generator bases and their quadratic relations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .laurent import LaurentPoly
from .linalg import InconsistentSystem, rank, solve
from .operators import (
    CONTINUUM, LINEAR, QLINEAR, GridKind, GridOperator, continuum, degree_profile, monomial,
)
from .report import Check, check
from .scalars import limit_at

NAMES = ("L", "M1", "M2", "R1", "R2")


@dataclass(frozen=True)
class SParams:
    """Raising-condition data.

    On the discrete grids ``S*1 = a00 + a01*v`` and ``S*v`` is fixed by
    ``a10, a11, a12``.  On the continuum ``a00 + a01*x`` is the zeroth-order
    coefficient and ``a10 + a11*x + a12*x^2`` multiplies ``d/dx``.
    """

    a00: object = 0
    a01: object = 0
    a10: object = 0
    a11: object = 0
    a12: object = 0

    def as_tuple(self):
        return (self.a00, self.a01, self.a10, self.a11, self.a12)


@dataclass(frozen=True)
class SHeunBasis:
    grid: GridKind
    L: GridOperator
    M1: GridOperator
    M2: GridOperator
    R1: GridOperator
    R2: GridOperator

    def __getitem__(self, name: str) -> GridOperator:
        if name not in NAMES:
            raise KeyError(name)
        return getattr(self, name)

    def ops(self) -> Tuple[GridOperator, ...]:
        return tuple(self[n] for n in NAMES)

    def named(self) -> Dict[str, GridOperator]:
        return {n: self[n] for n in NAMES}

    def identity(self) -> GridOperator:
        return GridOperator.identity(self.grid)

    def combo(self, coeffs: Sequence) -> GridOperator:
        out = GridOperator.zero(self.grid)
        for c, op in zip(coeffs, self.ops()):
            if c != 0:
                out = out + c * op
        return out


def _poly(grid: GridKind, coeffs: Dict[int, object]) -> LaurentPoly:
    return LaurentPoly(coeffs, grid.var)


def build_general_S(grid: GridKind, p: SParams) -> GridOperator:
    a00, a01, a10, a11, a12 = p.as_tuple()
    h = Fraction(1, 2)
    if grid.kind == LINEAR:
        A1 = _poly(grid, {2: h * (-a01 + a12), 1: h * (-a00 + a01 + a11), 0: h * (a00 + a10)})
        A2 = _poly(grid, {2: h * (a01 - a12), 1: h * (a00 + a01 - a11), 0: h * (a00 - a10)})
        return GridOperator(grid, {1: A1, -1: A2})
    if grid.kind == QLINEAR:
        q = grid.q
        w = 1 / (q - 1 / q)

        def hat_A(qq):
            return _poly(grid, {-1: w * a10, 0: w * (a11 - a00 / qq), 1: w * (a12 - a01 / qq)})

        # the second coefficient is the first with q inverted, including the prefactor
        A1 = hat_A(q)
        A2 = hat_A(1 / q) * (-1)
        return GridOperator(grid, {1: A1, -1: A2})
    return GridOperator(grid, {1: _poly(grid, {0: a10, 1: a11, 2: a12}), 0: _poly(grid, {0: a00, 1: a01})})


def build_basis(grid: GridKind) -> SHeunBasis:
    v = LaurentPoly.monomial(1, 1, grid.var)
    one = LaurentPoly.const(1, grid.var)
    if grid.kind == LINEAR:
        h = Fraction(1, 2)
        L = GridOperator(grid, {1: one * h, -1: one * -h})
        M1 = GridOperator(grid, {1: one * h, -1: one * h})
        M2 = v * L
        R1 = GridOperator(grid, {1: v * (one - v * 2) * h, -1: v * (one + v * 2) * h})
        R2 = v * M1
        return SHeunBasis(grid, L, M1, M2, R1, R2)
    if grid.kind == QLINEAR:
        q = grid.q
        w = 1 / (q - 1 / q)
        M2 = GridOperator(grid, {1: one * w, -1: one * -w})
        M1 = GridOperator(grid, {1: one * (-w / q), -1: one * (w * q)})
        L = LaurentPoly.monomial(-1, 1, grid.var) * M2
        return SHeunBasis(grid, L, M1, M2, v * M1, v * M2)
    d = GridOperator.word(grid, 1)
    return SHeunBasis(
        grid,
        d,
        GridOperator.identity(grid),
        v * d,
        GridOperator.mult(grid, v),
        (v * v) * d,
    )


class OutsideSpan(ValueError):
    def __init__(self, residual: GridOperator, witness_n):
        super().__init__(f"operator outside the S-Heun span; residual {residual} nonzero on v^{witness_n}")
        self.residual = residual
        self.witness_n = witness_n


def _coefficient_system(ops: Sequence[GridOperator], target: GridOperator):
    keys = set()
    for op in list(ops) + [target]:
        for k, c in op.terms.items():
            keys.update((k, e) for e in c.coeffs)
    keys = sorted(keys)
    matrix = [[op.terms[k][e] if k in op.terms else Fraction(0) for op in ops] for k, e in keys]
    rhs = [target.terms[k][e] if k in target.terms else Fraction(0) for k, e in keys]
    return matrix, rhs


def first_nonzero_monomial(op: GridOperator, nmax: int = 16):
    for n in range(nmax + 1):
        if not op.apply(monomial(op.grid, n)).is_zero():
            return n
    return None


def decompose(S: GridOperator, basis: SHeunBasis) -> Tuple[object, ...]:
    """Coefficients ``(c_L, c_M1, c_M2, c_R1, c_R2)`` with ``S = sum c_i * basis_i``."""
    matrix, rhs = _coefficient_system(basis.ops(), S)
    try:
        coeffs = solve(matrix, rhs)
    except InconsistentSystem:
        best = solve(matrix, rhs, unique=False, check=False)
        residual = S - basis.combo(best)
        raise OutsideSpan(residual, first_nonzero_monomial(residual)) from None
    return tuple(coeffs)


def sparams_of(S: GridOperator) -> SParams:
    """Raising-condition data of an S-Heun operator: the inverse of ``build_general_S``."""
    units = [build_general_S(S.grid, SParams(*[int(i == j) for j in range(5)])) for i in range(5)]
    matrix, rhs = _coefficient_system(units, S)
    return SParams(*solve(matrix, rhs))


def is_independent(ops: Sequence[GridOperator]) -> bool:
    matrix, _ = _coefficient_system(ops, GridOperator.zero(ops[0].grid))
    return rank(matrix) == len(ops)


def raising_ok(op: GridOperator, nmax: int = 12) -> bool:
    return all(d <= 1 for d in degree_profile(op, nmax))


# -- formal quadratic expressions in the generators -------------------------------

Word = Tuple[str, ...]


class QuadExpr:
    """Linear combination of words in ``L, M1, M2, R1, R2`` (the empty word is 1)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Word, object] | None = None):
        self.terms = {tuple(w): c for w, c in (terms or {}).items() if c != 0}

    def __add__(self, other: "QuadExpr") -> "QuadExpr":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return QuadExpr(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c) -> "QuadExpr":
        return QuadExpr({w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, QuadExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def evaluate(self, basis: SHeunBasis) -> GridOperator:
        out = GridOperator.zero(basis.grid)
        for w, c in self.terms.items():
            op = basis.identity()
            for name in w:
                op = op * basis[name]
            out = out + c * op
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), [NAMES.index(n) for n in kv[0]]))
        return " + ".join(f"({c})*{''.join(w) or '1'}" for w, c in items)


_REL_TOKEN = re.compile(r"\s*(\[2\](?:\^\d+)?|\d+|M1|M2|R1|R2|L|[-+=])")


def parse_quad(text: str, qnum2=None) -> QuadExpr:
    """Parse ``"2 M2 M2 - M1 M2 + [2] L M1"``; ``[2]`` denotes ``q + 1/q``."""
    toks, pos = [], 0
    while pos < len(text.rstrip()):
        m = _REL_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad relation text at {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
    out: Dict[Word, object] = {}
    sign, coeff, word, started = 1, Fraction(1), [], False

    def flush():
        if started:
            w = tuple(word)
            out[w] = out.get(w, 0) + sign * coeff

    for tok in toks:
        if tok in "+-":
            flush()
            sign, coeff, word, started = (1 if tok == "+" else -1), Fraction(1), [], False
        elif tok.startswith("[2]"):
            if qnum2 is None:
                raise ValueError("q-number [2] outside the q-linear grid")
            exp = int(tok[4:]) if "^" in tok else 1
            coeff, started = coeff * qnum2 ** exp, True
        elif tok.isdigit():
            coeff, started = coeff * int(tok), True
        else:
            word.append(tok)
            started = True
    flush()
    return QuadExpr(out)


@dataclass(frozen=True)
class Relation:
    text: str
    lhs: QuadExpr
    rhs: QuadExpr

    def rule(self) -> Tuple[Word, QuadExpr]:
        """Orient ``c * w = rhs`` as ``w -> rhs / c``."""
        ((w, c),) = self.lhs.terms.items()
        return w, self.rhs * (Fraction(1) / c)


CONTINUUM_RELATIONS = (
    "M1 L = L M1",
    "M2 L = L M2 - M1 L",
    "M2 M1 = M1 M2",
    "M1 M1 = 1",
    "L R1 = 1 + M1 M2",
    "L R2 = M2 M2 + M1 M2",
    "R1 L = M1 M2",
    "R2 L = M2 M2 - M1 M2",
    "R2 R1 = R1 R2 + R1 R1",
    "R1 M1 = M2 R1 - M1 R2",
    "R2 M1 = M1 R2",
    "R1 M2 = M1 R2",
    "R2 M2 = M2 R2 - M1 R2",
    "M1 R1 = M2 R1 - M1 R2",
)

LINEAR_RELATIONS = (
    "M1 L = L M1",
    "M2 L = L M2 - L M1",
    "M2 M1 = M1 M2 - L L",
    "M1 M1 = 1 + L L",
    "L R1 = 1 - 2 M2 M2 - M1 M2",
    "L R2 = 1 + M1 M2",
    "R1 L = 3 M1 M2 - 3 L L - 2 M2 M2",
    "R2 L = M1 M2 - L L",
    "R2 R1 = 2 R2 R2 + R1 R2 - 4 M2 M2",
    "R1 M1 = 3 M1 R2 - 2 M2 R2 - 3 L M1",
    "R1 M2 = 2 M2 R2 - 3 M1 R2 + 3 L M2 + M2 R1",
    "R2 M1 = M1 R2 - L M1",
    "R2 M2 = M2 R2 - M1 R2 + L M2",
    "M1 R1 = 3 M1 R2 - 2 M2 R2 - 4 L M2",
)

QLINEAR_RELATIONS = (
    "M1 L = [2] L M1 + L M2",
    "M2 L = - L M1",
    "M2 M1 = M1 M2",
    "[2] M1 M2 = 1 - M1 M1 - M2 M2",
    "L R1 = 1 - M2 M2",
    "L R2 = [2] M2 M2 + M1 M2",
    "R1 L = 1 - M1 M1",
    "R2 L = - M1 M2",
    "[2] R1 R2 = - R1 R1 - R2 R2",
    "R1 M1 = - [2]^2 M1 R2 - [2] M2 R2 + M2 R1",
    "R1 M2 = [2] M1 R2 + M2 R2",
    "R2 M1 = [2] M1 R2 + M2 R2",
    "R2 M2 = - M1 R2",
    "M1 R1 = - [2] M1 R2 - M2 R2",
)

_RELATION_TEXT = {CONTINUUM: CONTINUUM_RELATIONS, LINEAR: LINEAR_RELATIONS, QLINEAR: QLINEAR_RELATIONS}


def qnum2(grid: GridKind):
    return grid.q + 1 / grid.q if grid.kind == QLINEAR else None


def relations(grid: GridKind) -> List[Relation]:
    out = []
    for text in _RELATION_TEXT[grid.kind]:
        lhs, rhs = text.split("=")
        out.append(Relation(text, parse_quad(lhs, qnum2(grid)), parse_quad(rhs, qnum2(grid))))
    return out


def verify_appendix(grid: GridKind) -> List[Check]:
    basis = build_basis(grid)
    checks = []
    for rel in relations(grid):
        diff = rel.lhs.evaluate(basis) - rel.rhs.evaluate(basis)
        checks.append(check(f"{grid.kind}: {rel.text}", f"reordering relations/{grid.kind}", diff.is_zero(), diff))
    return checks


def rewrite_rules(grid: GridKind) -> Dict[Word, QuadExpr]:
    return dict(r.rule() for r in relations(grid))


def retained_words(grid: GridKind) -> List[Word]:
    """Quadratic words that no rule rewrites, plus the empty word."""
    rules = rewrite_rules(grid)
    words = [(a, b) for a in NAMES for b in NAMES if (a, b) not in rules]
    return [()] + words


MAX_REWRITE_PASSES = 16


def normal_order(expr: QuadExpr, grid: GridKind) -> QuadExpr:
    """Rewrite every quadratic word to retained words by exhaustive rule application."""
    rules = rewrite_rules(grid)
    cur = expr
    for _ in range(MAX_REWRITE_PASSES):
        nxt = QuadExpr()
        changed = False
        for w, c in cur.terms.items():
            if w in rules:
                nxt = nxt + rules[w] * c
                changed = True
            else:
                nxt = nxt + QuadExpr({w: c})
        if not changed:
            return nxt
        cur = nxt
    raise RuntimeError("rewrite system did not terminate")


def normal_form_is_canonical(grid: GridKind) -> bool:
    """The retained words are linearly independent operators, so normal forms are unique."""
    basis = build_basis(grid)
    return is_independent([QuadExpr({w: 1}).evaluate(basis) for w in retained_words(grid)])


Q_TO_1_TARGETS = {
    "L": {"L": 1},
    "M1": {"M1": 1, "M2": -1},
    "M2": {"M2": 1},
    "R1": {"R1": 1, "R2": -1},
    "R2": {"R2": 1},
}


def verify_q_to_1(basis_q: SHeunBasis, basis_cont: SHeunBasis, nmax: int = 8) -> List[Check]:
    checks = []
    for name, target in Q_TO_1_TARGETS.items():
        want = GridOperator.zero(basis_cont.grid)
        for k, c in target.items():
            want = want + c * basis_cont[k]
        ok, witness = True, None
        for n in range(nmax + 1):
            img = basis_q[name].apply(monomial(basis_q.grid, n))
            try:
                lim = img.map_coeffs(lambda c: limit_at(c, 1)).with_var(basis_cont.grid.var)
            except ArithmeticError as exc:
                ok, witness = False, f"n={n}: {exc}"
                break
            expect = want.apply(monomial(basis_cont.grid, n))
            if lim != expect:
                ok, witness = False, f"n={n}: limit {lim} vs {expect}"
                break
        label = " ".join(f"{v:+}{k}" for k, v in target.items())
        checks.append(check(f"q->1: {name} -> {label}", "q->1 generator limits", ok, witness))
    return checks


__all__ = [
    "NAMES", "SParams", "SHeunBasis", "build_general_S", "sparams_of", "build_basis", "decompose", "OutsideSpan",
    "QuadExpr", "Relation", "relations", "verify_appendix", "normal_order", "rewrite_rules",
    "retained_words", "normal_form_is_canonical", "verify_q_to_1", "raising_ok", "is_independent",
    "parse_quad", "continuum",
]
