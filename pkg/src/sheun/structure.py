"""Forward, backward and contiguity operators with their actions and factorizations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from .families import LOWER, UPPER, BigQJacobi, ContinuousHahn, Jacobi, phi
from .generators import NAMES, SHeunBasis, build_basis
from .laurent import LaurentPoly
from .operators import CONTINUUM, LINEAR, QLINEAR, GridKind, GridOperator, continuum, linear, qlinear
from .report import Check, check
from .scalars import I

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class StructureSet:
    grid: GridKind
    params: Tuple
    tau: GridOperator
    tau_star: GridOperator
    mu: GridOperator
    mu_star: GridOperator
    coefficients: Dict[str, Tuple]

    def ops(self) -> Dict[str, GridOperator]:
        return {"tau": self.tau, "tau*": self.tau_star, "mu": self.mu, "mu*": self.mu_star}


def structure_coefficients(grid: GridKind, params: Sequence) -> Dict[str, Tuple]:
    """Basis coefficients ``(L, M1, M2, R1, R2)`` of the four structure operators."""
    if grid.kind == CONTINUUM:
        al, be = params
        return {
            "tau": (1, 0, 0, 0, 0),
            "tau*": (-1, al - be, 0, al + be, 1),
            "mu": (-1, al, 1, 0, 0),
            "mu*": (1, be, 1, 0, 0),
        }
    a, b, c, d = params
    if grid.kind == LINEAR:
        s = a + b + c + d
        return {
            "tau": (2, 0, 0, 0, 0),
            "tau*": (
                HALF * (1 - s) + (a * b + c * d),
                HALF * (a + b - c - d) - (a * b - c * d),
                HALF * (c + d - a - b),
                Fraction(-1, 4),
                HALF * s - Fraction(3, 4),
            ),
            "mu": (d - a, a + d - 1, 1, 0, 0),
            "mu*": (c - b, b + c - 1, 1, 0, 0),
        }
    q = grid.q
    w = q - 1 / q
    return {
        "tau": (w, 0, 0, 0, 0),
        "tau*": (
            -w,
            (a + b) / q - q * (1 / c + 1 / d),
            (a + b) - (1 / c + 1 / d),
            -a * b / q ** 2 + q ** 2 / (c * d),
            -a * b / q + q / (c * d),
        ),
        "mu": (w, -(a / q - q / d), -(a - 1 / d), 0, 0),
        "mu*": (w, -(b / q - q / c), -(b - 1 / c), 0, 0),
    }


def build_structure(grid: GridKind, params: Sequence, basis: SHeunBasis | None = None) -> StructureSet:
    basis = basis or build_basis(grid)
    coeffs = structure_coefficients(grid, params)
    ops = {k: basis.combo(v) for k, v in coeffs.items()}
    return StructureSet(grid, tuple(params), ops["tau"], ops["tau*"], ops["mu"], ops["mu*"], coeffs)


# -- actions -------------------------------------------------------------------

# Each entry: (operator key, degree shift, prefactor(params, n), target params(params)).
Action = Tuple[str, int, Callable, Callable]

_JACOBI_ACTIONS: List[Action] = [
    ("tau", -1, lambda p, n: HALF * (n + p[0] + p[1] + 1), lambda p: (p[0] + 1, p[1] + 1)),
    ("tau*", 1, lambda p, n: Fraction(2 * (n + 1)), lambda p: (p[0] - 1, p[1] - 1)),
    ("mu", 0, lambda p, n: n + p[0], lambda p: (p[0] - 1, p[1] + 1)),
    ("mu*", 0, lambda p, n: n + p[1], lambda p: (p[0] + 1, p[1] - 1)),
]


def _shift4(da, db, dc, dd):
    return lambda p: (p[0] + da, p[1] + db, p[2] + dc, p[3] + dd)


_HAHN_ACTIONS: List[Action] = [
    ("tau", -1, lambda p, n: I * (n + sum(p) - 1), _shift4(HALF, HALF, HALF, HALF)),
    ("tau*", 1, lambda p, n: -I * (n + 1), _shift4(-HALF, -HALF, -HALF, -HALF)),
    ("mu", 0, lambda p, n: n + p[0] + p[3] - 1, _shift4(-HALF, HALF, HALF, -HALF)),
    ("mu*", 0, lambda p, n: n + p[1] + p[2] - 1, _shift4(HALF, -HALF, -HALF, HALF)),
]


def _q_actions(q) -> List[Action]:
    def scale4(sa, sb, sc, sd):
        return lambda p: (p[0] * sa, p[1] * sb, p[2] * sc, p[3] * sd)

    def tau_pref(p, n):
        a, b, c, d = p
        return a * q * (1 - q ** (-2 * n)) * (1 - a * b * c * d * q ** (2 * n - 2)) / ((1 - a * d) * (1 - a * c))

    def tau_star_pref(p, n):
        a, b, c, d = p
        return (a * c - q ** 2) * (a * d - q ** 2) / (a * c * d * q)

    def mu_pref(p, n):
        a, b, c, d = p
        return q / d * (1 - a * d / q ** 2)

    def mu_star_pref(p, n):
        a, b, c, d = p
        return -q * (a * d - q ** (-2 * n)) * (1 - b * c * q ** (2 * n - 2)) / (c * (1 - a * d))

    qi = 1 / q
    return [
        ("tau", -1, tau_pref, scale4(q, q, q, q)),
        ("tau*", 1, tau_star_pref, scale4(qi, qi, qi, qi)),
        ("mu", 0, mu_pref, scale4(qi, q, q, qi)),
        ("mu*", 0, mu_star_pref, scale4(q, qi, qi, q)),
    ]


def family_poly(grid: GridKind, params: Sequence, n: int, normalization: str = LOWER) -> LaurentPoly:
    """The polynomial on which the structure operators act, for the given parameters."""
    if n < 0:
        return LaurentPoly({}, grid.var)
    if grid.kind == CONTINUUM:
        return Jacobi(*params).series(n)
    if grid.kind == LINEAR:
        return ContinuousHahn(*params, normalization=normalization).series(n)
    return phi(*params, grid.q, n)


def actions_for(grid: GridKind) -> List[Action]:
    if grid.kind == CONTINUUM:
        return _JACOBI_ACTIONS
    if grid.kind == LINEAR:
        return _HAHN_ACTIONS
    return _q_actions(grid.q)


def verify_actions(sset: StructureSet, nmax: int = 8, normalization: str = LOWER) -> List[Check]:
    grid, params = sset.grid, sset.params
    ops = sset.ops()
    checks = []
    for key, dn, pref, target in actions_for(grid):
        tparams = target(params)
        ok, witness = True, None
        for n in range(nmax + 1):
            lhs = ops[key].apply(family_poly(grid, params, n, normalization))
            rhs = family_poly(grid, tparams, n + dn, normalization) * pref(params, n)
            if lhs != rhs:
                ok, witness = False, f"n={n} ({normalization}): residual {lhs - rhs}"
                break
        tag = f" [{normalization}]" if grid.kind == LINEAR else ""
        checks.append(check(f"{grid.kind}: {key} action{tag}", f"structure actions/{grid.kind}", ok, witness))
    return checks


def resolve_hahn_normalization(param_draws: Sequence[Sequence], nmax: int = 6) -> Dict[str, bool]:
    """Test both Continuous Hahn conventions against the closed-form actions."""
    out = {}
    for norm in (LOWER, UPPER):
        good = True
        for p in param_draws:
            sset = build_structure(linear(), p)
            if not all(c.ok for c in verify_actions(sset, nmax, norm)):
                good = False
                break
        out[norm] = good
    return out


# -- factorizations of the bispectral operator -----------------------------------


def _op(grid, params, key, basis):
    return build_structure(grid, params, basis).ops()[key]


def factorizations(grid: GridKind, params: Sequence, basis: SHeunBasis | None = None):
    """``(label, D, rhs operator)`` for the four factorizations of the grid's bispectral operator."""
    basis = basis or build_basis(grid)
    one = basis.identity()

    def S(p, key):
        return _op(grid, p, key, basis)

    if grid.kind == CONTINUUM:
        al, be = params
        D = Jacobi(al, be).operator()
        return [
            ("mu^(alpha+1) mu^(beta)* - (alpha+1)beta", D,
             S((al + 1, be), "mu") * S((al, be), "mu*") - one * ((al + 1) * be)),
            ("mu^(beta+1)* mu^(alpha) - alpha(beta+1)", D,
             S((al, be + 1), "mu*") * S((al, be), "mu") - one * (al * (be + 1))),
            ("tau*^(alpha+1,beta+1) tau", D, S((al + 1, be + 1), "tau*") * S((al, be), "tau")),
            ("tau tau*^(alpha,beta) - (alpha+beta)", D,
             S((al, be), "tau") * S((al, be), "tau*") - one * (al + be)),
        ]
    if grid.kind == LINEAR:
        a, b, c, d = params
        s = a + b + c + d
        D = ContinuousHahn(a, b, c, d).operator()
        p0 = (a, b, c, d)
        return [
            ("mu^(a+1/2,b-1/2,c-1/2,d+1/2) mu*^(a,b,c,d) - (a+d)(b+c-1)", D,
             S((a + HALF, b - HALF, c - HALF, d + HALF), "mu") * S(p0, "mu*") - one * ((a + d) * (b + c - 1))),
            ("mu*^(a-1/2,b+1/2,c+1/2,d-1/2) mu^(a,b,c,d) - (a+d-1)(b+c)", D,
             S((a - HALF, b + HALF, c + HALF, d - HALF), "mu*") * S(p0, "mu") - one * ((a + d - 1) * (b + c))),
            ("tau*^(a+1/2,b+1/2,c+1/2,d+1/2) tau", D,
             S((a + HALF, b + HALF, c + HALF, d + HALF), "tau*") * S(p0, "tau")),
            ("tau tau*^(a,b,c,d) + 2 - (a+b+c+d)", D, S(p0, "tau") * S(p0, "tau*") + one * (2 - s)),
        ]
    al, be, ga = params
    q = grid.q
    D = BigQJacobi(al, be, ga, q).operator()
    k = al * ga * q ** 3
    base = (1, be / ga, al * q ** 2, ga * q ** 2)
    return [
        ("agq^3 mu^(q,b/(gq),aq,gq^3) mu*^(1,b/g,aq^2,gq^2) - (1-gq^2)(1-ab/g)", D,
         S((q, be / (ga * q), al * q, ga * q ** 3), "mu") * S(base, "mu*") * k
         - one * ((1 - ga * q ** 2) * (1 - al * be / ga))),
        ("agq^3 mu*^(1/q,bq/g,aq^3,gq) mu^(1,b/g,aq^2,gq^2) - (1-g)(1-abq^2/g)", D,
         S((1 / q, be * q / ga, al * q ** 3, ga * q), "mu*") * S(base, "mu") * k
         - one * ((1 - ga) * (1 - al * be * q ** 2 / ga))),
        ("-agq^3 tau*^(q,bq/g,aq^3,gq^3) tau", D,
         S((q, be * q / ga, al * q ** 3, ga * q ** 3), "tau*") * S(base, "tau") * (-k)),
        ("-agq^3 tau tau*^(1,b/g,aq^2,gq^2) - (1-q^2)(1-ab)", D,
         S(base, "tau") * S(base, "tau*") * (-k) - one * ((1 - q ** 2) * (1 - al * be))),
    ]


def q_factorization_beta_variant(params: Sequence, grid: GridKind, basis: SHeunBasis | None = None):
    """Fourth q-grid factorization with ``beta q^2`` in the last slot of ``tau*``."""
    basis = basis or build_basis(grid)
    al, be, ga = params
    q = grid.q
    k = al * ga * q ** 3
    p = (1, be / ga, al * q ** 2, be * q ** 2)
    st = build_structure(grid, p, basis)
    D = BigQJacobi(al, be, ga, q).operator()
    rhs = st.tau * st.tau_star * (-k) - basis.identity() * ((1 - q ** 2) * (1 - al * be))
    return D, rhs


def verify_factorizations(grid: GridKind, params: Sequence) -> List[Check]:
    checks = []
    for label, D, rhs in factorizations(grid, params):
        diff = D - rhs
        checks.append(check(f"{grid.kind}: D = {label}", f"factorizations/{grid.kind}", diff.is_zero(), diff))
    return checks


def x_expression(basis: SHeunBasis) -> GridOperator:
    b = basis
    if b.grid.kind == CONTINUUM:
        return b.R1 * b.M1
    if b.grid.kind == LINEAR:
        return b.M2 * b.R2 - b.R2 * b.M2
    return b.M2 * b.R1 - b.M1 * b.R2


def verify_X(grid: GridKind) -> Check:
    basis = build_basis(grid)
    diff = x_expression(basis) - GridOperator.mult(grid, LaurentPoly.monomial(1, 1, grid.var))
    label = {CONTINUUM: "R1 M1", LINEAR: "[M2, R2]", QLINEAR: "M2 R1 - M1 R2"}[grid.kind]
    return check(f"{grid.kind}: X = {label}", f"multiplication operator/{grid.kind}", diff.is_zero(), diff)


__all__ = [
    "StructureSet", "build_structure", "structure_coefficients", "verify_actions", "family_poly",
    "resolve_hahn_normalization", "factorizations", "verify_factorizations", "q_factorization_beta_variant",
    "x_expression", "verify_X", "NAMES", "continuum", "qlinear",
]
