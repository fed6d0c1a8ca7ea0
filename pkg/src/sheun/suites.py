"""Verification suites: seeded random draws fanned over the library checks.

Every trial gets its own generator seeded from ``(seed, suite, grid, trial)``,
so results do not depend on the order trials run in.  Checks with the same
name across trials are merged into one entry.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence

from .families import BigQJacobi, ContinuousHahn, DegenerateRecurrence, Jacobi, verify_eigen, verify_recurrence
from .generators import (
    NAMES, QuadExpr, SParams, build_basis, build_general_S, decompose, is_independent, normal_form_is_canonical,
    normal_order,
    raising_ok, sparams_of, verify_appendix, verify_q_to_1,
)
from .heun import (
    Factorization, HeunCombo, NoFactorization, assemble, factorize, verify_assembly, verify_factorization,
    verify_structure,
)
from .operators import CONTINUUM, LINEAR, QLINEAR, GridKind, continuum, degree_profile, linear, qlinear
from .report import FAIL, FINDING, PASS, Check, check
from .scalars import PoleError, random_q, random_rational
from .sklyanin import (
    CONTRACTION_SCALING, aw_trig, build_realization, contract, hom_sl2, q_params_for, q_to_1_realization,
    realization_limit, skl4, uq_sl2, verify_casimirs, verify_relations, verify_rains, verify_T7,
)
from .structure import (
    build_structure, q_factorization_beta_variant, resolve_hahn_normalization, verify_actions, verify_factorizations,
    verify_X,
)
from .truncation import (
    PROGRESSION_TOL, TruncationSpec, nullvector_check, para_coeffs, raising_failure_profile, spectrum,
    verify_limit, verify_spectrum,
)

SUITES = ("basis", "relations", "actions", "sklyanin", "rains", "contraction", "truncation", "heun")
GRIDS = (CONTINUUM, LINEAR, QLINEAR)
MAX_NMAX = 12
MAX_REDRAWS = 20

# grids with no statement for a suite are skipped
SUITE_GRIDS = {
    "rains": (LINEAR,),
    "truncation": (LINEAR, QLINEAR),
    "contraction": ("any",),
}

# interlacing window for the q-linear parity split at q = 1/2, N = 5
Q_PARITY_BASE = Fraction(1, 2)
Q_PARITY_WINDOW = (16, 64)


def trial_rng(seed: int, suite: str, grid: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{grid}:{trial}")


def merge(per_trial: Sequence[List[Check]]) -> List[Check]:
    """One check per name: failing if any trial failed, witness taken from the first failure."""
    order: List[str] = []
    merged: Dict[str, Check] = {}
    for k, checks in enumerate(per_trial):
        for c in checks:
            if c.name not in merged:
                order.append(c.name)
                merged[c.name] = c if c.status != FAIL else Check(c.name, c.anchor, FAIL, f"trial {k}: {c.witness}")
                continue
            old = merged[c.name]
            if old.status == FAIL:
                continue
            if c.status == FAIL:
                merged[c.name] = Check(c.name, c.anchor, FAIL, f"trial {k}: {c.witness}")
            elif c.status == FINDING and old.status == PASS:
                merged[c.name] = c
    return [merged[n] for n in order]


def _trials(name: str, grid: str, seed: int, trials: int, body: Callable[[random.Random], List[Check]]):
    out = []
    for k in range(trials):
        rng = trial_rng(seed, name, grid, k)
        for _ in range(MAX_REDRAWS):
            try:
                out.append(body(rng))
                break
            except (PoleError, DegenerateRecurrence, ZeroDivisionError):
                continue
        else:
            out.append([check(f"{grid}: trial draw", "parameter sampling", False,
                              f"trial {k}: no pole-free draw in {MAX_REDRAWS} attempts")])
    return merge(out)


def _rats(rng: random.Random, k: int, **kw) -> List[Fraction]:
    return [random_rational(rng, **kw) for _ in range(k)]


def _grid(kind: str, rng: random.Random | None = None) -> GridKind:
    if kind == CONTINUUM:
        return continuum()
    if kind == LINEAR:
        return linear()
    return qlinear(random_q(rng) if rng is not None else None)


# -- basis ----------------------------------------------------------------------


def _basis_static(kind: str, nmax: int) -> List[Check]:
    grid = _grid(kind, random.Random(0)) if kind == QLINEAR else _grid(kind)
    b = build_basis(grid)
    bounds = {"L": -1, "M1": 0, "M2": 0, "R1": 1, "R2": 1}
    checks = []
    for name in NAMES:
        prof = degree_profile(b[name], nmax)
        attained = any(d == bounds[name] for d in prof)
        checks.append(check(f"{kind}: degree profile of {name} <= {bounds[name]:+d}, attained", "basis degrees",
                            all(d <= bounds[name] for d in prof) and attained, prof))
    checks.append(check(f"{kind}: basis linearly independent", "basis independence", is_independent(b.ops())))
    checks.append(check(f"{kind}: retained words independent (unique normal form)", "normal ordering",
                        normal_form_is_canonical(grid)))
    return checks


def basis_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    def body(rng):
        grid = _grid(kind, rng)
        p = SParams(*_rats(rng, 5))
        S = build_general_S(grid, p)
        basis = build_basis(grid)
        coeffs = decompose(S, basis)
        back = sparams_of(basis.combo(coeffs))
        expr = QuadExpr()
        for _ in range(4):
            expr = expr + QuadExpr({(rng.choice(NAMES), rng.choice(NAMES)): random_rational(rng)})
        lhs, rhs = expr.evaluate(basis), normal_order(expr, grid).evaluate(basis)
        return [
            check(f"{kind}: S-Heun degree profile <= +1 for n <= {nmax}", "degree raising", raising_ok(S, nmax),
                  degree_profile(S, nmax)),
            check(f"{kind}: decompose then rebuild recovers SParams", "span", back == p, f"{p} -> {back}"),
            check(f"{kind}: normal_order preserves the operator", "normal ordering", lhs == rhs, expr),
        ]

    return _basis_static(kind, nmax) + _trials("basis", kind, seed, trials, body)


def relations_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    return verify_appendix(_grid(kind))


# -- actions ---------------------------------------------------------------------


def _family_draw(kind: str, rng: random.Random):
    if kind == CONTINUUM:
        al, be = _rats(rng, 2)
        return Jacobi(al, be), (al, be), (al, be), continuum()
    if kind == LINEAR:
        p = tuple(_rats(rng, 4))
        return ContinuousHahn(*p), p, p, linear()
    q = random_q(rng)
    al, be, ga = _rats(rng, 3)
    return BigQJacobi(al, be, ga, q), tuple(_rats(rng, 4)), (al, be, ga), qlinear(q)


def actions_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    draws: List[tuple] = []

    def body(rng):
        fam, sparams, fparams, grid = _family_draw(kind, rng)
        out = []
        for n in range(nmax + 1):
            out.append(verify_eigen(fam, n))
            out.append(verify_recurrence(fam, n))
        out += verify_actions(build_structure(grid, sparams), nmax)
        out += verify_factorizations(grid, fparams)
        if kind == QLINEAR:
            D, rhs = q_factorization_beta_variant(fparams, grid)
            out.append(check("qlinear: fourth factorization with beta q^2 in the tau* slot is not an identity",
                             "factorizations/qlinear variant", D != rhs, "beta q^2 variant holds"))
        if kind == LINEAR:
            draws.append(sparams)
        return out

    checks = _trials("actions", kind, seed, trials, body) + [verify_X(_grid(kind, random.Random(seed)))]
    if kind == LINEAR:
        res = resolve_hahn_normalization(draws, min(nmax, 6))
        checks.append(check("linear: Continuous Hahn action normalization resolves to lowercase p_n",
                            "normalization resolution", res == {"lower": True, "upper": False}, res))
    return checks


# -- sklyanin / rains -------------------------------------------------------------


def sklyanin_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    def body(rng):
        grid = _grid(kind, rng)
        r = build_realization(grid, random_rational(rng))
        out = verify_relations(r)
        if kind == LINEAR:
            out += verify_casimirs(r) + verify_T7(r)
        return out

    return _trials("sklyanin", kind, seed, trials, body)


def rains_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    def body(rng):
        *p, e = _rats(rng, 5)
        return verify_rains(tuple(p), e)

    return _trials("rains", kind, seed, trials, body)


# -- contraction -------------------------------------------------------------------


def contraction_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    def body(rng):
        q = random_q(rng)
        return contract(aw_trig(q), CONTRACTION_SCALING, uq_sl2(q))

    checks = _trials("contraction", kind, seed, trials, body)
    checks += contract(skl4(), CONTRACTION_SCALING, hom_sl2(), finding_on_mismatch=True)
    small = min(nmax, 6)
    checks += realization_limit(build_basis(linear()), build_basis(continuum()), small)
    checks += verify_q_to_1(build_basis(qlinear()), build_basis(continuum()), min(nmax, 8))
    checks += q_to_1_realization(2, small)
    return checks


# -- truncation ----------------------------------------------------------------------


def _positive_c3(rng: random.Random, q) -> Fraction:
    lattice = {(q * q) ** k for k in range(-8, 9)}
    while True:
        c3 = abs(random_rational(rng))
        if c3 not in lattice:
            return c3


def truncation_suite(kind: str, seed: int, trials: int, nmax: int, n_max_limit: int = 7) -> List[Check]:
    def body(rng):
        out = []
        q = random_q(rng) if kind == QLINEAR else None
        a, other, e1 = _rats(rng, 3)
        for N in range(1, n_max_limit + 1):
            out += verify_limit(TruncationSpec(kind, N, a, other, q, e1))
        for N in range(1, min(8, nmax) + 1):
            out += raising_failure_profile(kind, N, q)[1]
        for N in range(1, 6):
            shift = random_rational(rng) if kind == LINEAR else _positive_c3(rng, q)
            out += nullvector_check(kind, N, shift, random_rational(rng), q)
        if kind == QLINEAR:
            lo, hi = Q_PARITY_WINDOW
            c3 = Fraction(rng.randint(lo * 100 + 1, hi * 100 - 1), 100)
            c = verify_spectrum(QLINEAR, 5, c3, Q_PARITY_BASE, "parity")
            out.append(Check("qlinear N=5 q=1/2, c3 in interlacing window: spectrum, parity split", c.anchor,
                             c.status, c.witness))
            qq = random_q(rng)
            c = verify_spectrum(QLINEAR, 5, _positive_c3(rng, qq), qq, "residue")
            out.append(Check("qlinear N=5 random q, c3: spectrum, two-lattice residue split", c.anchor,
                             c.status, c.witness))
        return out

    checks = _trials("truncation", kind, seed, trials, body)
    if kind == LINEAR:
        A0, _ = para_coeffs(LINEAR, 3, Fraction(1), 0)
        _, C3 = para_coeffs(LINEAR, 3, Fraction(1), 3)
        checks.append(check("linear N=3 gamma=1: A_0 = 3/4, C_3 = 3/4", "spot values",
                            (A0, C3) == (Fraction(3, 4), Fraction(3, 4)), (A0, C3)))
        checks.append(verify_spectrum(LINEAR, 5, Fraction(1, 2), mode="parity"))
        checks.append(verify_spectrum(LINEAR, 5, Fraction(1), mode="single"))
    return checks


# -- heun ---------------------------------------------------------------------------


def _combo(grid: GridKind, rng: random.Random) -> HeunCombo:
    return HeunCombo(grid, tuple(_rats(rng, 6)), tuple(_rats(rng, 3)))


def heun_suite(kind: str, seed: int, trials: int, nmax: int) -> List[Check]:
    stats = {"factorized": 0, "none": 0}

    def body(rng):
        grid = _grid(kind, rng)
        basis = build_basis(grid)
        combo = _combo(grid, rng)
        out = [verify_assembly(combo, basis)]
        W, form = assemble(combo, basis)
        out += verify_structure(form, W, min(nmax, 10))
        xi = tuple(_rats(rng, 3))
        eta = tuple(_rats(rng, 5))
        F = Factorization(xi, eta, random_rational(rng))
        c = verify_factorization(F.recompose(basis), basis)
        out.append(Check(f"{kind}: forward-built factorization round trip", c.anchor, c.status, c.witness))
        try:
            f = factorize(W, basis)
            sound = f.recompose(basis) == W
            stats["factorized"] += 1
        except NoFactorization:
            sound = True
            stats["none"] += 1
        out.append(check(f"{kind}: factorize on a random assembled operator is sound", "Heun factorization",
                         sound, "returned factorization does not recompose"))
        return out

    checks = _trials("heun", kind, seed, trials, body)
    if kind == QLINEAR:
        combo = _combo(qlinear(), trial_rng(seed, "heun", "symbolic", 0))
        c = verify_assembly(combo)
        checks.append(Check("qlinear: assembly matches closed form with symbolic q", c.anchor, c.status, c.witness))
    checks.append(Check(f"{kind}: random assembled operators that factorize", "Heun factorization", PASS,
                        f"{stats['factorized']} of {stats['factorized'] + stats['none']}"))
    return checks


RUNNERS = {
    "basis": basis_suite,
    "relations": relations_suite,
    "actions": actions_suite,
    "sklyanin": sklyanin_suite,
    "rains": rains_suite,
    "contraction": contraction_suite,
    "truncation": truncation_suite,
    "heun": heun_suite,
}


def suite_grids(suite: str, grid: str) -> List[str]:
    allowed = SUITE_GRIDS.get(suite, GRIDS)
    if allowed == ("any",):
        return [grid]
    kinds = list(GRIDS) if grid == "all" else [grid]
    return [k for k in kinds if k in allowed]


def run_suite(suite: str, grid: str, seed: int, trials: int, nmax: int) -> List[Check]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= nmax <= MAX_NMAX:
        raise ValueError(f"nmax must lie in 0..{MAX_NMAX}")
    names = list(SUITES) if suite == "all" else [suite]
    checks: List[Check] = []
    for name in names:
        if name not in RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
        for kind in suite_grids(name, grid):
            checks += RUNNERS[name](kind, seed, trials, nmax)
    return checks


__all__ = ["SUITES", "GRIDS", "MAX_NMAX", "run_suite", "merge", "trial_rng", "suite_grids", "RUNNERS"]
