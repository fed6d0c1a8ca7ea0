import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import bases, rationals
from sheun.families import BigQJacobi, ContinuousHahn, Jacobi
from sheun.generators import build_basis
from sheun.heun import (
    Factorization, HeunCombo, HeunForm, HeunShapeError, NoFactorization, assemble, extract_form, factorize,
    iter_factorizations, verify_assembly, verify_structure,
)
from sheun.laurent import LaurentPoly
from sheun.operators import GridOperator, continuum, degree_profile, linear, qlinear
from sheun.scalars import random_q, random_rational

GRIDS = {"continuum": continuum, "linear": linear, "qlinear": lambda: qlinear(F(2, 3))}


def test_continuum_alpha4_is_identity():
    g = continuum()
    W, form = assemble(HeunCombo.unit(g, "alpha4"))
    assert form["Q3"].is_zero() and form["Q2"].is_zero()
    assert form["Q1"] == LaurentPoly.const(1, "x")
    assert W == GridOperator.identity(g)


def test_linear_beta2_leading_term():
    _, form = assemble(HeunCombo.unit(linear(), "beta2"))
    assert form["A1"].degree() == 3 and form["A1"][3] == F(-1, 2)


def test_qlinear_alpha1():
    g = qlinear(F(3, 5))
    q = g.q
    _, form = assemble(HeunCombo.unit(g, "alpha1"))
    assert form["A1"] == LaurentPoly({-2: q / (1 - q ** 2) ** 2}, "z")


def test_symbolic_q_assembly():
    combo = HeunCombo(qlinear(), tuple(F(k, 3) for k in range(1, 7)), (F(-2), F(5, 4), F(7)))
    assert verify_assembly(combo).ok


def test_wrong_arity():
    with pytest.raises(ValueError):
        HeunCombo(linear(), (F(1),) * 5, (F(0),) * 3)


def test_shape_error_names_word():
    b = build_basis(linear())
    with pytest.raises(HeunShapeError) as exc:
        extract_form(b.R1)
    assert exc.value.word in (1, -1)


def test_violation_detected():
    x = lambda c: {3: F(c), 0: F(1)}
    form = HeunForm(linear(), {"A1": LaurentPoly(x(1), "x"), "A2": LaurentPoly(x(2), "x"),
                               "A0": LaurentPoly({3: F(-3)}, "x")})
    bad = [c for c in verify_structure(form) if not c.ok]
    assert [c.name for c in bad] == ["A1, A2 share the cubic coefficient"]


def combos(grid):
    return st.builds(HeunCombo, st.just(grid), st.tuples(*[rationals] * 6), st.tuples(*[rationals] * 3))


@pytest.mark.parametrize("kind", GRIDS)
@given(data=st.data())
def test_assembly_and_structure(kind, data):
    g = GRIDS[kind]()
    combo = data.draw(combos(g))
    assert verify_assembly(combo).ok
    W, form = assemble(combo)
    assert all(c.ok for c in verify_structure(form, W, 10))
    assert all(d <= 1 for d in degree_profile(W, 10))


@pytest.mark.parametrize("kind", GRIDS)
def test_forward_round_trips(kind):
    rng = random.Random(f"roundtrip:{kind}")
    draws = 0
    while draws < 50:
        g = qlinear(random_q(rng)) if kind == "qlinear" else GRIDS[kind]()
        b = build_basis(g)
        f = Factorization(tuple(random_rational(rng) for _ in range(3)),
                          tuple(random_rational(rng) for _ in range(5)), random_rational(rng))
        W = f.recompose(b)
        got = factorize(W, b)
        assert got.recompose(b) == W
        draws += 1


@pytest.mark.parametrize("kind", GRIDS)
def test_m1_r2(kind):
    b = build_basis(GRIDS[kind]())
    f = factorize(b.M1 * b.R2, b)
    assert f.recompose(b) == b.M1 * b.R2
    assert f.kappa == 0 and f.xi == (0, 1, 0) and f.eta == (0, 0, 0, 0, 1)


def test_identity_continuum():
    b = build_basis(continuum())
    f = factorize(b.identity(), b)
    assert (f.xi, f.eta, f.kappa) == ((0, 1, 0), (0, 1, 0, 0, 0), 0)


@pytest.mark.parametrize("kind", ["linear", "qlinear"])
def test_identity_shift_grids(kind):
    b = build_basis(GRIDS[kind]())
    assert factorize(b.identity(), b).recompose(b) == b.identity()


def factorization_constants(fam):
    if isinstance(fam, Jacobi):
        al, be = fam.alpha, fam.beta
        return {-(al + 1) * be, -al * (be + 1), F(0), -(al + be)}
    if isinstance(fam, ContinuousHahn):
        a, b, c, d = fam.a, fam.b, fam.c, fam.d
        return {-(a + d) * (b + c - 1), -(a + d - 1) * (b + c), F(0), 2 - (a + b + c + d)}
    al, be, ga, q = fam.alpha, fam.beta, fam.gamma, fam.q
    return {-(1 - ga * q ** 2) * (1 - al * be / ga), -(1 - ga) * (1 - al * be * q ** 2 / ga), F(0),
            -(1 - q ** 2) * (1 - al * be)}


@pytest.mark.parametrize("fam", [
    Jacobi(F(1, 3), F(2, 5)),
    ContinuousHahn(F(1, 3), F(2, 5), F(1, 7), F(3, 4)),
    BigQJacobi(F(2, 3), F(3, 5), F(5, 7), F(1, 2)),
], ids=["jacobi", "hahn", "bqj"])
def test_bispectral_operator_factorizes_with_known_constant(fam):
    D = fam.operator()
    b = build_basis(D.grid)
    found = list(iter_factorizations(D, b))
    assert found and all(f.recompose(b) == D for f in found)
    assert {f.kappa for f in found} & factorization_constants(fam)


def test_random_W_generically_does_not_factorize():
    rng = random.Random(3)
    g = linear()
    b = build_basis(g)
    combo = HeunCombo(g, tuple(random_rational(rng) for _ in range(6)), tuple(random_rational(rng) for _ in range(3)))
    W, _ = assemble(combo, b)
    with pytest.raises(NoFactorization):
        factorize(W, b)
