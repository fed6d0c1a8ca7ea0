from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import bases, rationals
from sheun.generators import (
    NAMES, OutsideSpan, QuadExpr, SParams, build_basis, build_general_S, decompose, is_independent,
    normal_form_is_canonical, normal_order, parse_quad, qnum2, raising_ok, relations, sparams_of, verify_appendix,
    verify_q_to_1,
)
from sheun.laurent import LaurentPoly
from sheun.operators import GridOperator, continuum, degree_profile, linear, qlinear

x = LaurentPoly.monomial(1, 1, "x")


def test_linear_a00_is_M1_minus_M2():
    b = build_basis(linear())
    S = build_general_S(linear(), SParams(a00=1))
    assert S == b.M1 - b.M2
    assert decompose(S, b) == (0, 1, -1, 0, 0)


def test_zero_params_give_zero():
    assert build_general_S(linear(), SParams()).is_zero()


def test_q_a10_is_L():
    g = qlinear()
    b = build_basis(g)
    S = build_general_S(g, SParams(a10=1))
    assert S == b.L
    assert decompose(S, b) == (1, 0, 0, 0, 0)


def test_basis_actions():
    b = build_basis(linear())
    assert b.L.apply(x * x) == 2 * x
    assert b.R1.apply(x) == -(x * x)
    qb = build_basis(qlinear())
    assert qb.M1.apply(LaurentPoly.const(1, "z")) == 1


def test_decompose_unit():
    b = build_basis(linear())
    assert decompose(b.L, b) == (1, 0, 0, 0, 0)


def test_decompose_rejects_second_order():
    g = continuum()
    b = build_basis(g)
    with pytest.raises(OutsideSpan) as info:
        decompose((x * x) * GridOperator.word(g, 2), b)
    assert info.value.witness_n is not None


@pytest.mark.parametrize("grid", [continuum(), linear(), qlinear()], ids=lambda g: g.kind)
def test_basis_profiles_and_independence(grid):
    b = build_basis(grid)
    bounds = {"L": -1, "M1": 0, "M2": 0, "R1": 1, "R2": 1}
    for name in NAMES:
        prof = degree_profile(b[name], 8)
        assert all(d <= bounds[name] for d in prof)
        assert bounds[name] in prof
    assert is_independent(b.ops())
    assert normal_form_is_canonical(grid)


@pytest.mark.parametrize("grid", [continuum(), linear(), qlinear()], ids=lambda g: g.kind)
def test_appendix(grid):
    checks = verify_appendix(grid)
    assert len(checks) == 14
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


@pytest.mark.parametrize("grid, text", [
    (linear(), "M1 M1 = 1 + L L"),
    (continuum(), "M2 L = L M2 - M1 L"),
    (qlinear(), "[2] M1 M2 = 1 - M1 M1 - M2 M2"),
])
def test_listed_relations_present(grid, text):
    assert text in [r.text for r in relations(grid)]


def test_normal_order_examples():
    g = linear()
    assert normal_order(QuadExpr({("M2", "L"): 1}), g) == QuadExpr({("L", "M2"): 1, ("L", "M1"): -1})
    assert normal_order(QuadExpr({("R1", "L"): 1}), continuum()) == QuadExpr({("M1", "M2"): 1})
    canon = QuadExpr({("L", "M1"): 3})
    assert normal_order(canon, g) == canon


def test_q_to_1_limits():
    checks = verify_q_to_1(build_basis(qlinear()), build_basis(continuum()), 8)
    assert len(checks) == 5 and all(c.ok for c in checks)


GRIDS = [continuum(), linear(), qlinear(F(-7, 3))]
sparams = st.builds(SParams, rationals, rationals, rationals, rationals, rationals)


@pytest.mark.parametrize("grid", GRIDS, ids=lambda g: g.kind)
@given(p=sparams)
def test_raising_and_span_bijection(grid, p):
    S = build_general_S(grid, p)
    assert raising_ok(S, 12)
    b = build_basis(grid)
    assert sparams_of(b.combo(decompose(S, b))) == p


words = st.tuples(st.sampled_from(NAMES), st.sampled_from(NAMES))


@pytest.mark.parametrize("grid", GRIDS, ids=lambda g: g.kind)
@given(terms=st.dictionaries(words, rationals.filter(bool), min_size=1, max_size=6))
def test_normal_order_preserves_operator(grid, terms):
    expr = QuadExpr(terms)
    b = build_basis(grid)
    nf = normal_order(expr, grid)
    assert expr.evaluate(b) == nf.evaluate(b)
    assert normal_order(nf, grid) == nf
