from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import bases, rationals
from sheun.generators import build_basis
from sheun.laurent import LaurentPoly
from sheun.operators import (
    GridMismatch, GridOperator, OperatorSyntaxError, anticommutator, commutator, continuum, degree_profile, equals,
    linear, monomial, parse_operator, qlinear,
)

NEG_INF = float("-inf")
x = LaurentPoly.monomial(1, 1, "x")
z = LaurentPoly.monomial(1, 1, "z")


def test_linear_shift_action():
    assert GridOperator.word(linear(), 1).apply(x * x) == x * x + 2 * x + 1


def test_q_shift_action():
    g = qlinear()
    assert GridOperator.word(g, 1).apply(z ** 3) == z ** 3 * g.q ** 3


def test_derivative_action():
    assert GridOperator.word(continuum(), 1).apply(x ** 3) == x * x * 3


def test_linear_conjugation():
    g = linear()
    Tp = GridOperator.word(g, 1)
    assert Tp * GridOperator.mult(g, x) == GridOperator.mult(g, x + 1) * Tp


def test_canonical_commutator():
    g = continuum()
    d = GridOperator.word(g, 1)
    assert commutator(d, GridOperator.mult(g, x)) == GridOperator.identity(g)


def test_q_conjugation():
    g = qlinear()
    Tp = GridOperator.word(g, 1)
    assert Tp * GridOperator.mult(g, z) == GridOperator.mult(g, z * g.q) * Tp


def test_shifts_commute():
    g = linear()
    assert commutator(GridOperator.word(g, 1), GridOperator.word(g, -1)).is_zero()


def test_anticommutator_identity():
    one = GridOperator.identity(linear())
    assert anticommutator(one, one) == 2 * one


def test_appendix_commutator_example():
    b = build_basis(linear())
    assert commutator(b.M2, b.M1) == -(b.L * b.L)


def test_equals_examples():
    g = linear()
    assert equals(GridOperator.word(g, 1) * GridOperator.word(g, -1), GridOperator.identity(g))
    cb = build_basis(continuum())
    assert equals(cb.M1 * cb.M1, cb.identity())
    b = build_basis(g)
    assert not equals(b.L, b.M1)


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        GridOperator.identity(linear()) + GridOperator.identity(continuum())


def test_profile_of_L():
    assert degree_profile(build_basis(linear()).L, 3) == [NEG_INF, -1, -1, -1]


def test_profile_of_q_R2():
    b = build_basis(qlinear(F(2, 3)))
    assert degree_profile(b.R2, 5) == [NEG_INF, 1, 1, 1, 1, 1]


def test_profile_of_identity():
    assert degree_profile(GridOperator.identity(linear()), 4) == [0] * 5


def test_derivative_order_cap():
    g = continuum()
    with pytest.raises(ValueError):
        GridOperator.word(g, 1) ** 5


@pytest.mark.parametrize("text, grid, want", [
    ("1/2*(T+ - T-)", linear(), "L"),
    ("x*d", continuum(), "M2"),
    ("z^-1*(T+ - T-)/(q - q^-1)", qlinear(), "L"),
])
def test_parse_literals(text, grid, want):
    assert parse_operator(text, grid) == build_basis(grid)[want]


def test_parse_error():
    with pytest.raises(OperatorSyntaxError):
        parse_operator("T+ +* 2", linear())


GRIDS = [continuum(), linear(), qlinear(F(3, 5))]
gens = st.sampled_from(["L", "M1", "M2", "R1", "R2"])


def _op(grid, names, coeffs):
    b = build_basis(grid)
    out = GridOperator.zero(grid)
    for n, c in zip(names, coeffs):
        out = out + c * b[n]
    return out


ops = st.tuples(st.lists(gens, min_size=1, max_size=3), st.lists(rationals, min_size=3, max_size=3))
polys = st.lists(rationals, min_size=1, max_size=5)


@pytest.mark.parametrize("grid", GRIDS, ids=lambda g: g.kind)
@given(a=ops, b=ops, c=ops, p=polys)
def test_compose_matches_application_and_is_associative(grid, a, b, c, p):
    A, B, C = (_op(grid, *o) for o in (a, b, c))
    poly = LaurentPoly.from_list(p, grid.var)
    assert (A * B).apply(poly) == A.apply(B.apply(poly))
    assert (A * B) * C == A * (B * C)


@pytest.mark.parametrize("grid", GRIDS, ids=lambda g: g.kind)
@given(a=ops, b=ops)
def test_equality_agrees_with_action_window(grid, a, b):
    A, B = _op(grid, *a), _op(grid, *b)
    D = A - B
    window = 2 * max(2, D.max_word() if not D.is_zero() else 0) + 6
    pointwise = all(D.apply(monomial(grid, n)).is_zero() for n in range(window))
    assert equals(A, B) == pointwise
