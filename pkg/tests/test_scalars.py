from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from conftest import nonzero, rationals
from sheun.scalars import GRat, I, PoleError, RatFunc, format_scalar, limit_at, lowest_order, parse_scalar

q = RatFunc.symbol("q")
t = RatFunc.symbol("t")
eps = RatFunc.symbol("eps")


def test_gaussian_product():
    assert GRat(1, 1) * GRat(1, -1) == 2


def test_rational_sum():
    assert F(1, 2) + F(1, 3) == F(5, 6)


def test_ratfunc_self_division():
    f = (q * q - 1) / q
    assert f / f == 1
    assert (q - 1 / q) / f == 1


def test_ratfunc_canonical():
    f = (q * q - 1) / (q - 1)
    assert f.den == (F(1),)
    assert f == q + 1


def test_division_by_zero_is_not_a_pole():
    with pytest.raises(ZeroDivisionError) as info:
        q / (q - q)
    assert not isinstance(info.value, PoleError)


def test_q_integer_limit():
    assert limit_at((q ** 3 - q ** -3) / (q - 1 / q), 1) == 3


def test_genuine_pole():
    with pytest.raises(PoleError) as info:
        limit_at(1 / (q - 1), 1)
    assert info.value.point == 1


def test_removable_singularity():
    assert limit_at((t * t + 2 * t) / t, 0) == 2


@pytest.mark.parametrize("f, want", [
    (eps ** 3 * (2 + eps), (3, 2)),
    ((1 + eps) / eps ** 2, (-2, 1)),
    (F(5), (0, 5)),
])
def test_lowest_order(f, want):
    assert lowest_order(f) == want


def test_lowest_order_of_zero():
    with pytest.raises(ValueError):
        lowest_order(F(0))


@pytest.mark.parametrize("text, want", [
    ("3/4", F(3, 4)), ("-2", F(-2)), ("i", I), ("-3/2*i", GRat(0, F(-3, 2))), ("1/2+3/4*i", GRat(F(1, 2), F(3, 4))),
])
def test_parse(text, want):
    assert parse_scalar(text) == want


@pytest.mark.parametrize("bad", ["", "1//2", "x", "1 2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


gaussians = st.builds(GRat, rationals, rationals)


@given(gaussians)
def test_format_parse_round_trip(z):
    assert parse_scalar(format_scalar(z)) == z


def ratfuncs():
    coeffs = st.lists(rationals, min_size=1, max_size=4)
    return st.builds(lambda n, d: RatFunc("q", n, d), coeffs, coeffs.filter(lambda c: any(c)))


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not a.is_zero():
        assert a * (1 / a) == 1


@given(gaussians, gaussians)
def test_gaussian_field(a, b):
    assert a + b - b == a
    if b:
        assert (a * b) / b == a


@given(ratfuncs(), ratfuncs(), rationals)
def test_limit_is_multiplicative(f, g, p):
    try:
        lf, lg = limit_at(f, p), limit_at(g, p)
    except PoleError:
        assume(False)
    assert limit_at(f * g, p) == lf * lg


def eps_funcs():
    coeffs = st.lists(rationals, min_size=1, max_size=4).filter(lambda c: any(c))
    return st.builds(lambda n, d, k: RatFunc("eps", n, d) * eps ** k, coeffs, coeffs, st.integers(-3, 3))


@given(eps_funcs(), eps_funcs())
def test_lowest_order_is_additive(f, g):
    assert lowest_order(f * g)[0] == lowest_order(f)[0] + lowest_order(g)[0]
