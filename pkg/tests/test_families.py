from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import bases, nonzero, rationals
from sheun.families import (
    BigQJacobi, ContinuousHahn, Jacobi, LOWER, UPPER, construct, recurrence_oracle, verify_eigen, verify_recurrence,
)
from sheun.laurent import LaurentPoly
from sheun.scalars import PoleError


def test_degree_zero_is_one():
    for fam in (Jacobi(F(1, 3), F(2)), ContinuousHahn(F(1), F(2), F(3), F(4)), BigQJacobi(F(2), F(3), F(5), F(1, 2))):
        assert construct(fam, 0).poly == LaurentPoly.const(1, fam.grid.var)


def test_jacobi_degree_one():
    al, be = F(3, 7), F(-2, 5)
    want = LaurentPoly({1: (al + be + 2) / 2, 0: (al - be) / 2}, "x")
    assert Jacobi(al, be).series(1) == want


def test_jacobi_degree_two_frozen():
    # independent oracle: sympy.jacobi(2, 1/2, 0, x)
    assert Jacobi(F(1, 2), F(0)).series(2) == LaurentPoly({2: F(63, 32), 1: F(7, 16), 0: F(-17, 32)}, "x")


def test_eigenvalue_examples():
    al, be = F(1, 4), F(5, 3)
    assert Jacobi(al, be).eigenvalue(2) == 2 * (al + be + 3)
    ch = ContinuousHahn(F(1), F(1, 2), F(1, 3), F(1, 5))
    assert ch.eigenvalue(1) == ch.s
    assert BigQJacobi(F(2), F(3), F(5), F(1, 2)).eigenvalue(0) == 0


def test_big_q_jacobi_degree_one():
    fam = BigQJacobi(F(2, 3), F(-1, 4), F(5, 7), F(3, 2))
    assert fam.series(1).degree() == 1
    qt = fam.qt
    assert fam.eigenvalue(1) == (1 / qt - 1) * (1 - fam.alpha * fam.beta * qt ** 2)
    assert verify_eigen(fam, 1).ok


def test_c0_vanishes():
    for fam in (Jacobi(F(1, 3), F(2)), ContinuousHahn(F(1), F(2), F(3), F(4)), BigQJacobi(F(2), F(3), F(5), F(1, 2))):
        assert recurrence_oracle(fam, 0).C == 0


def test_pole_in_pochhammer():
    with pytest.raises(PoleError):
        ContinuousHahn(F(1), F(0), F(-1), F(0)).in_y(2, UPPER)


def test_normalizations_differ_by_scale():
    ch = ContinuousHahn(F(1, 2), F(1, 3), F(1, 5), F(1, 7))
    assert ch.in_y(3, UPPER) == ch.in_y(3, LOWER) * ch.upper_scale(3)


jacobis = st.builds(Jacobi, rationals, rationals)
hahns = st.builds(ContinuousHahn, rationals, rationals, rationals, rationals)
bqjs = st.builds(BigQJacobi, nonzero, nonzero, nonzero, bases)


@pytest.mark.parametrize("family", [jacobis, hahns, bqjs], ids=["jacobi", "hahn", "bqj"])
@settings(max_examples=15)
@given(data=st.data())
def test_eigen_and_recurrence(family, data):
    fam = data.draw(family)
    try:
        polys = [construct(fam, n).poly for n in range(10)]
    except PoleError:
        assume(False)
    # a vanishing leading coefficient leaves no three-term recurrence
    assume(all(not p.is_zero() and p.degree() == n for n, p in enumerate(polys)))
    for n in range(9):
        assert verify_eigen(fam, n).ok
        try:
            rec = verify_recurrence(fam, n)
        except PoleError:
            assume(False)
        assert rec.ok
