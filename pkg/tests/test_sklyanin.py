from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from conftest import bases, nonzero, rationals
from sheun.generators import build_basis
from sheun.operators import GridOperator, continuum, linear, qlinear
from sheun.report import FAIL, FINDING, PASS
from sheun.sklyanin import (
    CONTRACTION_SCALING, aw_trig, build_realization, contract, hom_sl2, nu_of, q_params_for, q_to_1_realization,
    realization_limit, skl4, uq_sl2, verify_casimirs, verify_rains, verify_relations, verify_T7,
)
from sheun.scalars import PoleError


def test_continuum_realization_example():
    b = build_basis(continuum())
    r = build_realization(continuum(), F(3, 2))
    assert r.C == b.L and r.D == b.M1
    assert r.A == b.M2 - F(3, 2) * b.M1


def test_nu_from_parameters():
    assert nu_of(linear(), (F(1), F(2), F(3), F(4))) == -5
    assert nu_of(continuum(), (F(1), F(3))) == -2


def test_q_parameters_multiply_to_w4():
    w = F(3, 5)
    a, b, c, d = q_params_for(w, (F(2), F(-7, 3), F(1, 4)))
    assert a * b * c * d == w ** 4


def test_q_realization_inverse_pair():
    r = build_realization(qlinear(F(2, 3)), F(5, 7))
    one = GridOperator.identity(r.grid)
    assert r.A * r.D == one and r.D * r.A == one


@given(nu=rationals)
def test_continuum_relations(nu):
    assert all(c.ok for c in verify_relations(build_realization(continuum(), nu)))


@given(nu=rationals)
def test_linear_relations_casimirs_T7(nu):
    r = build_realization(linear(), nu)
    checks = verify_relations(r) + verify_casimirs(r) + verify_T7(r)
    assert len(verify_T7(r)) == 3
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


@given(q=bases, w=nonzero)
def test_q_relations(q, w):
    checks = verify_relations(build_realization(qlinear(q), w))
    assert len(checks) == 8
    assert all(c.ok for c in checks)


def test_casimirs_rejected_off_linear():
    with pytest.raises(ValueError):
        verify_casimirs(build_realization(continuum(), F(1)))


@given(p=st.tuples(rationals, rationals, rationals, rationals), e=rationals)
def test_rains(p, e):
    try:
        checks = verify_rains(p, e)
    except PoleError:
        assume(False)
    assert all(c.ok for c in checks)


def test_rains_trivial_shift():
    assert all(c.ok for c in verify_rains((F(1, 3), F(2, 5), F(-1, 7), F(3, 4)), F(0)))


@pytest.mark.parametrize("q", [F(1, 2), F(3, 7), F(-5, 2)])
def test_aw_to_uq(q):
    checks = contract(aw_trig(q), CONTRACTION_SCALING, uq_sl2(q))
    assert len(checks) == 7
    assert all(c.status == PASS for c in checks)


def test_skl4_to_hom_sl2_findings():
    checks = contract(skl4(), CONTRACTION_SCALING, hom_sl2(), finding_on_mismatch=True)
    assert len(checks) == 6
    assert not any(c.status == FAIL for c in checks)
    found = sorted(c.name.split(": ", 1)[1] for c in checks if c.status == FINDING)
    assert found == sorted(["[A,C] = {C,D}", "[B,C] = {D,A}", "[B,A] = {B,D}"])


def test_skl4_strict_mode_fails():
    checks = contract(skl4(), CONTRACTION_SCALING, hom_sl2())
    assert any(c.status == FAIL for c in checks)


def test_realization_limits():
    checks = realization_limit(build_basis(linear()), build_basis(continuum()), 6)
    assert len(checks) == 5 and all(c.ok for c in checks)


def test_q_to_1_realization():
    checks = q_to_1_realization(2, 6)
    assert len(checks) == 4 and all(c.ok for c in checks)
