from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import bases, nonzero, rationals
from sheun.laurent import LaurentPoly
from sheun.operators import monomial
from sheun.scalars import PoleError
from sheun.truncation import (
    TriDiag, TruncationSpec, first_raising_failure, nullvector_check, para_coeffs, positivity,
    raising_failure_profile, spectrum, truncated_raising, verify_limit, verify_spectrum,
)


def test_spot_values():
    assert para_coeffs("linear", 3, F(1), 0)[0] == F(3, 4)
    assert para_coeffs("linear", 3, F(1), 3)[1] == F(3, 4)


@pytest.mark.parametrize("grid, shift, q", [("linear", F(1, 3), None), ("qlinear", F(5, 2), F(1, 3))])
@pytest.mark.parametrize("N", range(1, 7))
def test_C0_and_AN_vanish(grid, shift, q, N):
    assert para_coeffs(grid, N, shift, 0, q)[1] == 0
    assert para_coeffs(grid, N, shift, N, q)[0] == 0


@given(N=st.integers(1, 12), g=rationals)
def test_linear_closed_form_pole_free(N, g):
    for n in range(N + 1):
        para_coeffs("linear", N, g, n)


def test_n_out_of_range():
    with pytest.raises(ValueError):
        para_coeffs("linear", 3, F(1), 4)


@pytest.mark.parametrize("N", range(1, 8))
def test_linear_limits(N):
    spec = TruncationSpec("linear", N, F(2, 7), F(-3, 5), e1=F(3, 4))
    assert all(c.ok for c in verify_limit(spec))


@pytest.mark.parametrize("N", range(1, 8))
def test_qlinear_limits(N):
    spec = TruncationSpec("qlinear", N, F(2, 7), F(5, 3), q=F(1, 3), e1=F(1))
    assert all(c.ok for c in verify_limit(spec))


@given(N=st.integers(1, 5), a=nonzero, d=nonzero, e1=nonzero)
def test_linear_limits_random(N, a, d, e1):
    try:
        checks = verify_limit(TruncationSpec("linear", N, a, d, e1=e1))
    except (PoleError, ZeroDivisionError):
        assume(False)
    assert all(c.ok for c in checks)


def test_qlinear_requires_integer_ratio():
    with pytest.raises(ValueError):
        TruncationSpec("qlinear", 3, F(1), F(2), q=F(1, 2), e_ratio=F(1, 2))


def test_linear_spectrum_frozen():
    # independent oracle: sympy eigenvals of the 6x6 truncated Jacobi matrix
    sp = spectrum("linear", 5, F(1, 2))
    assert np.allclose(sp.eigenvalues, [-9 / 4, -2, -5 / 4, -1, -1 / 4, 0], atol=1e-10)
    assert verify_spectrum("linear", 5, F(1, 2), mode="parity").ok
    assert sp.offset == pytest.approx(0.25)


def test_qlinear_spectrum_frozen():
    # independent oracle: sympy eigenvals at q = 1/2, c3 = 40
    sp = spectrum("qlinear", 5, F(40), F(1, 2))
    assert np.allclose(sp.eigenvalues, [5 / 8, 1, 5 / 2, 4, 10, 16], rtol=1e-10)
    assert verify_spectrum("qlinear", 5, F(40), F(1, 2), mode="parity").ok


def test_gamma_one_single_progression():
    assert verify_spectrum("linear", 5, F(1), mode="single").ok
    assert not verify_spectrum("linear", 5, F(1, 2), mode="single").ok


@given(c3=st.fractions(min_value=F(1601, 100), max_value=F(6399, 100)))
def test_qlinear_parity_in_window(c3):
    assert verify_spectrum("qlinear", 5, c3, F(1, 2), mode="parity").ok


@given(q=st.fractions(F(1, 5), F(4, 5)), c3=st.fractions(F(1, 10), F(100)))
def test_qlinear_residue_split(q, c3):
    assume(c3 not in {(q * q) ** k for k in range(-8, 9)})
    assert verify_spectrum("qlinear", 5, c3, q, mode="residue").ok


@given(g=st.fractions(F(1, 100), F(199, 100)))
def test_positivity_window(g):
    assume(g != 1)
    assert positivity("linear", 5, g)


def test_offset_monotone_in_gamma():
    offs = [spectrum("linear", 5, F(k, 10)).offset for k in (1, 3, 5, 7, 9)]
    assert all(x < y for x, y in zip(offs, offs[1:])) or all(x > y for x, y in zip(offs, offs[1:]))


def test_tridiag_polynomials_end_in_charpoly_degree():
    td = TriDiag.para("linear", 4, F(1, 3))
    polys = td.polynomials()
    assert [p.degree() for p in polys] == list(range(5))
    assert td.charpoly().degree() == 5


def test_linear_truncated_B_frozen():
    # independent oracle: sympy applied to the shift-operator form at nu = 1 (N = 3)
    B = truncated_raising("linear", 3)
    assert B.apply(monomial(B.grid, 4)) == LaurentPoly({3: F(-10), 1: F(22)}, "x")
    assert B.apply(monomial(B.grid, 0)) == LaurentPoly({1: F(-8)}, "x")


@pytest.mark.parametrize("N", range(1, 9))
def test_linear_raising_failure(N):
    _, checks = raising_failure_profile("linear", N)
    assert all(c.ok for c in checks)
    assert first_raising_failure("linear", N) == N + 1


def test_qlinear_raising_failure():
    bad = [c for N in range(1, 9) for c in raising_failure_profile("qlinear", N, F(1, 3))[1] if not c.ok]
    assert not bad, [(c.name, c.witness) for c in bad]


def test_qlinear_B_annihilates_below_truncation():
    N, q = 4, F(2, 5)
    B = truncated_raising("qlinear", N, q)
    assert B.apply(monomial(B.grid, N - 1)).is_zero()


@pytest.mark.parametrize("grid, shift, q", [("linear", F(1, 3), None), ("qlinear", F(7, 2), F(1, 2))])
def test_nullvector_degree(grid, shift, q):
    for N in range(1, 6):
        assert nullvector_check(grid, N, shift, F(2, 3), q)[0].ok


@pytest.mark.parametrize("grid, shift, q", [("linear", F(1, 3), None), ("qlinear", F(7, 2), F(1, 2))])
def test_nullvector_proportional(grid, shift, q):
    bad = [c for N in range(1, 6) for c in nullvector_check(grid, N, shift, F(2, 3), q)[1:] if not c.ok]
    assert not bad, [c.name for c in bad]
