"""Truncated families: para-Krawtchouk and q-para-Krawtchouk recurrences, spectra and null vectors.

Linear grid: the deformation parameter is ``t`` and the truncated family is
the Continuous Hahn family in its recurrence variable ``y = a - x/2``.
q-linear grid: the deformation enters only through ``s = q^(e1 t)``, so the
limit ``t -> 0`` is taken as ``s -> 1``; the family is Big q-Jacobi in the
variable ``v = a z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .families import BigQJacobi, ContinuousHahn, UPPER, recurrence_oracle
from .generators import SHeunBasis, build_basis
from .laurent import LaurentPoly
from .operators import LINEAR, QLINEAR, GridOperator, degree_profile, linear, monomial, qlinear
from .report import Check, check
from .scalars import PoleError, RatFunc, limit_at

HALF = Fraction(1, 2)
PROGRESSION_TOL = 1e-9


def _den(value, n: int, what: str):
    if value == 0:
        raise PoleError(n, f"{what} vanishes at n={n}")
    return value


def para_coeffs(grid: str, N: int, shift, n: int, q=None) -> Tuple[object, object]:
    """Closed-form ``(A_n, C_n)``; ``shift`` is ``gamma`` (linear) or ``c3`` (q-linear)."""
    if not 0 <= n <= N:
        raise ValueError(f"n={n} outside 0..{N}")
    odd = N % 2 == 1
    if grid == LINEAR:
        g = shift
        if odd:
            den = _den(2 * (2 * n - N), n, "2(2n-N)")
            return (-HALF * (N - n) * (N - 1 - 2 * n + g) / den, -HALF * n * (N + 1 - 2 * n - g) / den)
        da = _den(2 * (2 * n - N + 1), n, "2(2n-N+1)")
        dc = _den(2 * (2 * n - N - 1), n, "2(2n-N-1)")
        return (-HALF * (N - n) * (N - 2 - 2 * n + g) / da, -HALF * n * (N + 2 - 2 * n - g) / dc)
    if grid != QLINEAR:
        raise ValueError(f"no truncation on grid {grid!r}")
    c3 = shift
    num_a = (1 - c3 * q ** (2 * n + 2)) * (1 - q ** (2 * n - 2 * N))
    num_c = (1 - q ** (2 * n)) * (c3 - q ** (2 * n - 2 * N - 2))
    if odd:
        da = _den((1 + q ** (2 * n - N + 1)) * (1 - q ** (4 * n - 2 * N)), n, "A_n denominator")
        dc = _den((1 + q ** (2 * n - N - 1)) * (1 - q ** (4 * n - 2 * N)), n, "C_n denominator")
        return num_a / da, -q ** (2 * n - N + 1) * num_c / dc
    da = _den((1 + q ** (2 * n - N)) * (1 - q ** (4 * n - 2 * N + 2)), n, "A_n denominator")
    dc = _den((1 + q ** (2 * n - N)) * (1 - q ** (4 * n - 2 * N - 2)), n, "C_n denominator")
    return num_a / da, -q ** (2 * n - N) * num_c / dc


def diagonal(grid: str, A, C):
    return -(A + C) if grid == LINEAR else 1 - (A + C)


@dataclass(frozen=True)
class TruncationSpec:
    """Free parameters of a truncation.  Linear: ``(a, d)``; q-linear: ``(a, c)`` with base ``q``.

    ``e_ratio = e2/e1`` defaults to 1; on the q-linear grid it must be an integer.
    """

    grid: str
    N: int
    a: object
    other: object
    q: object = None
    e1: object = Fraction(1)
    e_ratio: object = Fraction(1)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.grid not in (LINEAR, QLINEAR):
            raise ValueError(f"no truncation on grid {self.grid!r}")
        if self.grid == QLINEAR and (self.q is None or Fraction(self.e_ratio).denominator != 1):
            raise ValueError("q-linear truncation needs a numeric q and an integer e2/e1")

    @property
    def j(self) -> int:
        return self.N // 2

    @property
    def odd(self) -> bool:
        return self.N % 2 == 1

    def parameters(self, t):
        """Family parameters ``(a, b, c, d)`` at deformation ``t`` (``s`` on the q-linear grid)."""
        j = self.j
        if self.grid == LINEAR:
            a, d = self.a, self.other
            u1 = self.e1 * t
            u2 = self.e1 * self.e_ratio * t
            c = -a - j + u1
            b = -d - j + u2 + (0 if self.odd else 1)
            return a, b, c, d
        a, c, q = self.a, self.other, self.q
        s1, s2 = t, t ** int(self.e_ratio)
        d = q ** (-2 * j) * s1 / a
        b = q ** (-2 * j + (0 if self.odd else 2)) * s2 / c
        return a, b, c, d

    def family(self, t):
        a, b, c, d = self.parameters(t)
        if self.grid == LINEAR:
            return ContinuousHahn(a, b, c, d, normalization=UPPER)
        qt = self.q * self.q
        return BigQJacobi(a * c / qt, b * d / qt, a * d / qt, self.q)

    def shift(self):
        """``gamma`` or ``c3`` at ``t = 0``."""
        a, b, c, d = self.parameters(0 if self.grid == LINEAR else Fraction(1))
        if self.grid == LINEAR:
            return (b + c) - (a + d) + (0 if self.odd else 1)
        return a * c / self.q ** 2

    def deformation(self) -> RatFunc:
        return RatFunc.symbol("t" if self.grid == LINEAR else "s")

    @property
    def limit_point(self):
        return 0 if self.grid == LINEAR else 1


def verify_limit(spec: TruncationSpec) -> List[Check]:
    fam = spec.family(spec.deformation())
    shift = spec.shift()
    checks = []
    for n in range(spec.N + 1):
        name = f"{spec.grid} N={spec.N} n={n}: t->0 limit of A_n, C_n"
        try:
            rec = recurrence_oracle(fam, n)
            got = (limit_at(rec.A, spec.limit_point), limit_at(rec.C, spec.limit_point))
        except ArithmeticError as exc:
            # a pole with no location is a degenerate parameter draw, independent of t
            if isinstance(exc, PoleError) and exc.point is None:
                raise
            checks.append(check(name, "truncation limit", False, f"pole at t=0: {exc}"))
            continue
        want = para_coeffs(spec.grid, spec.N, shift, n, spec.q)
        checks.append(check(name, "truncation limit", got == want, f"oracle {got} vs closed form {want}"))
    return checks


@dataclass(frozen=True)
class TriDiag:
    grid: str
    A: Tuple[object, ...]
    C: Tuple[object, ...]

    def __post_init__(self):
        if len(self.A) != len(self.C):
            raise ValueError("A and C must have the same length")

    @classmethod
    def para(cls, grid: str, N: int, shift, q=None) -> "TriDiag":
        pairs = [para_coeffs(grid, N, shift, n, q) for n in range(N + 1)]
        return cls(grid, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def size(self) -> int:
        return len(self.A)

    @property
    def diag(self) -> List[object]:
        return [diagonal(self.grid, a, c) for a, c in zip(self.A, self.C)]

    @property
    def products(self) -> List[object]:
        """``A_n C_(n+1)``, the off-diagonal pairing."""
        return [self.A[n] * self.C[n + 1] for n in range(self.size - 1)]

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        for n, v in enumerate(self.diag):
            m[n, n] = float(v)
        for n in range(self.size - 1):
            m[n, n + 1] = float(self.A[n])
            m[n + 1, n] = float(self.C[n + 1])
        return m

    def charpoly(self, var: str = "y") -> LaurentPoly:
        """Exact ``det(y - J)`` by the three-term determinant recurrence."""
        y = LaurentPoly.monomial(1, 1, var)
        prev, cur = LaurentPoly.const(1, var), y - self.diag[0]
        for k in range(1, self.size):
            prev, cur = cur, (y - self.diag[k]) * cur - prev * self.products[k - 1]
        return cur

    def polynomials(self, var: str = "y") -> List[LaurentPoly]:
        """``P_0 .. P_(size-1)`` from ``v P_n = A_n P_(n+1) + B_n P_n + C_n P_(n-1)``, ``P_0 = 1``."""
        y = LaurentPoly.monomial(1, 1, var)
        out = [LaurentPoly.const(1, var)]
        for n in range(self.size - 1):
            nxt = (y - self.diag[n]) * out[n]
            if n > 0:
                nxt = nxt - out[n - 1] * self.C[n]
            out.append(nxt * (1 / _den(self.A[n], n, "A_n")))
        return out


def _charpoly_roots(td: TriDiag) -> np.ndarray:
    coeffs = td.charpoly()
    dense = [float(coeffs[k]) for k in range(td.size, -1, -1)]
    return np.roots(dense)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with two progression fits.

    ``parity``: sorted eigenvalues split by index parity.  ``residue``: split by
    the class of the eigenvalue modulo the fitted step (log-step on the
    q-linear grid), which does not assume the two lattices interlace.
    """

    eigenvalues: Tuple[float, ...]
    method: str
    even: Tuple[float, ...]
    odd: Tuple[float, ...]
    step: Optional[float]
    residual: float
    offset: Optional[float]
    single_residual: float
    residue_classes: Tuple[Tuple[float, ...], ...]
    residue_residual: float


def _coords(seq, geometric: bool) -> np.ndarray:
    return np.log(np.abs(np.asarray(seq))) if geometric else np.asarray(seq, dtype=float)


def _progression_fit(seq: Sequence[float], geometric: bool):
    if len(seq) < 2:
        return None, 0.0
    diffs = np.diff(_coords(seq, geometric))
    step = float(np.mean(diffs))
    return step, float(np.max(np.abs(diffs - step)))


def _residue_split(ev: np.ndarray, geometric: bool, step: float):
    """Group eigenvalues whose coordinates differ by integer multiples of ``step``."""
    coords = _coords(ev, geometric)
    classes: List[List[int]] = []
    for i, c in enumerate(coords):
        for cl in classes:
            k = (c - coords[cl[0]]) / step
            if abs(k - round(k)) < 1e-6:
                cl.append(i)
                break
        else:
            classes.append([i])
    groups = tuple(tuple(float(ev[i]) for i in cl) for cl in classes)
    if len(groups) > 2:
        return groups, float("inf")
    res = 0.0
    for g in groups:
        local = np.sort(_coords(g, geometric))
        if len(local) > 1:
            res = max(res, float(np.max(np.abs(np.diff(local) - abs(step)))))
    return groups, res


def spectrum(grid: str, N: int, shift, q=None) -> Spectrum:
    """Eigenvalues of the truncated Jacobi matrix and their bilattice fits.

    The symmetric eigensolver is used when every ``A_n C_(n+1)`` is positive;
    otherwise the exact characteristic polynomial is solved.  On the q-linear
    grid progressions are geometric and steps are logarithms of ratios.
    """
    td = TriDiag.para(grid, N, shift, q)
    prods = td.products
    if all(p > 0 for p in prods):
        m = np.diag([float(v) for v in td.diag])
        for n, p in enumerate(prods):
            m[n, n + 1] = m[n + 1, n] = float(p) ** 0.5
        ev, method = np.linalg.eigvalsh(m), "symmetric"
    else:
        ev, method = _charpoly_roots(td), "charpoly"
    ev = np.sort(np.real_if_close(ev, tol=1e6).real)
    geometric = grid == QLINEAR
    even, odd = ev[0::2], ev[1::2]
    s_even, r_even = _progression_fit(even, geometric)
    s_odd, r_odd = _progression_fit(odd, geometric)
    step = s_even if s_even is not None else s_odd
    residual = max(r_even, r_odd, abs(s_even - s_odd) if s_odd is not None else 0.0)
    _, single = _progression_fit(ev, geometric)
    offset = None
    if len(odd):
        offset = float(_coords(odd[:1], geometric)[0] - _coords(even[:1], geometric)[0])
    lattice_step = 1.0 if grid == LINEAR else 2 * float(np.log(abs(float(q))))
    classes, residue_res = _residue_split(ev, geometric, lattice_step)
    return Spectrum(tuple(float(v) for v in ev), method, tuple(map(float, even)), tuple(map(float, odd)),
                    step, residual, offset, single, classes, residue_res)


def verify_spectrum(grid: str, N: int, shift, q=None, mode: str = "parity") -> Check:
    """``mode``: ``parity``, ``residue`` (two lattices of the grid step) or ``single``."""
    sp = spectrum(grid, N, shift, q)
    res = {"parity": sp.residual, "single": sp.single_residual, "residue": sp.residue_residual}[mode]
    return check(f"{grid} N={N} shift={shift}: spectrum, {mode} split", "bilattice spectrum",
                 res < PROGRESSION_TOL, f"residual {res:.3e}, eigenvalues {sp.eigenvalues}")


# -- raising operator with the truncation in force ---------------------------------

def truncated_raising(grid: str, N: int, q=None, basis: SHeunBasis | None = None) -> GridOperator:
    """``B`` with ``nu = (N-1)/2`` (linear) or ``w^2 = q^(1-N)`` (q-linear)."""
    if grid == LINEAR:
        b = basis or build_basis(linear())
        nu = Fraction(N - 1, 2)
        return (HALF * (2 * nu + 1) * (2 * nu + 3)) * b.L - b.R1 - (4 * nu + 3) * b.R2
    b = basis or build_basis(qlinear(q))
    w2 = q ** (1 - N)
    return ((1 / w2) * (b.R1 + (1 / q) * b.R2) - w2 * (b.R1 + q * b.R2)) / (2 * (q - 1 / q))


@dataclass(frozen=True)
class NullVectorResult:
    image: LaurentPoly
    charpoly: LaurentPoly
    ratio: object


def _ratio(p: LaurentPoly, r: LaurentPoly):
    if r.is_zero():
        return None
    top = r.degree()
    k = p[top] / r[top]
    return k if (p - r * k).is_zero() and k != 0 else None


def nullvector_check(grid: str, N: int, shift, a, q=None) -> List[Check]:
    """Compare ``B P_N`` with the characteristic polynomial of the truncated Jacobi matrix.

    ``a`` fixes the affine map between the recurrence variable and the grid
    variable: ``y = a - x/2`` (linear) or ``v = a z`` (q-linear).
    """
    td = TriDiag.para(grid, N, shift, q)
    P_N = td.polynomials()[-1]
    chi = td.charpoly()
    if grid == LINEAR:
        to_grid = lambda p: p.affine(-HALF, a, "x")
    else:
        to_grid = lambda p: p.scale(a).with_var("z")
    image = truncated_raising(grid, N, q).apply(to_grid(P_N))
    target = to_grid(chi)
    k = _ratio(image, target)
    label = f"{grid} N={N} shift={shift}"
    return [
        check(f"{label}: deg B P_N = N+1", "null vector", image.degree() == N + 1, image),
        check(f"{label}: B P_N proportional to det(v - J)", "null vector", k is not None,
              f"B P_N = {image}; det(v - J) = {target}"),
    ]


@dataclass(frozen=True)
class RaisingProfile:
    profile: Tuple[float, ...]
    annihilates: bool


def raising_failure_profile(grid: str, N: int, q=None) -> Tuple[RaisingProfile, List[Check]]:
    B = truncated_raising(grid, N, q)
    prof = degree_profile(B, N + 1)
    top = B.apply(monomial(B.grid, N + 1))
    rp = RaisingProfile(tuple(prof), top.is_zero())
    label = f"{grid} N={N}"
    # degree_profile holds deg(B x^n) - n
    checks = [
        check(f"{label}: deg B x^n = n+1 for n <= N", "raising failure",
              all(prof[n] == 1 for n in range(N + 1)), prof),
        check(f"{label}: raise fails at n = N+1", "raising failure", prof[N + 1] < 1, prof),
    ]
    return rp, checks


def first_raising_failure(grid: str, N: int, q=None, nmax: int | None = None) -> Optional[int]:
    B = truncated_raising(grid, N, q)
    prof = degree_profile(B, nmax if nmax is not None else N + 3)
    return next((n for n, d in enumerate(prof) if d < 1), None)


def positivity(grid: str, N: int, shift, q=None) -> bool:
    return all(p > 0 for p in TriDiag.para(grid, N, shift, q).products)


__all__ = [
    "para_coeffs", "TruncationSpec", "verify_limit", "TriDiag", "Spectrum", "spectrum", "verify_spectrum",
    "truncated_raising", "nullvector_check", "raising_failure_profile", "first_raising_failure", "RaisingProfile", "positivity",
    "diagonal",
]
