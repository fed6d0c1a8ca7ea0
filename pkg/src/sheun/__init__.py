"""Exact operator calculus for S-Heun operators on continuum, linear and q-linear grids."""

from .families import BigQJacobi, ContinuousHahn, Jacobi
from .generators import SParams, build_basis, build_general_S, decompose, normal_order
from .heun import HeunCombo, assemble, factorize
from .operators import GridOperator, continuum, linear, qlinear
from .scalars import GRat, PoleError, RatFunc
from .sklyanin import build_realization
from .structure import build_structure
from .suites import run_suite

__all__ = [
    "BigQJacobi", "ContinuousHahn", "Jacobi", "SParams", "build_basis", "build_general_S", "decompose",
    "normal_order", "HeunCombo", "assemble", "factorize", "GridOperator", "continuum", "linear", "qlinear",
    "GRat", "PoleError", "RatFunc", "build_realization", "build_structure", "run_suite",
]
