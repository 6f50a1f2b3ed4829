"""Thin conic-solver interface: Hermitian PSD blocks, scalars, linear
equalities, linear objective.

Science code builds a problem through this class only; the concrete backend
(cvxpy driving a conic solver, CLARABEL by default) is wired up here so that
solver quirks, tolerance settings and status normalization stay out of the
numerics. Swapping the backend means reimplementing ``solve`` alone.

cvxpy's Hermitian variables keep the complex PSD cone native; no real
embedding is needed with the default backend.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .errors import SolverError

DEFAULT_SOLVER = "CLARABEL"

# statuses we accept; "inaccurate" ones are surfaced in the report so callers
# can decide whether their tolerance regime cares
_OK_STATUSES = {cp.OPTIMAL, cp.OPTIMAL_INACCURATE}


@dataclass
class SolveReport:
    status: str
    optimal_value: float
    iterations: int | None
    solve_time: float | None

    @property
    def accurate(self) -> bool:
        return self.status == cp.OPTIMAL


class SdpProblem:
    """A semidefinite program assembled from PSD blocks and equalities."""

    def __init__(self):
        self._constraints = []
        self._objective = None

    def hermitian_psd(self, n: int) -> cp.Variable:
        """A fresh n-by-n Hermitian variable constrained to the PSD cone."""
        var = cp.Variable((n, n), hermitian=True)
        self._constraints.append(var >> 0)
        return var

    def scalar(self, nonneg: bool = False) -> cp.Variable:
        return cp.Variable(nonneg=nonneg)

    def scalars(self, n: int, nonneg: bool = False) -> cp.Variable:
        return cp.Variable(n, nonneg=nonneg)

    def require_eq(self, lhs, rhs):
        self._constraints.append(lhs == rhs)

    def require_le(self, lhs, rhs):
        self._constraints.append(lhs <= rhs)

    def maximize(self, expr):
        self._objective = cp.Maximize(expr)

    def solve(self, solver: str = DEFAULT_SOLVER, **solver_options) -> SolveReport:
        if self._objective is None:
            raise SolverError("no objective set")
        problem = cp.Problem(self._objective, self._constraints)
        try:
            # inaccurate-solution warnings are redundant: the status is
            # normalized into the report for callers to inspect
            with warnings.catch_warnings():
                warnings.filterwarnings(
                    "ignore", message="Solution may be inaccurate", category=UserWarning
                )
                problem.solve(solver=solver, **solver_options)
        except cp.error.SolverError as exc:
            raise SolverError(f"backend {solver} failed: {exc}") from exc
        if problem.status not in _OK_STATUSES:
            raise SolverError(f"backend {solver} returned status {problem.status}")
        stats = problem.solver_stats
        return SolveReport(
            status=problem.status,
            optimal_value=float(problem.value),
            iterations=getattr(stats, "num_iters", None),
            solve_time=getattr(stats, "solve_time", None),
        )


def trace(var):
    """tr(X) as an affine expression (real part for Hermitian variables)."""
    return cp.real(cp.trace(var))


def trace_inner(a: np.ndarray, var):
    """Real inner product tr(A X) of a constant matrix with a variable."""
    return cp.real(cp.trace(a @ var))


def total(exprs):
    """Sum of a sequence of expressions."""
    return cp.sum(exprs)


def value(var) -> np.ndarray:
    """Extract the solved value of a variable as a plain array/float."""
    v = var.value
    if v is None:
        raise SolverError("variable has no value; was the problem solved?")
    return np.asarray(v)
