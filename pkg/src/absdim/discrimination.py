"""Minimum-error state discrimination as a semidefinite program.

The optimal average success probability w_disc of discriminating the m
states of an ensemble (uniform prior) is bounded by r/m whenever the
ensemble admits a rank-r simulation, independently of the measurement. The
SDP value therefore certifies the lower bound ceil(m * w_disc) on the
absolute dimension without any measurement design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conic import DEFAULT_SOLVER, SdpProblem, SolveReport, trace_inner, value
from .errors import DomainError, SolverError
from .linalg import Ensemble, Povm, hermitian_part

GAP_TOL = 1e-8
CERTIFY_SLACK = 1e-7  # per-unit slack in the ceiling, avoids off-by-one at r/m
CLEANING_TOL = 1e-7  # max objective change allowed by POVM cleaning


@dataclass(frozen=True)
class DiscriminationResult:
    w_disc: float
    povm: Povm
    certified_lower_bound: int
    report: SolveReport

    def recomputed_value(self, ensemble: Ensemble) -> float:
        """Primal objective re-evaluated from the cleaned POVM."""
        return float(
            sum(
                np.trace(rho @ m.matrix).real
                for rho, m in zip(ensemble.matrices(), self.povm.elements)
            )
            / ensemble.size
        )


def _clean_povm(raw: list[np.ndarray]) -> Povm:
    """Symmetrize, clip tiny negative eigenvalues, restore completeness.

    Renormalization is T^(-1/2) M T^(-1/2) with T the element sum; for solver
    output T is within ~1e-8 of the identity, so the perturbation is tiny.
    """
    clipped = []
    for m in raw:
        m = hermitian_part(m)
        w, v = np.linalg.eigh(m)
        w = np.clip(w, 0.0, None)
        clipped.append(v @ np.diag(w) @ v.conj().T)
    total = hermitian_part(sum(clipped))
    w, v = np.linalg.eigh(total)
    inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return Povm([inv_sqrt @ m @ inv_sqrt for m in clipped])


def optimal_discrimination(ensemble: Ensemble, solver: str = DEFAULT_SOLVER) -> DiscriminationResult:
    """Maximize (1/m) sum_x tr(rho_x M_x) over POVMs {M_x}."""
    m = ensemble.size
    d = ensemble.dim
    if m < 2:
        raise DomainError("discrimination needs at least two states")

    prob = SdpProblem()
    povm_vars = [prob.hermitian_psd(d) for _ in range(m)]
    prob.require_eq(sum(povm_vars), np.eye(d))
    objective = sum(
        trace_inner(rho, var) for rho, var in zip(ensemble.matrices(), povm_vars)
    ) / m
    prob.maximize(objective)
    report = prob.solve(solver=solver)

    povm = _clean_povm([value(var) for var in povm_vars])
    w_raw = float(report.optimal_value)
    w_clean = float(
        sum(np.trace(rho @ e.matrix).real for rho, e in zip(ensemble.matrices(), povm.elements)) / m
    )
    if abs(w_clean - w_raw) > CLEANING_TOL:
        raise SolverError(
            f"POVM cleaning moved the objective by {abs(w_clean - w_raw):.2e} > {CLEANING_TOL}"
        )
    return DiscriminationResult(
        w_disc=w_clean,
        povm=povm,
        certified_lower_bound=_lower_bound(w_clean, m, d),
        report=report,
    )


def _lower_bound(w_disc: float, m: int, d: int) -> int:
    # smallest r with w_disc <= r/m + CERTIFY_SLACK
    r = math.ceil(m * w_disc - CERTIFY_SLACK * m)
    return int(min(max(r, 1), d))


def certify_via_discrimination(ensemble: Ensemble, solver: str = DEFAULT_SOLVER) -> int:
    """Lower bound on the absolute dimension from the discrimination value."""
    return optimal_discrimination(ensemble, solver=solver).certified_lower_bound
