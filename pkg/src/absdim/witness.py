"""Linear witnesses certifying lower bounds on the absolute dimension.

A witness is a nonnegative linear functional of measurement statistics,
W = sum_{b,x,y} c[b,x,y] tr(rho_x M_{b|y}). Every ensemble that can be
simulated with rank-r subspaces obeys W <= beta_r, where beta_r is the sum
of the r largest eigenvalues of sum_x O_x with O_x = sum_{b,y} c[b,x,y]
M_{b|y}. A measured value above beta_r therefore certifies absolute
dimension at least r + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .linalg import Ensemble, HermitianOperator, Povm, hermitian_part

VIOLATION_TOL = 1e-9  # slack when comparing W against beta_r


@dataclass(frozen=True)
class WitnessSpec:
    """Measurements {M_{b|y}} plus nonnegative coefficients c[y][b, x].

    ``coefficients[y]`` is an array of shape (outcomes of measurement y, m);
    all entries must be nonnegative.
    """

    measurements: tuple[Povm, ...]
    coefficients: tuple[np.ndarray, ...]
    m: int

    def __init__(self, measurements: Sequence[Povm], coefficients: Sequence[np.ndarray]):
        meas = tuple(measurements)
        if not meas:
            raise ValidationError("witness needs at least one measurement")
        d = meas[0].dim
        if any(p.dim != d for p in meas):
            raise ValidationError("all measurements must share a dimension")
        if len(coefficients) != len(meas):
            raise ValidationError("one coefficient block per measurement required")
        coeffs = []
        m = None
        for y, c in enumerate(coefficients):
            c = np.asarray(c, dtype=float)
            if c.ndim != 2 or c.shape[0] != meas[y].n_outcomes:
                raise ValidationError(
                    f"coefficient block {y} must have shape (outcomes, m), got {c.shape}"
                )
            if m is None:
                m = c.shape[1]
            elif c.shape[1] != m:
                raise ValidationError("coefficient blocks disagree on the number of states")
            if np.any(c < 0):
                raise ValidationError("witness coefficients must be nonnegative")
            c = c.copy()
            c.setflags(write=False)
            coeffs.append(c)
        object.__setattr__(self, "measurements", meas)
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    def scaled(self, t: float) -> "WitnessSpec":
        """Multiply every coefficient by t > 0."""
        if t <= 0:
            raise DomainError("scale factor must be positive")
        return WitnessSpec(self.measurements, [t * c for c in self.coefficients])


@dataclass(frozen=True)
class WitnessCertificate:
    witness_value: float
    bounds: tuple[float, ...]  # beta_r for r = 1..d
    certified_lower_bound: int


def discrimination_spec(povm: Povm, m: int | None = None) -> WitnessSpec:
    """The state-discrimination witness: one measurement, c[b, x] = delta_{b,x}/m."""
    if m is None:
        m = povm.n_outcomes
    if m != povm.n_outcomes:
        raise ValidationError("discrimination witness needs one POVM element per state")
    return WitnessSpec([povm], [np.eye(m) / m])


def _check_match(spec: WitnessSpec, ensemble: Ensemble):
    if ensemble.dim != spec.dim:
        raise ValidationError(f"dimension mismatch: spec {spec.dim}, ensemble {ensemble.dim}")
    if ensemble.size != spec.m:
        raise ValidationError(f"cardinality mismatch: spec m={spec.m}, ensemble m={ensemble.size}")


def witness_value(spec: WitnessSpec, ensemble: Ensemble) -> float:
    """Evaluate W = sum_{b,x,y} c[b,x,y] tr(rho_x M_{b|y})."""
    _check_match(spec, ensemble)
    total = 0.0
    for x, rho in enumerate(ensemble.matrices()):
        ox = operator_for_state(spec, x).matrix
        total += float(np.trace(rho @ ox).real)
    return total


def operator_for_state(spec: WitnessSpec, x: int) -> HermitianOperator:
    """O_x = sum_{b,y} c[b,x,y] M_{b|y}; PSD by nonnegativity of c."""
    if not 0 <= x < spec.m:
        raise DomainError(f"state index {x} out of range 0..{spec.m - 1}")
    d = spec.dim
    acc = np.zeros((d, d), dtype=complex)
    for povm, c in zip(spec.measurements, spec.coefficients):
        for b, elem in enumerate(povm.elements):
            if c[b, x] != 0.0:
                acc += c[b, x] * elem.matrix
    return HermitianOperator(acc)


def operator_total(spec: WitnessSpec) -> HermitianOperator:
    """sum_x O_x, the operator whose top-r eigenvalue sums bound the witness."""
    d = spec.dim
    acc = np.zeros((d, d), dtype=complex)
    for povm, c in zip(spec.measurements, spec.coefficients):
        weights = c.sum(axis=1)
        for b, elem in enumerate(povm.elements):
            if weights[b] != 0.0:
                acc += weights[b] * elem.matrix
    return HermitianOperator(acc)


def witness_bound(spec: WitnessSpec, r: int) -> float:
    """beta_r: the sum of the r largest eigenvalues of sum_x O_x."""
    d = spec.dim
    if not 1 <= r <= d:
        raise DomainError(f"rank {r} out of range 1..{d}")
    ev = operator_total(spec).eigenvalues()  # ascending
    return float(np.sum(ev[d - r:]))


def certify(spec: WitnessSpec, ensemble: Ensemble) -> WitnessCertificate:
    """Compute W, all bounds beta_1..beta_d, and the certified lower bound.

    The certified bound is 1 + max{r : W > beta_r + VIOLATION_TOL}, or 1 when
    no bound is violated; it never exceeds d.
    """
    _check_match(spec, ensemble)
    d = spec.dim
    w = witness_value(spec, ensemble)
    ev = operator_total(spec).eigenvalues()
    bounds = tuple(float(np.sum(ev[d - r:])) for r in range(1, d + 1))
    certified = 1
    for r in range(1, d + 1):
        if w > bounds[r - 1] + VIOLATION_TOL:
            certified = min(r + 1, d)
    return WitnessCertificate(w, bounds, certified)


def vcrit_witness(d: int, r: int) -> float:
    """Critical visibility (r-1)/(d-1) above which the discrimination witness
    detects absolute dimension > r, for ensembles discriminated at rate d/m."""
    if d < 2:
        raise DomainError("need dimension d >= 2")
    if not 1 <= r <= d:
        raise DomainError(f"rank {r} out of range 1..{d}")
    return (r - 1) / (d - 1)


def accessible_info(w_disc: float, m: int) -> float:
    """One-shot accessible information log2(m * w_disc), in bits.

    An ensemble of absolute dimension r carries at most log2(r) bits, which is
    equivalent to w_disc <= r/m.
    """
    if m < 1:
        raise DomainError("need m >= 1")
    if not 1.0 / m - 1e-12 <= w_disc <= 1.0 + 1e-12:
        raise DomainError(f"discrimination value {w_disc} outside [1/m, 1]")
    return float(np.log2(max(m * w_disc, 1.0)))


def tightness_diagnostic(spec: WitnessSpec, r: int, rank_tol: float = 1e-9) -> list[int]:
    """Ranks of P* O_x P* at the bound-optimizing subspace P*.

    beta_r is attained when every compression P* O_x P* is rank one; this
    reports those ranks so the user can judge whether the bound is tight.
    No decision procedure is claimed.
    """
    d = spec.dim
    if not 1 <= r <= d:
        raise DomainError(f"rank {r} out of range 1..{d}")
    w, vecs = np.linalg.eigh(operator_total(spec).matrix)
    top = vecs[:, d - r:]  # eigenvectors of the r largest eigenvalues
    pstar = top @ top.conj().T
    ranks = []
    for x in range(spec.m):
        comp = hermitian_part(pstar @ operator_for_state(spec, x).matrix @ pstar)
        ev = np.abs(np.linalg.eigvalsh(comp))
        scale = ev.max() if ev.max() > 0 else 1.0
        ranks.append(int(np.sum(ev > rank_tol * scale)))
    return ranks
