"""Independent ground-truth checks for the certification pipeline.

These routines avoid the witness/SDP machinery entirely: rank-1 simulability
is a pairwise-equality test, the absolute dimension of a pure ensemble is a
Gram rank, and the stabilizer twirl empirically projects any state onto the
isotropic family about a reference vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .linalg import (
    DensityMatrix,
    Ensemble,
    as_rng,
    haar_random_unitaries,
    hermitian_part,
    span_dimension,
)

EQUALITY_TOL = 1e-9
PURITY_TOL = 1e-9


def is_one_simulable(ensemble: Ensemble) -> bool:
    """True iff all states coincide (the only rank-1 simulable ensembles)."""
    mats = ensemble.matrices()
    first = mats[0]
    return all(np.linalg.norm(m - first) <= EQUALITY_TOL for m in mats[1:])


def pure_ensemble_absolute_dimension(pure_states: Sequence[np.ndarray]) -> int:
    """Exact absolute dimension of an all-pure ensemble: its span dimension."""
    if len(pure_states) == 0:
        raise DomainError("empty state list")
    for i, p in enumerate(pure_states):
        vec = np.asarray(p, complex).ravel()
        rho = np.outer(vec, vec.conj())
        if np.linalg.norm(rho @ rho - rho) > PURITY_TOL:
            raise ValidationError(f"state {i} is not pure within {PURITY_TOL}")
    return span_dimension(pure_states)


def complete_basis(psi: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis whose first column is psi.

    Pivot rule: drop the computational basis vector with the largest overlap
    against psi, append the rest, orthonormalize by QR, and fix column phases
    so runs are reproducible.
    """
    psi = np.asarray(psi, complex).ravel()
    d = psi.size
    pivot = int(np.argmax(np.abs(psi)))
    cols = [psi] + [np.eye(d, dtype=complex)[:, i] for i in range(d) if i != pivot]
    q, r = np.linalg.qr(np.array(cols).T)
    diag = np.diagonal(r)
    return q * (diag.conj() / np.abs(diag))


@dataclass(frozen=True)
class TwirlResult:
    average: DensityMatrix
    fitted_visibility: float
    residual: float  # Frobenius distance to the fitted isotropic state
    standard_error: float  # bootstrap scale of the residual


def twirl_about_state(
    rho: DensityMatrix,
    psi: np.ndarray,
    n_samples: int,
    seed=None,
    n_bootstrap: int = 100,
) -> TwirlResult:
    """Average U rho U' over random unitaries that leave |psi> fixed.

    Each sample is 1 (+) V with V Haar on the orthogonal complement of psi.
    The limit is the isotropic state about psi whose visibility v satisfies
    <psi|rho|psi> = v + (1-v)/d; the empirical average, the fitted v and the
    off-isotropic residual are returned.
    """
    psi = np.asarray(psi, complex).ravel()
    d = psi.size
    if rho.dim != d:
        raise ValidationError("state and reference vector dimensions differ")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValidationError("reference vector is not normalized")
    if n_samples < 1:
        raise DomainError("need at least one sample")
    rng = as_rng(seed)

    basis = complete_basis(psi)
    rho_b = basis.conj().T @ rho.matrix @ basis  # frame with psi as first vector
    blocks = haar_random_unitaries(d - 1, n_samples, rng) if d > 1 else None

    samples = np.empty((n_samples, d, d), dtype=complex)
    for i in range(n_samples):
        u = np.eye(d, dtype=complex)
        if blocks is not None:
            u[1:, 1:] = blocks[i]
        samples[i] = u @ rho_b @ u.conj().T
    mean_b = hermitian_part(samples.mean(axis=0))
    mean = hermitian_part(basis @ mean_b @ basis.conj().T)

    # the fitted coefficient can be slightly negative (overlap below 1/d);
    # the limiting state is still PSD, so no clamping here
    overlap = float((psi.conj() @ rho.matrix @ psi).real)
    v = float((overlap - 1.0 / d) / (1.0 - 1.0 / d)) if d > 1 else 1.0
    target = v * np.outer(psi, psi.conj()) + (1.0 - v) / d * np.eye(d)
    residual = float(np.linalg.norm(mean - target))
    boot = np.empty(n_bootstrap)
    for b in range(n_bootstrap):
        idx = rng.integers(0, n_samples, size=n_samples)
        boot[b] = np.linalg.norm(hermitian_part(samples[idx].mean(axis=0)) - mean_b)
    return TwirlResult(
        average=DensityMatrix(mean),
        fitted_visibility=v,
        residual=residual,
        standard_error=float(np.sqrt(np.mean(boot**2))),
    )
