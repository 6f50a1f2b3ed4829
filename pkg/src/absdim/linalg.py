"""Complex Hermitian linear algebra: states, projectors, POVMs, ensembles.

All matrices are dense double-precision complex arrays. Objects are immutable
after construction and validated against their invariants at construction
time. Indices are 0-based throughout the code; the file format documented in
docs/format.md uses 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ValidationError

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
PROJECTOR_TOL = 1e-9
POVM_COMPLETENESS_TOL = 1e-8
UNITARY_TOL = 1e-10
STATE_NORM_TOL = 1e-10
RANK_REL_TOL = 1e-9


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Symmetrize (A + A†)/2 to kill roundoff asymmetry before eigensolves."""
    a = np.asarray(a, dtype=complex)
    return 0.5 * (a + a.conj().T)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def check_hermitian(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{what} must be square, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T)) > HERMITICITY_TOL:
        raise ValidationError(f"{what} is not Hermitian within {HERMITICITY_TOL}")
    return hermitian_part(a)


def eigvalsh(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, after symmetrization."""
    return np.linalg.eigvalsh(hermitian_part(a))


@dataclass(frozen=True)
class HermitianOperator:
    """A d-by-d complex Hermitian matrix; symmetrized at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix, type(self).__name__)
        object.__setattr__(self, "matrix", _frozen(m))
        self._validate()

    def _validate(self):
        pass

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class DensityMatrix(HermitianOperator):
    """Unit-trace positive semidefinite operator."""

    def _validate(self):
        ev = self.eigenvalues()
        if ev[0] < -PSD_TOL:
            raise ValidationError(f"density matrix has eigenvalue {ev[0]:.3e} < -{PSD_TOL}")
        tr = float(np.trace(self.matrix).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace {tr} differs from 1 beyond {TRACE_TOL}")


@dataclass(frozen=True)
class SubspaceProjector(HermitianOperator):
    """Rank-r orthogonal projector defining the subspace a sub-ensemble lives in."""

    rank: int = 0

    def _validate(self):
        p = self.matrix
        if np.linalg.norm(p @ p - p) > PROJECTOR_TOL:
            raise ValidationError("projector is not idempotent")
        tr = float(np.trace(p).real)
        if self.rank < 1 or abs(tr - self.rank) > PROJECTOR_TOL:
            raise ValidationError(f"projector trace {tr} does not match rank {self.rank}")


@dataclass(frozen=True)
class Povm:
    """A family of PSD operators summing to the identity."""

    elements: tuple[HermitianOperator, ...]

    def __init__(self, elements: Iterable[HermitianOperator | np.ndarray]):
        elems = tuple(
            e if isinstance(e, HermitianOperator) else HermitianOperator(e) for e in elements
        )
        if not elems:
            raise ValidationError("POVM needs at least one element")
        d = elems[0].dim
        if any(e.dim != d for e in elems):
            raise ValidationError("POVM elements must share a dimension")
        for i, e in enumerate(elems):
            if e.eigenvalues()[0] < -PSD_TOL:
                raise ValidationError(f"POVM element {i} is not PSD")
        total = sum(e.matrix for e in elems)
        if np.linalg.norm(total - np.eye(d)) > POVM_COMPLETENESS_TOL:
            raise ValidationError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Ensemble:
    """An ordered list of density matrices on a common d-dimensional space."""

    dim: int
    states: tuple[DensityMatrix, ...] = field(default=())

    def __init__(self, states: Iterable[DensityMatrix | np.ndarray]):
        sts = tuple(s if isinstance(s, DensityMatrix) else DensityMatrix(s) for s in states)
        if not sts:
            raise ValidationError("ensemble needs at least one state")
        d = sts[0].dim
        if any(s.dim != d for s in sts):
            raise ValidationError("ensemble states must share a dimension")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "states", sts)

    @property
    def size(self) -> int:
        return len(self.states)

    def matrices(self) -> list[np.ndarray]:
        return [s.matrix for s in self.states]


def as_rng(seed) -> np.random.Generator:
    """Accept a seed or an existing Generator; PCG64 under the hood."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def make_isotropic(psi: np.ndarray, v: float) -> DensityMatrix:
    """Mix the pure state |psi><psi| with white noise at visibility v."""
    psi = np.asarray(psi, dtype=complex).ravel()
    d = psi.size
    if abs(np.linalg.norm(psi) - 1.0) > STATE_NORM_TOL:
        raise ValidationError("state vector is not normalized")
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"visibility {v} outside [0, 1]")
    rho = v * np.outer(psi, psi.conj()) + (1.0 - v) / d * np.eye(d)
    return DensityMatrix(rho)


def isotropic_ensemble(pure_states: Sequence[np.ndarray], v: float) -> Ensemble:
    """Apply the same isotropic noise to every pure state in the list."""
    return Ensemble([make_isotropic(p, v) for p in pure_states])


def span_dimension(pure_states: Sequence[np.ndarray]) -> int:
    """Number of linearly independent vectors, by Gram-matrix rank.

    Singular values below RANK_REL_TOL times the largest one count as zero.
    """
    if len(pure_states) == 0:
        raise DomainError("empty state list")
    vecs = np.array([np.asarray(p, complex).ravel() for p in pure_states])
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(np.abs(norms - 1.0) > STATE_NORM_TOL):
        raise ValidationError("state vectors must be normalized")
    sv = np.linalg.svd(vecs, compute_uv=False)
    return int(np.sum(sv > RANK_REL_TOL * sv[0]))


def haar_random_unitary(d: int, rng_seed=None) -> np.ndarray:
    """Draw a Haar-distributed d-by-d unitary.

    Ginibre matrix followed by QR; the triangular factor's diagonal phases
    are divided out so the distribution is exactly Haar rather than merely
    unitary.
    """
    return haar_random_unitaries(d, 1, rng_seed)[0]


def haar_random_unitaries(d: int, n: int, rng_seed=None) -> np.ndarray:
    """Batched Haar sampling, shape (n, d, d); same construction as above."""
    if d < 1:
        raise DomainError(f"dimension {d} must be >= 1")
    rng = as_rng(rng_seed)
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[:, np.newaxis, :]


def haar_random_state(d: int, rng_seed=None) -> np.ndarray:
    """A Haar-random pure state vector (first column of a Haar unitary)."""
    return haar_random_unitary(d, rng_seed)[:, 0]


def projector_from_basis_subset(u: np.ndarray, subset: Sequence[int]) -> SubspaceProjector:
    """Projector onto the span of the selected columns of the unitary U."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if np.linalg.norm(u.conj().T @ u - np.eye(d)) > UNITARY_TOL:
        raise ValidationError("matrix is not unitary")
    idx = list(subset)
    if len(set(idx)) != len(idx):
        raise DomainError(f"duplicate indices in subset {idx}")
    if any(i < 0 or i >= d for i in idx):
        raise DomainError(f"subset index out of range 0..{d - 1}: {idx}")
    cols = u[:, idx]
    return SubspaceProjector(cols @ cols.conj().T, rank=len(idx))


def fourier_matrix(d: int) -> np.ndarray:
    """F_jk = exp(2*pi*i*j*k/d)/sqrt(d), j,k in 0..d-1."""
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * j * k / d) / np.sqrt(d)


def basis_state(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def computational_basis(d: int) -> list[np.ndarray]:
    return [basis_state(d, i) for i in range(d)]


def computational_povm(d: int) -> Povm:
    return Povm([np.outer(e, e.conj()) for e in computational_basis(d)])
