"""Explicit rank-r simulation models for isotropically noisy pure ensembles.

A Simulation is a finite mixture of sub-ensembles, each confined to a rank-r
subspace. The builders here realize the closed-form critical visibilities:
the C(d, r) subset construction for a full orthonormal basis, and the
two-part construction for m < d orthonormal states. A Monte-Carlo routine
verifies the continuous Haar-average model that those visibilities come from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .linalg import (
    DensityMatrix,
    Ensemble,
    SubspaceProjector,
    as_rng,
    computational_basis,
    haar_random_unitaries,
    hermitian_part,
    make_isotropic,
)

WEIGHT_TOL = 1e-9
CONFINEMENT_TOL = 1e-9
PROJECTION_REJECT_TOL = 1e-12  # near-zero <psi|P|psi> samples are redrawn


@dataclass(frozen=True)
class SimulationComponent:
    weight: float
    projector: SubspaceProjector
    states: tuple[DensityMatrix, ...]


@dataclass(frozen=True)
class Simulation:
    """Finite mixture (q_k, P_k, {sigma_{x,k}}) with every sigma confined to P_k."""

    r: int
    components: tuple[SimulationComponent, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValidationError("simulation needs at least one component")
        m = len(comps[0].states)
        total = 0.0
        for c in comps:
            if c.weight < 0:
                raise ValidationError("component weights must be nonnegative")
            if c.projector.rank != self.r:
                raise ValidationError(
                    f"component projector rank {c.projector.rank} != simulation rank {self.r}"
                )
            if len(c.states) != m:
                raise ValidationError("components disagree on the number of states")
            p = c.projector.matrix
            for s in c.states:
                if np.linalg.norm(p @ s.matrix @ p - s.matrix) > CONFINEMENT_TOL:
                    raise ValidationError("component state is not confined to its subspace")
            total += c.weight
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"component weights sum to {total}, not 1")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return len(self.components[0].states)

    @property
    def dim(self) -> int:
        return self.components[0].projector.dim


def reconstruct(sim: Simulation) -> Ensemble:
    """The ensemble rho_x = sum_k q_k sigma_{x,k} realized by the simulation."""
    d = sim.dim
    states = []
    for x in range(sim.m):
        rho = np.zeros((d, d), dtype=complex)
        for c in sim.components:
            rho += c.weight * c.states[x].matrix
        states.append(DensityMatrix(hermitian_part(rho)))
    return Ensemble(states)


def vcrit_general(d: int, r: int) -> float:
    """Visibility up to which any m pure states in dimension d are r-simulable."""
    if d < 2:
        raise DomainError("need d >= 2")
    if not 1 <= r <= d:
        raise DomainError(f"rank {r} out of range 1..{d}")
    return (r - 1) / (d - 1)


def vcrit_m_states(d: int, m: int, r: int) -> float:
    """Improved visibility threshold for m <= d orthonormal pure states."""
    if not 1 <= r <= m <= d:
        raise DomainError(f"need 1 <= r <= m <= d, got r={r}, m={m}, d={d}")
    denom = d * (m - r) + r - 1
    if denom <= 0:
        raise DomainError(f"degenerate case r={r}, m={m}: vanishing denominator")
    v = (r - 1) * (d * (m - r) + m) / (m * denom)
    return min(v, 1.0)


def vcrit_subspace(d: int, s: int, r: int) -> float:
    """Visibility threshold for ensembles confined to an s-dimensional subspace."""
    if not 1 <= r <= s <= d:
        raise DomainError(f"need 1 <= r <= s <= d, got r={r}, s={s}, d={d}")
    denom = d - 1 - r * (d / s - 1)
    if denom <= 0:
        raise DomainError(f"vanishing denominator for d={d}, s={s}, r={r}")
    return min((r - 1) / denom, 1.0)


def _pure(vec: np.ndarray) -> DensityMatrix:
    return DensityMatrix(np.outer(vec, vec.conj()))


def build_finite_orthonormal_simulation(d: int, r: int) -> Simulation:
    """C(d, r) uniform-weight subset construction for the computational basis.

    For each size-r index subset S: the component state for x is |x><x| when
    x is in S and P_S / r otherwise. The reconstruction is exactly the
    isotropic basis ensemble at visibility (r-1)/(d-1).
    """
    if d < 1 or not 1 <= r <= d:
        raise DomainError(f"need 1 <= r <= d, got r={r}, d={d}")
    basis = computational_basis(d)
    weight = float(Fraction(1, comb(d, r)))
    components = []
    for subset in combinations(range(d), r):
        proj = np.zeros((d, d), dtype=complex)
        for i in subset:
            proj[i, i] = 1.0
        projector = SubspaceProjector(proj, rank=r)
        inside = set(subset)
        states = tuple(
            _pure(basis[x]) if x in inside else DensityMatrix(proj / r) for x in range(d)
        )
        components.append(SimulationComponent(weight, projector, states))
    return Simulation(r=r, components=tuple(components))


def _check_orthonormal(vectors: np.ndarray, what: str):
    gram = vectors @ vectors.conj().T
    if np.linalg.norm(gram - np.eye(vectors.shape[0])) > 1e-9:
        raise ValidationError(f"{what} vectors are not orthonormal")


def build_m_state_simulation(
    d: int,
    m: int,
    r: int,
    state_basis: Sequence[np.ndarray] | None = None,
    complement_basis: Sequence[np.ndarray] | None = None,
) -> Simulation:
    """Finite simulation of m < d orthonormal states at the improved visibility.

    Mixes two families with weight alpha = (m-1)(m-r+1) / (d(m-r) + r - 1):
    the C(m, r) subset construction inside the span of the m states, and, for
    each complement basis vector phi and each size-(r-1) subset T of states,
    a component whose projector spans phi and T; its state for x is the pure
    state x when x is in T and phi otherwise. Defaults to the computational
    basis split (first m vectors vs the rest).
    """
    if not 1 <= r <= m < d:
        raise DomainError(f"need 1 <= r <= m < d, got r={r}, m={m}, d={d}")
    denom = d * (m - r) + r - 1
    if denom <= 0:
        raise DomainError(f"degenerate case r={r}, m={m}: vanishing denominator")

    if state_basis is None:
        full = computational_basis(d)
        state_basis = full[:m]
        if complement_basis is None:
            complement_basis = full[m:]
    if complement_basis is None:
        raise ValidationError("complement basis required when a state basis is given")
    psis = np.array([np.asarray(v, complex).ravel() for v in state_basis])
    phis = np.array([np.asarray(v, complex).ravel() for v in complement_basis])
    if psis.shape != (m, d) or phis.shape != (d - m, d):
        raise ValidationError("basis vector counts must be (m, d - m) with length d")
    _check_orthonormal(np.vstack([psis, phis]), "state plus complement")

    alpha = Fraction((m - 1) * (m - r + 1), denom)
    components: list[SimulationComponent] = []

    # inner C(m, r) construction on the span of the m states
    if alpha > 0:
        w1 = float(alpha / comb(m, r))
        for subset in combinations(range(m), r):
            cols = psis[list(subset)].T
            proj = cols @ cols.conj().T
            projector = SubspaceProjector(hermitian_part(proj), rank=r)
            inside = set(subset)
            states = tuple(
                _pure(psis[x]) if x in inside else DensityMatrix(hermitian_part(proj / r))
                for x in range(m)
            )
            components.append(SimulationComponent(w1, projector, states))

    # complement construction: (d - m) * C(m, r - 1) components
    if alpha < 1:
        w2 = float((1 - alpha) / ((d - m) * comb(m, r - 1)))
        for y in range(d - m):
            phi = phis[y]
            for subset in combinations(range(m), r - 1):
                cols = [phi] + [psis[i] for i in subset]
                mat = np.array(cols).T
                proj = mat @ mat.conj().T
                projector = SubspaceProjector(hermitian_part(proj), rank=r)
                inside = set(subset)
                states = tuple(
                    _pure(psis[x]) if x in inside else _pure(phi) for x in range(m)
                )
                components.append(SimulationComponent(w2, projector, states))

    return Simulation(r=r, components=tuple(components))


@dataclass(frozen=True)
class HaarCheckReport:
    """Empirical Haar-average of projected-renormalized states, per input state."""

    r: int
    n_samples: int
    empirical: tuple[DensityMatrix, ...]
    targets: tuple[DensityMatrix, ...]
    distances: tuple[float, ...]  # Frobenius distance empirical vs target
    standard_errors: tuple[float, ...]  # bootstrap SE of each distance
    n_rejected: int
    reject_threshold: float = PROJECTION_REJECT_TOL

    @property
    def within_3_sigma(self) -> bool:
        return all(d <= 3 * se for d, se in zip(self.distances, self.standard_errors))


def monte_carlo_haar_check(
    pure_states: Sequence[np.ndarray],
    r: int,
    n_samples: int,
    seed=None,
    n_bootstrap: int = 100,
    batch: int = 4096,
) -> HaarCheckReport:
    """Sample the Haar-average model and compare with its closed form.

    Each sample projects |psi> onto the span of the first r columns of a Haar
    unitary and renormalizes; the average should be the isotropic state at
    visibility (r-1)/(d-1). Samples with projection weight below the reject
    threshold are redrawn and counted.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    vecs = [np.asarray(p, complex).ravel() for p in pure_states]
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise ValidationError("states must share a dimension")
    if not 1 <= r <= d:
        raise DomainError(f"rank {r} out of range 1..{d}")
    rng = as_rng(seed)
    v_target = (r - 1) / (d - 1) if d > 1 else 1.0

    samples = np.empty((len(vecs), n_samples, d, d), dtype=complex)
    filled = 0
    rejected = 0
    while filled < n_samples:
        n = min(batch, n_samples - filled)
        units = haar_random_unitaries(d, n, rng)
        cols = units[:, :, :r]  # (n, d, r) isometries onto the sampled subspaces
        for s, psi in enumerate(vecs):
            cols_s = cols
            coeff = np.einsum("nij,i->nj", cols_s.conj(), psi)  # components in subspace
            norms = np.einsum("nj,nj->n", coeff.conj(), coeff).real
            bad = norms < PROJECTION_REJECT_TOL
            while np.any(bad):
                rejected += int(np.sum(bad))
                if cols_s is cols:
                    cols_s = cols.copy()
                cols_s[bad] = haar_random_unitaries(d, int(np.sum(bad)), rng)[:, :, :r]
                coeff = np.einsum("nij,i->nj", cols_s.conj(), psi)
                norms = np.einsum("nj,nj->n", coeff.conj(), coeff).real
                bad = norms < PROJECTION_REJECT_TOL
            proj_vec = np.einsum("nij,nj->ni", cols_s, coeff)  # P|psi>, shape (n, d)
            outer = proj_vec[:, :, None] * proj_vec.conj()[:, None, :]
            samples[s, filled : filled + n] = outer / norms[:, None, None]
        filled += n

    empirical, targets, distances, ses = [], [], [], []
    for s, psi in enumerate(vecs):
        mean = hermitian_part(samples[s].mean(axis=0))
        target = make_isotropic(psi, v_target)
        dist = float(np.linalg.norm(mean - target.matrix))
        # RMS bootstrap fluctuation of the sample mean around itself; this is
        # the scale against which the distance to the closed form is judged
        boot = np.empty(n_bootstrap)
        for b in range(n_bootstrap):
            idx = rng.integers(0, n_samples, size=n_samples)
            boot[b] = np.linalg.norm(samples[s][idx].mean(axis=0) - mean)
        empirical.append(DensityMatrix(mean))
        targets.append(target)
        distances.append(dist)
        ses.append(float(np.sqrt(np.mean(boot**2))))
    return HaarCheckReport(
        r=r,
        n_samples=n_samples,
        empirical=tuple(empirical),
        targets=tuple(targets),
        distances=tuple(distances),
        standard_errors=tuple(ses),
        n_rejected=rejected,
    )


def isotropic_orthonormal_ensemble(d: int, v: float) -> Ensemble:
    """The computational-basis ensemble under isotropic noise at visibility v."""
    return Ensemble([make_isotropic(e, v) for e in computational_basis(d)])
