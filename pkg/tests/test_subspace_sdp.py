from math import comb

import numpy as np
import pytest

from absdim.discrimination import optimal_discrimination
from absdim.errors import ValidationError
from absdim.linalg import fourier_matrix, haar_random_unitary, span_dimension
from absdim.simulate import reconstruct
from absdim.subspace_sdp import (
    SubspaceFamily,
    max_visibility,
    superposition_ensemble,
    superposition_state_vectors,
    visibility_table_csv,
    VisibilityRow,
)
from absdim.witness import witness_bound, witness_value
from conftest import random_witness_spec


class TestSubspaceFamily:
    def test_subsets_are_lexicographic(self):
        fam = SubspaceFamily.default(4, 2)
        assert fam.subsets == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        assert fam.n_subspaces == 2 * comb(4, 2)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            SubspaceFamily(3, 2, [np.ones((3, 3))])

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValidationError):
            SubspaceFamily(3, 2, [np.eye(2)])


class TestSuperpositionEnsemble:
    def test_d3_states(self):
        ens = superposition_ensemble(3)
        assert ens.size == 3
        assert np.allclose(ens.states[0].matrix, np.diag([1.0, 0.0, 0.0]))
        assert np.allclose(ens.states[1].matrix, np.diag([0.0, 1.0, 0.0]))
        assert np.allclose(ens.states[2].matrix, np.full((3, 3), 1 / 3))

    def test_d2_states(self):
        ens = superposition_ensemble(2)
        assert ens.size == 2
        assert np.allclose(ens.states[1].matrix, np.full((2, 2), 0.5))

    def test_spans_full_space(self):
        for d in [2, 3, 5]:
            assert span_dimension(superposition_state_vectors(d)) == d


class TestMaxVisibility:
    def test_full_rank_single_basis_is_exact(self):
        ens = superposition_ensemble(3)
        fam = SubspaceFamily(3, 3, [np.eye(3)])
        res = max_visibility(ens, fam)
        assert res.v_star == pytest.approx(1.0, abs=1e-6)
        assert res.is_simulable

    def test_d3_r2_reference_value(self):
        res = max_visibility(superposition_ensemble(3), SubspaceFamily.default(3, 2))
        assert res.v_star == pytest.approx(0.5909, abs=1e-3)
        assert res.v_star > 0.5  # beats the universal closed-form model

    def test_simulation_reconstructs_noisy_target(self):
        ens = superposition_ensemble(3)
        res = max_visibility(ens, SubspaceFamily.default(3, 2))
        recon = reconstruct(res.simulation)
        for rho, sigma in zip(ens.matrices(), recon.states):
            target = res.v_star * rho + (1 - res.v_star) / 3 * np.eye(3)
            assert np.linalg.norm(sigma.matrix - target) <= 1e-6

    def test_monotone_in_family(self, rng):
        ens = superposition_ensemble(3)
        base = [np.eye(3), fourier_matrix(3)]
        extra = base + [haar_random_unitary(3, rng)]
        v1 = max_visibility(ens, SubspaceFamily(3, 2, base)).v_star
        v2 = max_visibility(ens, SubspaceFamily(3, 2, extra)).v_star
        assert v2 >= v1 - 1e-7

    def test_monotone_in_rank(self):
        ens = superposition_ensemble(4)
        values = [
            max_visibility(ens, SubspaceFamily.default(4, r)).v_star for r in range(2, 5)
        ]
        assert all(b >= a - 1e-7 for a, b in zip(values, values[1:]))

    def test_witness_soundness_of_solution(self, rng):
        d, r = 3, 2
        ens = superposition_ensemble(d)
        res = max_visibility(ens, SubspaceFamily.default(d, r))
        recon = reconstruct(res.simulation)
        for _ in range(50):
            spec = random_witness_spec(d, ens.size, rng)
            assert witness_value(spec, recon) <= witness_bound(spec, r) + 1e-7

    def test_discrimination_soundness_of_solution(self):
        d, r = 3, 2
        res = max_visibility(superposition_ensemble(d), SubspaceFamily.default(d, r))
        recon = reconstruct(res.simulation)
        assert optimal_discrimination(recon).w_disc <= r / d + 1e-6

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            max_visibility(superposition_ensemble(3), SubspaceFamily.default(4, 2))


def test_visibility_table_csv_layout():
    rows = [VisibilityRow(2, 0.25, 0.2, 0.05)]
    text = visibility_table_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "r,v_numerical,v_analytical,difference"
    assert lines[1].startswith("2,0.25,0.2,")
