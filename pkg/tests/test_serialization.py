import numpy as np
import pytest

from absdim import serialization as ser
from absdim.errors import ParseError
from absdim.linalg import computational_povm, fourier_matrix
from absdim.simulate import build_finite_orthonormal_simulation
from absdim.subspace_sdp import superposition_ensemble
from absdim.witness import WitnessSpec, discrimination_spec
from conftest import random_ensemble, random_witness_spec


class TestEnsembleRoundTrip:
    def test_bit_identical_round_trip(self, rng):
        for _ in range(100):
            d = int(rng.integers(2, 6))
            m = int(rng.integers(1, 5))
            ens = random_ensemble(d, m, rng)
            loaded, _ = ser.load_ensemble(ser.dump_ensemble(ens))
            for a, b in zip(ens.states, loaded.states):
                assert np.array_equal(a.matrix, b.matrix)

    def test_metadata_round_trip(self):
        ens = superposition_ensemble(3)
        meta = {"label": "demo run", "seed": "17"}
        _, loaded_meta = ser.load_ensemble(ser.dump_ensemble(ens, meta))
        assert loaded_meta == meta

    def test_parse_error_carries_line(self):
        text = "absdim-ensemble 1\ndim 2\nstates 1\nstate 1\n0.5 0.0 0.0\n"
        with pytest.raises(ParseError, match="line 5"):
            ser.load_ensemble(text)

    def test_bad_header(self):
        with pytest.raises(ParseError):
            ser.load_ensemble("absdim-povm 1\ndim 2\n")


class TestPovmRoundTrip:
    def test_round_trip(self):
        povm = computational_povm(4)
        loaded = ser.load_povm(ser.dump_povm(povm))
        for a, b in zip(povm.elements, loaded.elements):
            assert np.array_equal(a.matrix, b.matrix)


class TestWitnessSpecRoundTrip:
    def test_round_trip_random(self, rng):
        spec = random_witness_spec(3, 2, rng)
        loaded = ser.load_witness_spec(ser.dump_witness_spec(spec))
        assert loaded.m == spec.m
        for a, b in zip(spec.coefficients, loaded.coefficients):
            assert np.array_equal(a, b)
        for pa, pb in zip(spec.measurements, loaded.measurements):
            for a, b in zip(pa.elements, pb.elements):
                assert np.array_equal(a.matrix, b.matrix)

    def test_round_trip_discrimination(self):
        spec = discrimination_spec(computational_povm(3))
        loaded = ser.load_witness_spec(ser.dump_witness_spec(spec))
        assert np.array_equal(loaded.coefficients[0], np.eye(3) / 3)

    def test_coeff_index_out_of_range(self):
        spec = discrimination_spec(computational_povm(2))
        text = ser.dump_witness_spec(spec) + "coeff 1 3 1 0.5\n"
        with pytest.raises(ParseError):
            ser.load_witness_spec(text)


class TestSimulationRoundTrip:
    def test_round_trip(self):
        sim = build_finite_orthonormal_simulation(3, 2)
        loaded = ser.load_simulation(ser.dump_simulation(sim))
        assert loaded.r == sim.r
        assert len(loaded.components) == len(sim.components)
        for ca, cb in zip(sim.components, loaded.components):
            assert ca.weight == cb.weight
            assert np.array_equal(ca.projector.matrix, cb.projector.matrix)
            for a, b in zip(ca.states, cb.states):
                assert np.array_equal(a.matrix, b.matrix)


class TestBasesRoundTrip:
    def test_round_trip(self):
        mats = [np.eye(3, dtype=complex), fourier_matrix(3)]
        loaded = ser.load_bases(ser.dump_bases(mats))
        for a, b in zip(mats, loaded):
            assert np.array_equal(a, b)
