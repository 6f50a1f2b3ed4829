import numpy as np
import pytest

from absdim import serialization as ser
from absdim.cli import cli_main
from absdim.linalg import computational_povm
from absdim.witness import discrimination_spec


def run(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_orthonormal(self, tmp_path, capsys):
        out = tmp_path / "ens.txt"
        code, _, _ = run(capsys, "gen", "--kind", "orthonormal", "--d", "3", "-o", str(out))
        assert code == 0
        ens, meta = ser.load_ensemble(out.read_text())
        assert ens.size == 3 and ens.dim == 3
        assert meta["generator"] == "orthonormal"

    def test_haar_is_seed_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            code, _, _ = run(
                capsys, "gen", "--kind", "haar", "--d", "3", "--m", "2",
                "--seed", "5", "-o", str(path),
            )
            assert code == 0
        assert a.read_text() == b.read_text()

    def test_superposition(self, tmp_path, capsys):
        out = tmp_path / "s.txt"
        code, _, _ = run(capsys, "gen", "--kind", "superposition", "--d", "4", "-o", str(out))
        assert code == 0
        ens, _ = ser.load_ensemble(out.read_text())
        assert np.allclose(ens.states[-1].matrix, np.full((4, 4), 0.25))

    def test_invalid_m_is_validation_error(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "gen", "--kind", "orthonormal", "--d", "2", "--m", "5",
            "-o", str(tmp_path / "x.txt"),
        )
        assert code == 2
        assert "error" in err


class TestVcrit:
    def test_reference_value(self, capsys):
        code, out, _ = run(capsys, "vcrit", "--d", "8", "--r", "4")
        assert code == 0
        assert "0.428571" in out

    def test_with_m_and_s(self, capsys):
        code, out, _ = run(capsys, "vcrit", "--d", "4", "--r", "2", "--m", "3", "--s", "3")
        assert code == 0
        assert "simulation_m_states 0.466667" in out
        assert "simulation_subspace" in out


class TestDiscriminate:
    def test_fully_mixed_qubits(self, tmp_path, capsys):
        ens_file = tmp_path / "ens.txt"
        run(capsys, "gen", "--kind", "orthonormal", "--d", "2", "--v", "0", "-o", str(ens_file))
        code, out, _ = run(capsys, "discriminate", "--ensemble", str(ens_file))
        assert code == 0
        assert "w_disc 0.5" in out
        assert "certified_lower_bound 1" in out

    def test_writes_povm(self, tmp_path, capsys):
        ens_file, povm_file = tmp_path / "e.txt", tmp_path / "p.txt"
        run(capsys, "gen", "--kind", "orthonormal", "--d", "2", "-o", str(ens_file))
        code, _, _ = run(
            capsys, "discriminate", "--ensemble", str(ens_file), "--povm-out", str(povm_file)
        )
        assert code == 0
        ser.load_povm(povm_file.read_text())  # parses and validates


class TestWitnessCommand:
    def test_certifies_orthonormal(self, tmp_path, capsys):
        ens_file, spec_file = tmp_path / "e.txt", tmp_path / "w.txt"
        run(capsys, "gen", "--kind", "orthonormal", "--d", "3", "-o", str(ens_file))
        spec_file.write_text(ser.dump_witness_spec(discrimination_spec(computational_povm(3))))
        code, out, _ = run(capsys, "witness", "--ensemble", str(ens_file), "--spec", str(spec_file))
        assert code == 0
        assert "witness_value 1" in out
        assert "certified_lower_bound 3" in out


class TestSimulateCommands:
    def test_analytic(self, tmp_path, capsys):
        out_file = tmp_path / "sim.txt"
        code, out, _ = run(
            capsys, "simulate", "analytic", "--d", "3", "--r", "2", "-o", str(out_file)
        )
        assert code == 0
        assert "visibility 0.5" in out
        sim = ser.load_simulation(out_file.read_text())
        assert len(sim.components) == 3

    def test_analytic_m_states(self, tmp_path, capsys):
        out_file = tmp_path / "sim.txt"
        code, out, _ = run(
            capsys, "simulate", "analytic", "--d", "4", "--r", "2", "--m", "3",
            "-o", str(out_file),
        )
        assert code == 0
        assert "visibility 0.466667" in out

    def test_sdp(self, tmp_path, capsys):
        ens_file, out_file = tmp_path / "e.txt", tmp_path / "sim.txt"
        run(capsys, "gen", "--kind", "superposition", "--d", "3", "-o", str(ens_file))
        code, out, _ = run(
            capsys, "simulate", "sdp", "--ensemble", str(ens_file), "--r", "2",
            "-o", str(out_file),
        )
        assert code == 0
        assert "v_star 0.5909" in out
        ser.load_simulation(out_file.read_text())


class TestCheckHaar:
    def test_small_run(self, capsys):
        code, out, _ = run(
            capsys, "check", "haar", "--d", "2", "--r", "1", "--n", "5000", "--seed", "3"
        )
        assert code == 0
        assert "samples 5000" in out
        assert "ok" in out


class TestErrorPaths:
    def test_usage_error_is_exit_1(self, capsys):
        code, _, _ = run(capsys, "gen", "--kind", "bogus", "--d", "3")
        assert code == 1

    def test_malformed_file_is_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("absdim-ensemble 1\ndim 2\nstates 1\nstate 1\nnot a number\n")
        code, _, err = run(capsys, "discriminate", "--ensemble", str(bad))
        assert code == 2
        assert "line" in err
