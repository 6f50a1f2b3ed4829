import numpy as np
import pytest

from absdim.linalg import (
    DensityMatrix,
    Ensemble,
    Povm,
    haar_random_unitaries,
    hermitian_part,
)
from absdim.witness import WitnessSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_density_matrix(d: int, rng: np.random.Generator) -> DensityMatrix:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_ensemble(d: int, m: int, rng: np.random.Generator) -> Ensemble:
    return Ensemble([random_density_matrix(d, rng) for _ in range(m)])


def random_pure_states(d: int, m: int, rng: np.random.Generator) -> list[np.ndarray]:
    return [u[:, 0] for u in haar_random_unitaries(d, m, rng)]


def random_povm(d: int, n: int, rng: np.random.Generator) -> Povm:
    """n random PSD operators normalized to a resolution of the identity."""
    raw = []
    for _ in range(n):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        raw.append(g @ g.conj().T)
    total = hermitian_part(sum(raw))
    w, v = np.linalg.eigh(total)
    inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return Povm([inv_sqrt @ m @ inv_sqrt for m in raw])


def random_witness_spec(
    d: int, m: int, rng: np.random.Generator, n_meas: int = 2, n_out: int | None = None
) -> WitnessSpec:
    n_out = n_out or d
    povms = [random_povm(d, n_out, rng) for _ in range(n_meas)]
    coeffs = [rng.uniform(0.0, 1.0, size=(n_out, m)) for _ in range(n_meas)]
    return WitnessSpec(povms, coeffs)
