"""Line-delimited text formats for ensembles, witnesses, POVMs, simulations
and basis families. See docs/format.md for the schema; indices in files are
1-based, floats are written with ``repr`` so parsing round-trips bit-exactly.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError
from .linalg import DensityMatrix, Ensemble, HermitianOperator, Povm
from .simulate import Simulation, SimulationComponent
from .linalg import SubspaceProjector
from .witness import WitnessSpec

FORMAT_VERSION = 1


def _matrix_lines(mat: np.ndarray) -> list[str]:
    lines = []
    for row in np.asarray(mat, dtype=complex):
        parts = []
        for z in row:
            parts.append(repr(float(z.real)))
            parts.append(repr(float(z.imag)))
        lines.append(" ".join(parts))
    return lines


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    @property
    def lineno(self) -> int:
        return self.pos  # 1-based number of the last line returned

    def next(self) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line and not line.startswith("#"):
                return line
        raise ParseError("unexpected end of file", self.pos)

    def peek(self) -> str | None:
        saved = self.pos
        try:
            line = self.next()
        except ParseError:
            return None
        self.pos = saved
        return line

    def expect(self, keyword: str) -> list[str]:
        line = self.next()
        parts = line.split()
        if parts[0] != keyword:
            raise ParseError(f"expected '{keyword}', found '{parts[0]}'", self.lineno)
        return parts[1:]

    def int_field(self, keyword: str) -> int:
        parts = self.expect(keyword)
        try:
            return int(parts[0])
        except (IndexError, ValueError):
            raise ParseError(f"field '{keyword}' needs an integer value", self.lineno)

    def matrix(self, d: int) -> np.ndarray:
        mat = np.empty((d, d), dtype=complex)
        for i in range(d):
            parts = self.next().split()
            if len(parts) != 2 * d:
                raise ParseError(
                    f"matrix row needs {2 * d} numbers (re im pairs), found {len(parts)}",
                    self.lineno,
                )
            try:
                vals = [float(p) for p in parts]
            except ValueError:
                raise ParseError("matrix row contains a non-number", self.lineno)
            mat[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
        return mat

    def header(self, kind: str):
        parts = self.next().split()
        if parts[0] != kind:
            raise ParseError(f"expected header '{kind}', found '{parts[0]}'", self.lineno)
        if len(parts) < 2 or parts[1] != str(FORMAT_VERSION):
            raise ParseError(f"unsupported {kind} version", self.lineno)


# --- ensembles ---------------------------------------------------------------


def dump_ensemble(ensemble: Ensemble, metadata: dict[str, str] | None = None) -> str:
    out = [f"absdim-ensemble {FORMAT_VERSION}"]
    out.append(f"dim {ensemble.dim}")
    out.append(f"states {ensemble.size}")
    for key, val in (metadata or {}).items():
        out.append(f"meta {key} {val}")
    for x, state in enumerate(ensemble.states, start=1):
        out.append(f"state {x}")
        out.extend(_matrix_lines(state.matrix))
    return "\n".join(out) + "\n"


def load_ensemble(text: str) -> tuple[Ensemble, dict[str, str]]:
    r = _Reader(text)
    r.header("absdim-ensemble")
    d = r.int_field("dim")
    m = r.int_field("states")
    meta: dict[str, str] = {}
    while (line := r.peek()) is not None and line.startswith("meta "):
        parts = r.next().split(maxsplit=2)
        meta[parts[1]] = parts[2] if len(parts) > 2 else ""
    states = []
    for x in range(1, m + 1):
        idx = r.int_field("state")
        if idx != x:
            raise ParseError(f"expected state {x}, found {idx}", r.lineno)
        states.append(DensityMatrix(r.matrix(d)))
    return Ensemble(states), meta


# --- POVMs -------------------------------------------------------------------


def dump_povm(povm: Povm) -> str:
    out = [f"absdim-povm {FORMAT_VERSION}", f"dim {povm.dim}", f"outcomes {povm.n_outcomes}"]
    for b, elem in enumerate(povm.elements, start=1):
        out.append(f"element {b}")
        out.extend(_matrix_lines(elem.matrix))
    return "\n".join(out) + "\n"


def load_povm(text: str) -> Povm:
    r = _Reader(text)
    r.header("absdim-povm")
    d = r.int_field("dim")
    n = r.int_field("outcomes")
    elems = []
    for b in range(1, n + 1):
        idx = r.int_field("element")
        if idx != b:
            raise ParseError(f"expected element {b}, found {idx}", r.lineno)
        elems.append(HermitianOperator(r.matrix(d)))
    return Povm(elems)


# --- witness specs -----------------------------------------------------------


def dump_witness_spec(spec: WitnessSpec) -> str:
    out = [
        f"absdim-witness {FORMAT_VERSION}",
        f"dim {spec.dim}",
        f"states {spec.m}",
        f"measurements {len(spec.measurements)}",
    ]
    for y, povm in enumerate(spec.measurements, start=1):
        out.append(f"measurement {y} outcomes {povm.n_outcomes}")
        for b, elem in enumerate(povm.elements, start=1):
            out.append(f"element {b}")
            out.extend(_matrix_lines(elem.matrix))
    for y, c in enumerate(spec.coefficients, start=1):
        for b in range(c.shape[0]):
            for x in range(c.shape[1]):
                if c[b, x] != 0.0:
                    out.append(f"coeff {y} {b + 1} {x + 1} {repr(float(c[b, x]))}")
    return "\n".join(out) + "\n"


def load_witness_spec(text: str) -> WitnessSpec:
    r = _Reader(text)
    r.header("absdim-witness")
    d = r.int_field("dim")
    m = r.int_field("states")
    n_meas = r.int_field("measurements")
    povms = []
    outcome_counts = []
    for y in range(1, n_meas + 1):
        parts = r.expect("measurement")
        if len(parts) != 3 or parts[1] != "outcomes":
            raise ParseError("measurement line needs 'measurement Y outcomes N'", r.lineno)
        if int(parts[0]) != y:
            raise ParseError(f"expected measurement {y}, found {parts[0]}", r.lineno)
        n_out = int(parts[2])
        elems = []
        for b in range(1, n_out + 1):
            idx = r.int_field("element")
            if idx != b:
                raise ParseError(f"expected element {b}, found {idx}", r.lineno)
            elems.append(HermitianOperator(r.matrix(d)))
        povms.append(Povm(elems))
        outcome_counts.append(n_out)
    coeffs = [np.zeros((n, m)) for n in outcome_counts]
    while r.peek() is not None:
        parts = r.expect("coeff")
        if len(parts) != 4:
            raise ParseError("coeff line needs 'coeff Y B X VALUE'", r.lineno)
        try:
            y, b, x = int(parts[0]) - 1, int(parts[1]) - 1, int(parts[2]) - 1
            val = float(parts[3])
        except ValueError:
            raise ParseError("malformed coeff line", r.lineno)
        if not (0 <= y < n_meas and 0 <= b < outcome_counts[y] and 0 <= x < m):
            raise ParseError("coeff index out of range", r.lineno)
        coeffs[y][b, x] = val
    return WitnessSpec(povms, coeffs)


# --- simulations -------------------------------------------------------------


def dump_simulation(sim: Simulation) -> str:
    out = [
        f"absdim-simulation {FORMAT_VERSION}",
        f"dim {sim.dim}",
        f"rank {sim.r}",
        f"states {sim.m}",
        f"components {len(sim.components)}",
    ]
    for k, comp in enumerate(sim.components, start=1):
        out.append(f"component {k} weight {repr(float(comp.weight))}")
        out.append("projector")
        out.extend(_matrix_lines(comp.projector.matrix))
        for x, state in enumerate(comp.states, start=1):
            out.append(f"state {x}")
            out.extend(_matrix_lines(state.matrix))
    return "\n".join(out) + "\n"


def load_simulation(text: str) -> Simulation:
    r = _Reader(text)
    r.header("absdim-simulation")
    d = r.int_field("dim")
    rank = r.int_field("rank")
    m = r.int_field("states")
    n_comp = r.int_field("components")
    comps = []
    for k in range(1, n_comp + 1):
        parts = r.expect("component")
        if len(parts) != 3 or parts[1] != "weight":
            raise ParseError("component line needs 'component K weight W'", r.lineno)
        if int(parts[0]) != k:
            raise ParseError(f"expected component {k}, found {parts[0]}", r.lineno)
        weight = float(parts[2])
        r.expect("projector")
        projector = SubspaceProjector(r.matrix(d), rank=rank)
        states = []
        for x in range(1, m + 1):
            idx = r.int_field("state")
            if idx != x:
                raise ParseError(f"expected state {x}, found {idx}", r.lineno)
            states.append(DensityMatrix(r.matrix(d)))
        comps.append(SimulationComponent(weight, projector, tuple(states)))
    return Simulation(r=rank, components=tuple(comps))


# --- basis families ----------------------------------------------------------


def dump_bases(unitaries: Iterable[np.ndarray]) -> str:
    mats = [np.asarray(u, dtype=complex) for u in unitaries]
    d = mats[0].shape[0]
    out = [f"absdim-bases {FORMAT_VERSION}", f"dim {d}", f"count {len(mats)}"]
    for k, u in enumerate(mats, start=1):
        out.append(f"basis {k}")
        out.extend(_matrix_lines(u))
    return "\n".join(out) + "\n"


def load_bases(text: str) -> list[np.ndarray]:
    r = _Reader(text)
    r.header("absdim-bases")
    d = r.int_field("dim")
    n = r.int_field("count")
    mats = []
    for k in range(1, n + 1):
        idx = r.int_field("basis")
        if idx != k:
            raise ParseError(f"expected basis {k}, found {idx}", r.lineno)
        mats.append(r.matrix(d))
    return mats
