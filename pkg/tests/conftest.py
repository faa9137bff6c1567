import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qfeasible.circuit import Circuit, Gate, Kind

# Reference gate matrices written out by hand, independent of the simulator.
_REF = {
    Kind.H: lambda t: np.array([[1, 1], [1, -1]]) / math.sqrt(2),
    Kind.X: lambda t: np.array([[0, 1], [1, 0]]),
    Kind.RX: lambda t: np.array([[math.cos(t / 2), -1j * math.sin(t / 2)], [-1j * math.sin(t / 2), math.cos(t / 2)]]),
    Kind.RY: lambda t: np.array([[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]]),
    Kind.RZ: lambda t: np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]]),
    Kind.CP: lambda t: np.diag([1, 1, 1, np.exp(1j * t)]),
    Kind.CX: lambda t: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    Kind.SWAP: lambda t: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}


def _bit(index, q, n):
    return (index >> (n - 1 - q)) & 1


def reference_unitary(c: Circuit) -> np.ndarray:
    """Explicit per-basis-state construction; qubit 0 is the MSB."""
    n = c.width
    dim = 2**n
    total = np.eye(dim, dtype=complex)
    for g in c.gates:
        m = _REF[g.kind](g.angle)
        k = len(g.qubits)
        full = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            local_in = 0
            for q in g.qubits:
                local_in = (local_in << 1) | _bit(col, q, n)
            for local_out in range(2**k):
                amp = m[local_out, local_in]
                if amp == 0:
                    continue
                row = col
                for pos, q in enumerate(g.qubits):
                    shift = n - 1 - q
                    bit = (local_out >> (k - 1 - pos)) & 1
                    row = (row & ~(1 << shift)) | (bit << shift)
                full[row, col] += amp
        total = full @ total
    return total


def embedding(mapping, logical_width: int, physical_width: int) -> np.ndarray:
    """Isometry placing logical qubit i on physical qubit mapping[i]; spare qubits in |0>."""
    e = np.zeros((2**physical_width, 2**logical_width))
    for col in range(2**logical_width):
        row = 0
        for lq in range(logical_width):
            if _bit(col, lq, logical_width):
                row |= 1 << (physical_width - 1 - mapping[lq])
        e[row, col] = 1
    return e


ANGLED = (Kind.RX, Kind.RY, Kind.RZ, Kind.CP)


@st.composite
def circuits(draw, max_width=4, max_len=30, kinds=tuple(Kind), min_width=1):
    kinds = [k for k in kinds if k is not Kind.MEASURE]
    width = draw(st.integers(min_width, max_width))
    if width < 2:
        kinds = [k for k in kinds if k.n_qubits == 1]
    gates = []
    for _ in range(draw(st.integers(0, max_len))):
        kind = draw(st.sampled_from(kinds))
        qs = draw(st.permutations(range(width)))[: kind.n_qubits]
        angle = draw(st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)) if kind in ANGLED else None
        gates.append(Gate(kind, tuple(qs), angle))
    return Circuit(width, tuple(gates))


def random_circuit(rng: np.random.Generator, width: int, length: int, kinds) -> Circuit:
    kinds = [k for k in kinds if width >= k.n_qubits]
    gates = []
    for _ in range(length):
        kind = kinds[rng.integers(len(kinds))]
        qs = tuple(int(q) for q in rng.permutation(width)[: kind.n_qubits])
        angle = float(rng.uniform(-math.pi, math.pi)) if kind in ANGLED else None
        gates.append(Gate(kind, qs, angle))
    return Circuit(width, tuple(gates))


@pytest.fixture
def rng():
    return np.random.default_rng(20200801)


# --- acceptance summary -----------------------------------------------------

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
