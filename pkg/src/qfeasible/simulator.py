"""
Dense statevector simulator used as a verification oracle.

Axis ``q`` of the reshaped ``[2] * n`` state tensor is qubit ``q``, so
qubit 0 is the most significant bit of the flat index. No noise, no
measurement semantics; capacity is capped at desk scale.
"""
from __future__ import annotations

from math import cos, sin, sqrt

import numpy as np

from .circuit import Circuit, Gate, Kind
from .errors import CapacityError, UnsupportedGateError

MAX_SIMULATE_QUBITS = 12
MAX_UNITARY_QUBITS = 6

_H = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def gate_matrix(g: Gate) -> np.ndarray:
    """Matrix of ``g`` in the basis ordered by its own qubit tuple (first = MSB)."""
    t = g.angle
    match g.kind:
        case Kind.H:
            return _H
        case Kind.X:
            return _X
        case Kind.RX:
            return np.array([[cos(t / 2), -1j * sin(t / 2)], [-1j * sin(t / 2), cos(t / 2)]])
        case Kind.RY:
            return np.array([[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]], dtype=complex)
        case Kind.RZ:
            return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
        case Kind.CP:
            return np.diag([1, 1, 1, np.exp(1j * t)])
        case Kind.CX:
            return _CX
        case Kind.SWAP:
            return _SWAP
    raise UnsupportedGateError(f"no unitary for {g.kind.value}")


def _check(c: Circuit, cap: int) -> None:
    if c.width > cap:
        raise CapacityError(f"circuit width {c.width} exceeds simulator cap of {cap} qubits")
    if c.has_measurements:
        raise UnsupportedGateError("measure gates cannot be simulated")


def _apply(psi: np.ndarray, g: Gate, n: int) -> np.ndarray:
    # psi has shape [2]*n + [batch]
    k = len(g.qubits)
    m = gate_matrix(g).reshape([2] * (2 * k))
    psi = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), list(g.qubits)))
    # tensordot puts the gate's output axes first; move them back into place
    return np.moveaxis(psi, list(range(k)), list(g.qubits))


def _run(c: Circuit, columns: np.ndarray) -> np.ndarray:
    n = c.width
    batch = columns.shape[1]
    psi = columns.reshape([2] * n + [batch])
    for g in c.gates:
        psi = _apply(psi, g, n)
    return psi.reshape(2**n, batch)


def basis_state(width: int, index: int = 0) -> np.ndarray:
    s = np.zeros(2**width, dtype=complex)
    s[index] = 1.0
    return s


def simulate(c: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Apply ``c`` to ``initial`` (default ``|0...0>``) and return the new state."""
    _check(c, MAX_SIMULATE_QUBITS)
    if initial is None:
        initial = basis_state(c.width)
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (2**c.width,):
        raise ValueError(f"state has shape {initial.shape}, expected ({2**c.width},)")
    return _run(c, initial.reshape(-1, 1))[:, 0]


def unitary_of(c: Circuit) -> np.ndarray:
    """Full unitary; column k is ``simulate(c, |k>)``."""
    _check(c, MAX_UNITARY_QUBITS)
    return _run(c, np.eye(2**c.width, dtype=complex))


def measure_probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(np.asarray(state)) ** 2


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max-norm distance between ``u`` and ``v`` after aligning global phase."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    i = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(u[i]) == 0:
        return float(np.max(np.abs(u - v)))
    phase = u[i] / v[i]
    phase /= abs(phase)
    return float(np.max(np.abs(u - phase * v)))


def dft_matrix(n_qubits: int) -> np.ndarray:
    dim = 2**n_qubits
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)
