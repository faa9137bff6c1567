"""Circuit builders and closed-form resource formulas.

QFT and Grover circuits are emitted in the IR from :mod:`qfeasible.circuit`.
The parton-shower functions are pure counting models; no circuit is built
for them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, Kind, cp, cx, h, rz, swap, x
from .errors import DomainError, InvalidArgumentError, InvalidSizeError

MAX_QFT_QUBITS = 32
MAX_GROVER_QUBITS = 12


def build_qft(n: int) -> Circuit:
    """Textbook QFT on ``n`` qubits, terminal swaps included.

    With qubit 0 as the most significant bit the unitary is the DFT matrix
    ``F[j, k] = exp(2*pi*i*j*k / 2**n) / sqrt(2**n)``.
    """
    if not 1 <= n <= MAX_QFT_QUBITS:
        raise InvalidSizeError(f"QFT size must be in [1, {MAX_QFT_QUBITS}], got {n}")
    gates: list[Gate] = []
    for j in range(n):
        gates.append(h(j))
        for k in range(1, n - j):
            gates.append(cp(math.pi / 2**k, j + k, j))
    for j in range(n // 2):
        gates.append(swap(j, n - 1 - j))
    return Circuit(n, tuple(gates))


@dataclass(frozen=True)
class QFTCounts:
    h: int
    cp: int
    swap: int
    cnot: int

    @property
    def total_logical(self) -> int:
        return self.h + self.cp + self.swap

    @property
    def total_native(self) -> int:
        # each CP -> 3 rotations + 2 CX, each SWAP -> 3 CX
        return self.h + 5 * self.cp + 3 * self.swap


def qft_counts(n: int) -> QFTCounts:
    if n < 1:
        raise InvalidSizeError(f"QFT size must be positive, got {n}")
    n_cp = n * (n - 1) // 2
    n_swap = n // 2
    return QFTCounts(h=n, cp=n_cp, swap=n_swap, cnot=n * (n - 1) + 3 * n_swap)


def grover_optimal_iterations(search_space: int) -> int:
    if search_space < 1:
        raise InvalidArgumentError(f"search space must be positive, got {search_space}")
    return math.floor(math.pi / 4 * math.sqrt(search_space))


def _gray_flip(i: int) -> int:
    """Index of the bit that changes between gray(i-1) and gray(i)."""
    return (i & -i).bit_length() - 1


def all_ones_phase(qubits: list[int], theta: float) -> list[Gate]:
    """Multiply the all-ones state of ``qubits`` by ``exp(i*theta)``, up to global phase.

    Uses the parity expansion of ``x_1 * ... * x_m``: every non-empty subset
    parity gets an RZ on its highest qubit, walking the lower qubits in gray
    code order so each step costs one CX.
    """
    m = len(qubits)
    if m == 1:
        return [rz(theta, qubits[0])]
    if m == 2:
        return [cp(theta, qubits[0], qubits[1])]
    scale = theta / 2 ** (m - 1)
    gates: list[Gate] = []
    for top in range(m):
        target = qubits[top]
        size = 1
        gates.append(rz(scale, target))
        mask = 0
        for step in range(1, 2**top):
            bit = _gray_flip(step)
            mask ^= 1 << bit
            size += 1 if mask >> bit & 1 else -1
            gates.append(cx(qubits[bit], target))
            sign = 1 if size % 2 else -1
            gates.append(rz(sign * scale, target))
        if top:
            # gray(2**top - 1) leaves only the highest lower bit set
            gates.append(cx(qubits[top - 1], target))
    return gates


def _flip_zeros(n: int, value: int) -> list[Gate]:
    return [x(q) for q in range(n) if not value >> (n - 1 - q) & 1]


def grover_oracle(n: int, marked: int) -> list[Gate]:
    flips = _flip_zeros(n, marked)
    return flips + all_ones_phase(list(range(n)), math.pi) + flips


def grover_diffusion(n: int) -> list[Gate]:
    """``2|s><s| - I`` up to global phase."""
    hs = [h(q) for q in range(n)]
    xs = [x(q) for q in range(n)]
    return hs + xs + all_ones_phase(list(range(n)), math.pi) + xs + hs


def build_grover(n_qubits: int, marked: int, iterations: int) -> Circuit:
    if not 1 <= n_qubits <= MAX_GROVER_QUBITS:
        raise InvalidSizeError(f"Grover size must be in [1, {MAX_GROVER_QUBITS}], got {n_qubits}")
    if not 0 <= marked < 2**n_qubits:
        raise InvalidArgumentError(f"marked state {marked} out of range for {n_qubits} qubits")
    if iterations < 0:
        raise InvalidArgumentError(f"iterations must be non-negative, got {iterations}")
    step = grover_oracle(n_qubits, marked) + grover_diffusion(n_qubits)
    gates = [h(q) for q in range(n_qubits)] + step * iterations
    return Circuit(n_qubits, tuple(gates))


@dataclass(frozen=True)
class PartonShowerParams:
    steps: int
    initial_particles: int = 1
    fermion_flavors: int = 2
    mid_circuit_measurement: bool = False

    def __post_init__(self):
        for name in ("steps", "initial_particles", "fermion_flavors"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class RegisterBudget:
    particle_state: int
    history: int

    @property
    def total_dominant(self) -> int:
        return self.particle_state + self.history


def ceil_log2(value: int) -> int:
    if value < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {value}")
    return (value - 1).bit_length()


def parton_shower_registers(p: PartonShowerParams) -> RegisterBudget:
    """Sizes of the particle-state and history registers.

    Mid-circuit measurement lets the history register be reset every
    step, so it only needs ``ceil(log2(2*n_I + 1))`` qubits.
    """
    n, n_i = p.steps, p.initial_particles
    if p.mid_circuit_measurement:
        history = ceil_log2(2 * n_i + 1)
    else:
        history = n * ceil_log2(n + n_i)
    return RegisterBudget(particle_state=3 * (n + n_i), history=history)


def shower_quantum_cost(steps: int, n_f: int) -> float:
    if n_f < 2:
        raise DomainError(f"fermion count must be >= 2, got {n_f}")
    return steps * n_f**2 * math.log(n_f)


def shower_classical_cost(steps: int, n_f: int) -> float:
    if n_f < 2:
        raise DomainError(f"fermion count must be >= 2, got {n_f}")
    return steps * 2.0 ** (n_f / 2)


def parton_shower_costs(p: PartonShowerParams) -> tuple[float, float]:
    """(quantum, classical) cost with unit constants and natural log."""
    return (
        shower_quantum_cost(p.steps, p.fermion_flavors),
        shower_classical_cost(p.steps, p.fermion_flavors),
    )
