"""
Gate-level circuit IR.

Contains:
    - Kind: enum of supported gate kinds
    - Gate: immutable (kind, qubits, angle)
    - Circuit: immutable width + ordered gate tuple
    - census / decompose_to_native

Qubit 0 is the most significant bit of a computational-basis index.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class Kind(Enum):
    H = "h"
    X = "x"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    CP = "cp"
    CX = "cx"
    SWAP = "swap"
    MEASURE = "measure"

    @property
    def n_qubits(self) -> int:
        return 2 if self in TWO_QUBIT_KINDS else 1

    @property
    def has_angle(self) -> bool:
        return self in (Kind.RX, Kind.RY, Kind.RZ, Kind.CP)


TWO_QUBIT_KINDS = frozenset({Kind.CP, Kind.CX, Kind.SWAP})
NATIVE_KINDS = frozenset({Kind.H, Kind.X, Kind.RX, Kind.RY, Kind.RZ, Kind.CX, Kind.MEASURE})


@dataclass(frozen=True)
class Gate:
    kind: Kind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) != self.kind.n_qubits:
            raise ValueError(f"{self.kind.value} acts on {self.kind.n_qubits} qubit(s), got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit in {qubits}")
        if any(q < 0 for q in qubits):
            raise ValueError(f"negative qubit index in {qubits}")
        if self.kind.has_angle:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind.value} needs a finite angle, got {self.angle}")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    def on(self, *qubits: int) -> Gate:
        """Same gate acting on different qubits."""
        return Gate(self.kind, qubits, self.angle)

    def __str__(self) -> str:
        args = ",".join(map(str, self.qubits))
        if self.angle is None:
            return f"{self.kind.value}({args})"
        return f"{self.kind.value}[{self.angle:.6g}]({args})"


def h(q: int) -> Gate:
    return Gate(Kind.H, (q,))


def x(q: int) -> Gate:
    return Gate(Kind.X, (q,))


def rx(theta: float, q: int) -> Gate:
    return Gate(Kind.RX, (q,), theta)


def ry(theta: float, q: int) -> Gate:
    return Gate(Kind.RY, (q,), theta)


def rz(theta: float, q: int) -> Gate:
    return Gate(Kind.RZ, (q,), theta)


def cx(control: int, target: int) -> Gate:
    return Gate(Kind.CX, (control, target))


def cp(theta: float, control: int, target: int) -> Gate:
    return Gate(Kind.CP, (control, target), theta)


def swap(a: int, b: int) -> Gate:
    return Gate(Kind.SWAP, (a, b))


def measure(q: int) -> Gate:
    return Gate(Kind.MEASURE, (q,))


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.width < 0:
            raise ValueError(f"width must be non-negative, got {self.width}")
        gates = tuple(self.gates)
        for g in gates:
            if max(g.qubits) >= self.width:
                raise ValueError(f"gate {g} exceeds circuit width {self.width}")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if not isinstance(other, Circuit):
            return NotImplemented
        return Circuit(max(self.width, other.width), self.gates + other.gates)

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.width, self.gates + tuple(gates))

    def count(self, kind: Kind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    @property
    def has_measurements(self) -> bool:
        return any(g.kind is Kind.MEASURE for g in self.gates)


@dataclass(frozen=True)
class GateCensus:
    total: int = 0
    two_qubit: int = 0
    cnot: int = 0
    depth: int = 0
    by_kind: Mapping[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "two_qubit": self.two_qubit,
            "cnot": self.cnot,
            "depth": self.depth,
            "by_kind": dict(sorted(self.by_kind.items())),
        }


def depth(gates: Iterable[Gate]) -> int:
    """Greedy ASAP layer count; gates sharing a qubit never share a layer."""
    level: dict[int, int] = {}
    result = 0
    for g in gates:
        layer = 1 + max((level.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            level[q] = layer
        result = max(result, layer)
    return result


def census(c: Circuit) -> GateCensus:
    by_kind = Counter(g.kind.value for g in c.gates)
    return GateCensus(
        total=len(c.gates),
        two_qubit=sum(1 for g in c.gates if g.is_two_qubit),
        cnot=by_kind.get(Kind.CX.value, 0),
        depth=depth(c.gates),
        by_kind=dict(by_kind),
    )


def _native(g: Gate) -> list[Gate]:
    if g.kind is Kind.CP:
        theta = g.angle
        c, t = g.qubits
        return [rz(theta / 2, c), cx(c, t), rz(-theta / 2, t), cx(c, t), rz(theta / 2, t)]
    if g.kind is Kind.SWAP:
        a, b = g.qubits
        return [cx(a, b), cx(b, a), cx(a, b)]
    return [g]


def decompose_to_native(c: Circuit) -> Circuit:
    """Rewrite CP and SWAP into rotations + CX; native gates pass through.

    The result equals the input up to a global phase.
    """
    out: list[Gate] = []
    for g in c.gates:
        out.extend(_native(g))
    return Circuit(c.width, tuple(out))


def is_native(c: Circuit) -> bool:
    return all(g.kind in NATIVE_KINDS for g in c.gates)
