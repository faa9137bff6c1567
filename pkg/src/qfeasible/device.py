"""Device calibration data: parsing, validation, averages.

Calibration files are line oriented::

    device <name>
    qubit <id> t1_us=<f> t2_us=<f> readout_err=<f> p01=<f> p10=<f>
    gate <name> <q> err=<f> dur_ns=<f>
    gate <name> <q1> <q2> err=<f> dur_ns=<f>

``#`` starts a comment. Keyword fields may come in any order. A two-qubit
gate line implies an undirected coupling edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from statistics import fmean
from typing import Iterable

from .errors import MissingCalibrationError, ParseError, ValidationError
from .routing import CouplingGraph

ANOMALOUS_READOUT = 0.5

# "Avg." rows as printed in the source tables, with their printed decimals.
REFERENCE_AVERAGES: dict[str, tuple[float, int]] = {
    "t1_us": (61.303, 3),
    "t2_us": (13.106, 3),
    "readout_err": (0.418, 3),
    "p01": (0.083, 3),
    "p10": (0.087, 3),
    "single_qubit_err": (0.0017, 4),
    "single_qubit_dur_ns": (71.111, 3),
    "two_qubit_err": (0.0209, 4),
    "two_qubit_dur_ns": (393.9556, 4),
}

_QUBIT_KEYS = ("t1_us", "t2_us", "readout_err", "p01", "p10")
_GATE_KEYS = ("err", "dur_ns")


@dataclass(frozen=True)
class QubitCal:
    id: int
    t1_us: float
    t2_us: float
    readout_err: float
    p01: float
    p10: float

    def problems(self) -> list[str]:
        out = []
        for name in ("t1_us", "t2_us"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                out.append(f"qubit {self.id}: {name} must be positive, got {v}")
        for name in ("readout_err", "p01", "p10"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                out.append(f"qubit {self.id}: {name} must be in [0, 1], got {v}")
        return out


@dataclass(frozen=True)
class GateCal:
    name: str
    qubits: tuple[int, ...]
    error: float
    duration_ns: float

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))

    @property
    def edge(self) -> tuple[int, int] | None:
        if len(self.qubits) != 2:
            return None
        a, b = self.qubits
        return (min(a, b), max(a, b))

    def problems(self) -> list[str]:
        label = f"gate {self.name} {' '.join(map(str, self.qubits))}"
        out = []
        if len(self.qubits) not in (1, 2) or len(set(self.qubits)) != len(self.qubits):
            out.append(f"{label}: needs 1 or 2 distinct qubits")
        if not 0.0 <= self.error <= 1.0:
            out.append(f"{label}: err must be in [0, 1], got {self.error}")
        if not (math.isfinite(self.duration_ns) and self.duration_ns > 0):
            out.append(f"{label}: dur_ns must be positive, got {self.duration_ns}")
        return out


@dataclass(frozen=True)
class CalibrationWarning:
    kind: str
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class DeviceModel:
    name: str
    qubits: tuple[QubitCal, ...]
    gates: tuple[GateCal, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "gates", tuple(self.gates))
        validate(self)

    @property
    def qubit_ids(self) -> list[int]:
        return sorted(q.id for q in self.qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def qubit(self, qid: int) -> QubitCal:
        for q in self.qubits:
            if q.id == qid:
                return q
        raise MissingCalibrationError(f"no calibration for qubit {qid}")

    def gate(self, name: str, *qubits: int) -> GateCal:
        key = tuple(sorted(qubits)) if len(qubits) == 2 else tuple(qubits)
        for g in self.gates:
            gkey = g.edge if g.edge else g.qubits
            if g.name == name and gkey == key:
                return g
        raise MissingCalibrationError(f"no {name} calibration on qubits {qubits}")

    def single_qubit_gate(self, qid: int) -> GateCal:
        """Calibration for single-qubit work on ``qid``; lowest name wins on ties."""
        cands = sorted((g for g in self.gates if g.qubits == (qid,)), key=lambda g: g.name)
        if not cands:
            raise MissingCalibrationError(f"no single-qubit gate calibration on qubit {qid}")
        return cands[0]

    def two_qubit_gate(self, a: int, b: int) -> GateCal:
        key = (min(a, b), max(a, b))
        cands = sorted((g for g in self.gates if g.edge == key), key=lambda g: g.name)
        if not cands:
            raise MissingCalibrationError(f"no two-qubit gate calibration on edge {a}-{b}")
        return cands[0]

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {g.edge for g in self.gates if g.edge}

    def coupling_graph(self) -> CouplingGraph:
        """Coupling graph over nodes ``0..n-1``; ``labels`` holds the device ids."""
        return CouplingGraph.from_labeled_edges(sorted(self.edges), self.qubit_ids)

    def warnings(self) -> list[CalibrationWarning]:
        out = []
        for q in sorted(self.qubits, key=lambda q: q.id):
            if q.readout_err > ANOMALOUS_READOUT:
                out.append(CalibrationWarning(
                    "anomalous_readout", f"qubit {q.id} readout error {q.readout_err:g} exceeds {ANOMALOUS_READOUT:g}"))
            if q.t2_us > 2 * q.t1_us:
                out.append(CalibrationWarning(
                    "t2_exceeds_2t1", f"qubit {q.id} T2 {q.t2_us:g} us exceeds 2*T1 {2 * q.t1_us:g} us"))
        return out


def validate(d: DeviceModel) -> None:
    if not d.qubits:
        raise ValidationError("device must have at least one qubit")
    problems: list[str] = []
    seen: set[int] = set()
    for q in d.qubits:
        if q.id in seen:
            problems.append(f"duplicate qubit {q.id}")
        seen.add(q.id)
        problems.extend(q.problems())
    keys: set = set()
    for g in d.gates:
        problems.extend(g.problems())
        key = (g.name, g.edge or g.qubits)
        if key in keys:
            problems.append(f"duplicate gate {g.name} on {g.qubits}")
        keys.add(key)
        missing = [q for q in g.qubits if q not in seen]
        if missing:
            problems.append(f"gate {g.name} on {g.qubits} references uncalibrated qubit(s) {missing}")
    if problems:
        raise ValidationError("; ".join(problems))


def _fields(tokens: list[str], allowed: tuple[str, ...], lineno: int) -> dict[str, float]:
    values: dict[str, float] = {}
    for tok in tokens:
        key, sep, raw = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        if key not in allowed:
            raise ParseError(f"unknown field {key!r}", lineno)
        if key in values:
            raise ParseError(f"field {key!r} given twice", lineno)
        try:
            values[key] = float(raw)
        except ValueError:
            raise ParseError(f"bad number {raw!r} for {key}", lineno) from None
    missing = [k for k in allowed if k not in values]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", lineno)
    return values


def _int(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", lineno) from None


def parse_calibration(text: str) -> DeviceModel:
    name: str | None = None
    qubits: list[QubitCal] = []
    gates: list[GateCal] = []
    qubit_lines: dict[int, int] = {}
    gate_lines: dict[tuple, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head, rest = tokens[0], tokens[1:]
        if head == "device":
            if name is not None:
                raise ParseError("more than one device line", lineno)
            if qubits or gates:
                raise ParseError("device line must come first", lineno)
            if len(rest) != 1:
                raise ParseError("device line takes exactly one name", lineno)
            name = rest[0]
            continue
        if name is None:
            raise ParseError("first entry must be a device line", lineno)
        if head == "qubit":
            if not rest:
                raise ParseError("qubit line needs an id", lineno)
            qid = _int(rest[0], "qubit id", lineno)
            vals = _fields(rest[1:], _QUBIT_KEYS, lineno)
            q = QubitCal(qid, **vals)
            if qid in qubit_lines:
                raise ValidationError(f"duplicate qubit {qid} (first on line {qubit_lines[qid]})", lineno)
            bad = q.problems()
            if bad:
                raise ValidationError("; ".join(bad), lineno)
            qubit_lines[qid] = lineno
            qubits.append(q)
        elif head == "gate":
            if len(rest) < 2:
                raise ParseError("gate line needs a name and qubit(s)", lineno)
            gname = rest[0]
            pos = [t for t in rest[1:] if "=" not in t]
            if len(pos) not in (1, 2) or rest[1:1 + len(pos)] != pos:
                raise ParseError("gate line takes 1 or 2 qubit indices before its fields", lineno)
            qs = tuple(_int(t, "qubit index", lineno) for t in pos)
            vals = _fields(rest[1 + len(pos):], _GATE_KEYS, lineno)
            g = GateCal(gname, qs, vals["err"], vals["dur_ns"])
            bad = g.problems()
            if bad:
                raise ValidationError("; ".join(bad), lineno)
            key = (gname, g.edge or qs)
            if key in gate_lines:
                raise ValidationError(f"duplicate gate {gname} on {qs} (first on line {gate_lines[key]})", lineno)
            gate_lines[key] = lineno
            gates.append(g)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    if name is None:
        raise ParseError("missing device line")
    if not qubits:
        raise ValidationError("device must have at least one qubit")
    for g in gates:
        for q in g.qubits:
            if q not in qubit_lines:
                raise ValidationError(f"gate {g.name} references qubit {q} with no qubit line",
                                      gate_lines[(g.name, g.edge or g.qubits)])
    return DeviceModel(name, tuple(qubits), tuple(gates))


def load_calibration(path: str | Path) -> DeviceModel:
    return parse_calibration(Path(path).read_text(encoding="utf-8"))


def serialize(d: DeviceModel) -> str:
    lines = [f"device {d.name}"]
    for q in d.qubits:
        fields = " ".join(f"{k}={getattr(q, k)!r}" for k in _QUBIT_KEYS)
        lines.append(f"qubit {q.id} {fields}")
    for g in d.gates:
        qs = " ".join(map(str, g.qubits))
        lines.append(f"gate {g.name} {qs} err={g.error!r} dur_ns={g.duration_ns!r}")
    return "\n".join(lines) + "\n"


BUILTIN_DEVICES = ("johannesburg",)


def builtin_johannesburg() -> DeviceModel:
    text = resources.files("qfeasible.data").joinpath("johannesburg.cal").read_text(encoding="utf-8")
    return parse_calibration(text)


def builtin(name: str) -> DeviceModel:
    if name == "johannesburg":
        return builtin_johannesburg()
    raise KeyError(f"unknown builtin device {name!r}; choose from {', '.join(BUILTIN_DEVICES)}")


@dataclass(frozen=True)
class DeviceAverages:
    t1_us: float
    t2_us: float
    readout_err: float
    p01: float
    p10: float
    single_qubit_err: float | None
    single_qubit_dur_ns: float | None
    two_qubit_err: float | None
    two_qubit_dur_ns: float | None

    def as_dict(self) -> dict[str, float | None]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _mean(values: Iterable[float]) -> float | None:
    values = list(values)
    return fmean(values) if values else None


def averages(d: DeviceModel) -> DeviceAverages:
    one = [g for g in d.gates if len(g.qubits) == 1]
    two = [g for g in d.gates if len(g.qubits) == 2]
    return DeviceAverages(
        t1_us=fmean(q.t1_us for q in d.qubits),
        t2_us=fmean(q.t2_us for q in d.qubits),
        readout_err=fmean(q.readout_err for q in d.qubits),
        p01=fmean(q.p01 for q in d.qubits),
        p10=fmean(q.p10 for q in d.qubits),
        single_qubit_err=_mean(g.error for g in one),
        single_qubit_dur_ns=_mean(g.duration_ns for g in one),
        two_qubit_err=_mean(g.error for g in two),
        two_qubit_dur_ns=_mean(g.duration_ns for g in two),
    )


def average_discrepancies(avg: DeviceAverages,
                          reference: dict[str, tuple[float, int]] = REFERENCE_AVERAGES) -> list[CalibrationWarning]:
    """Columns whose recomputed mean does not round to the printed reference value."""
    out = []
    for key, (printed, decimals) in reference.items():
        value = getattr(avg, key)
        if value is None:
            continue
        if abs(value - printed) > 0.5 * 10**-decimals + 1e-12:
            out.append(CalibrationWarning(
                "average_discrepancy",
                f"{key} average {value:.{decimals + 1}f} != reference {printed:.{decimals}f}"))
    return out
