"""Feasibility estimates, complexity crossovers and roadmap projections."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from . import builders
from .builders import PartonShowerParams, RegisterBudget
from .circuit import Circuit, GateCensus, Kind, census, decompose_to_native, measure
from .device import DeviceModel, averages
from .errors import DomainError, EvaluationError, InvalidArgumentError, MissingCalibrationError
from .routing import QubitMapping, route

DEFAULT_THRESHOLD = 2 / 3
DEFAULT_DOUBLING_PERIOD = 2.0
DEFAULT_CROSSOVER_RANGE = (2, 64)

REFERENCE_CONSTANTS: Mapping[str, float] = MappingProxyType({
    "simplified_shower_gates": 53,
    "full_shower_gates_order": 1e4,
    "jlp_logical_qubits_order": 1e7,
})


def _device_ids(d: DeviceModel, c: Circuit, mapping) -> list[int]:
    if mapping is None:
        ids = d.coupling_graph().labels
        if c.width > len(ids):
            raise InvalidArgumentError(f"circuit width {c.width} exceeds device size {len(ids)}")
        return list(ids[:c.width])
    if isinstance(mapping, QubitMapping):
        mapping = mapping.physical
    if isinstance(mapping, Mapping):
        mapping = [mapping[i] for i in range(c.width)]
    ids = list(mapping)
    if len(ids) < c.width:
        raise InvalidArgumentError(f"mapping covers {len(ids)} qubits, circuit has {c.width}")
    return ids


def success_probability(c: Circuit, d: DeviceModel,
                        mapping: QubitMapping | Sequence[int] | Mapping[int, int] | None = None) -> float:
    """First-order success estimate of a native, routed circuit on ``d``.

    Product of gate fidelities, readout fidelities of measured qubits, and
    ``exp(-span / T2)`` per qubit, where span runs from a qubit's first gate
    start to its last gate end in the ASAP schedule built from calibrated
    durations. ``mapping`` sends circuit qubit ``i`` to a device qubit id;
    by default circuit qubit ``i`` is the ``i``-th device qubit in id order.
    """
    ids = _device_ids(d, c, mapping)
    fidelity = 1.0
    ready: dict[int, float] = {}
    first: dict[int, float] = {}
    last: dict[int, float] = {}
    measured: set[int] = set()

    for g in c.gates:
        phys = [ids[q] for q in g.qubits]
        if g.kind is Kind.MEASURE:
            measured.add(phys[0])
            continue
        if g.kind is Kind.CX:
            cal = d.two_qubit_gate(*phys)
        elif g.is_two_qubit:
            raise MissingCalibrationError(f"no calibration for non-native gate {g.kind.value}; decompose first")
        else:
            cal = d.single_qubit_gate(phys[0])
        fidelity *= 1.0 - cal.error
        start = max(ready.get(q, 0.0) for q in phys)
        end = start + cal.duration_ns
        for q in phys:
            first.setdefault(q, start)
            last[q] = end
            ready[q] = end

    for q in sorted(measured):
        fidelity *= 1.0 - d.qubit(q).readout_err
    for q in sorted(last):
        fidelity *= math.exp(-(last[q] - first[q]) / (d.qubit(q).t2_us * 1000.0))
    return min(1.0, max(0.0, fidelity))


def layer_fidelity(d: DeviceModel) -> float:
    """Success factor of one average two-qubit layer."""
    avg = averages(d)
    err = avg.two_qubit_err or 0.0
    dur = avg.two_qubit_dur_ns or 0.0
    return (1.0 - err) * math.exp(-dur / (avg.t2_us * 1000.0))


def max_reliable_depth(d: DeviceModel, threshold: float = DEFAULT_THRESHOLD) -> int | None:
    """Largest layer count whose compounded fidelity stays >= ``threshold``.

    Returns None when a layer costs nothing, i.e. there is no limit.
    """
    if not 0.0 < threshold < 1.0:
        raise InvalidArgumentError(f"threshold must be in (0, 1), got {threshold}")
    f = layer_fidelity(d)
    if f >= 1.0:
        return None
    if f <= 0.0:
        return 0
    k = max(0, math.floor(math.log(threshold) / math.log(f)))
    # floor of a ratio of logs can be off by one at the boundary
    while f ** (k + 1) >= threshold:
        k += 1
    while k > 0 and f**k < threshold:
        k -= 1
    return k


@dataclass(frozen=True)
class ComplexityModel:
    name: str
    quantum_cost: Callable[[int], float]
    classical_cost: Callable[[int], float]
    parameter_name: str = "n"
    domain_min: int = 1


def shower_model(steps: int = 1) -> ComplexityModel:
    return ComplexityModel(
        "shower",
        lambda n: builders.shower_quantum_cost(steps, n),
        lambda n: builders.shower_classical_cost(steps, n),
        parameter_name="n_f",
        domain_min=2,
    )


def grover_model() -> ComplexityModel:
    return ComplexityModel("grover", math.sqrt, float, parameter_name="N")


def hhl_model(kappa: float) -> ComplexityModel:
    if not kappa > 0:
        raise InvalidArgumentError(f"kappa must be positive, got {kappa}")
    # log(N) vanishes at N=1, so the domain starts at 2
    return ComplexityModel(
        "hhl",
        lambda n: math.log(n) * kappa**2,
        lambda n: n * kappa,
        parameter_name="N",
        domain_min=2,
    )


MODELS = ("shower", "grover", "hhl")


def model_by_name(name: str, param: float | None = None) -> ComplexityModel:
    if name == "shower":
        return shower_model(1 if param is None else int(param))
    if name == "grover":
        return grover_model()
    if name == "hhl":
        if param is None:
            raise InvalidArgumentError("hhl model needs a condition number (kappa)")
        return hhl_model(param)
    raise InvalidArgumentError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")


def _checked(m: ComplexityModel, lo: int, hi: int) -> None:
    if lo > hi:
        raise InvalidArgumentError(f"empty range [{lo}, {hi}]")
    if lo < m.domain_min:
        raise DomainError(f"{m.name} model is defined for {m.parameter_name} >= {m.domain_min}, got {lo}")


def cost_table(m: ComplexityModel, lo: int, hi: int) -> list[tuple[int, float, float]]:
    _checked(m, lo, hi)
    rows = []
    for n in range(lo, hi + 1):
        q, c = m.quantum_cost(n), m.classical_cost(n)
        if not (math.isfinite(q) and math.isfinite(c)):
            raise EvaluationError(f"{m.name} cost is not finite at {m.parameter_name}={n}")
        rows.append((n, q, c))
    return rows


def find_crossover(m: ComplexityModel, lo: int, hi: int) -> int | None:
    """Smallest n in ``[lo, hi]`` with quantum cost strictly below classical."""
    _checked(m, lo, hi)
    for n in range(lo, hi + 1):
        q, c = m.quantum_cost(n), m.classical_cost(n)
        if not (math.isfinite(q) and math.isfinite(c)):
            raise EvaluationError(f"{m.name} cost is not finite at {m.parameter_name}={n}")
        if q < c:
            return n
    return None


@dataclass(frozen=True)
class RoadmapModel:
    current_capability: float
    doubling_period: float = DEFAULT_DOUBLING_PERIOD

    def __post_init__(self):
        if not (math.isfinite(self.current_capability) and self.current_capability > 0):
            raise InvalidArgumentError(f"current capability must be positive, got {self.current_capability}")
        if not (math.isfinite(self.doubling_period) and self.doubling_period > 0):
            raise InvalidArgumentError(f"doubling period must be positive, got {self.doubling_period}")

    @classmethod
    def for_device(cls, d: DeviceModel, doubling_period: float = DEFAULT_DOUBLING_PERIOD) -> RoadmapModel:
        return cls(float(d.n_qubits), doubling_period)


def years_until(required: float, r: RoadmapModel) -> float:
    if not required > 0:
        raise InvalidArgumentError(f"required capability must be positive, got {required}")
    if r.current_capability >= required:
        return 0.0
    return r.doubling_period * math.log2(required / r.current_capability)


@dataclass(frozen=True)
class FeasibilityReport:
    success_probability: float
    max_reliable_depth: int | None
    logical_census: GateCensus | None = None
    routed_census: GateCensus | None = None
    registers: RegisterBudget | None = None
    quantum_cost: float | None = None
    classical_cost: float | None = None
    crossover: int | None = None
    projected_years: float | None = None
    reference: Mapping[str, float] = field(default_factory=lambda: REFERENCE_CONSTANTS)

    def __post_init__(self):
        if not 0.0 <= self.success_probability <= 1.0:
            raise ValueError(f"success probability {self.success_probability} outside [0, 1]")

    def as_rows(self) -> list[tuple[str, object]]:
        rows: list[tuple[str, object]] = []
        if self.registers is not None:
            rows += [
                ("particle_state_qubits", self.registers.particle_state),
                ("history_qubits", self.registers.history),
                ("total_dominant_qubits", self.registers.total_dominant),
            ]
        if self.quantum_cost is not None:
            rows += [("quantum_cost", self.quantum_cost), ("classical_cost", self.classical_cost)]
        for label, cen in (("logical", self.logical_census), ("routed", self.routed_census)):
            if cen is not None:
                rows += [(f"{label}_total_gates", cen.total), (f"{label}_cnot_gates", cen.cnot),
                         (f"{label}_depth", cen.depth)]
        rows += [
            ("crossover", self.crossover),
            ("projected_years", self.projected_years),
            ("success_probability", self.success_probability),
            ("max_reliable_depth", self.max_reliable_depth),
        ]
        rows += [(f"reference_{k}", v) for k, v in self.reference.items()]
        return rows


def advantage_report(p: PartonShowerParams, d: DeviceModel, r: RoadmapModel | None = None,
                     threshold: float = DEFAULT_THRESHOLD,
                     crossover_range: tuple[int, int] = DEFAULT_CROSSOVER_RANGE) -> FeasibilityReport:
    """Parton-shower feasibility on ``d`` with a roadmap projection.

    The success estimate treats the quantum cost as a count of average
    two-qubit layers. Years are projected from the device's qubit count to
    the dominant register total; they are omitted when no crossover exists.
    """
    if r is None:
        r = RoadmapModel.for_device(d)
    regs = builders.parton_shower_registers(p)
    q_cost, c_cost = builders.parton_shower_costs(p)
    crossover = find_crossover(shower_model(p.steps), *crossover_range)
    years = years_until(regs.total_dominant, r) if crossover is not None else None
    prob = layer_fidelity(d) ** math.ceil(q_cost)
    return FeasibilityReport(
        success_probability=min(1.0, max(0.0, prob)),
        max_reliable_depth=max_reliable_depth(d, threshold),
        registers=regs,
        quantum_cost=q_cost,
        classical_cost=c_cost,
        crossover=crossover,
        projected_years=years,
    )


def estimate_circuit(c: Circuit, d: DeviceModel, threshold: float = DEFAULT_THRESHOLD,
                     initial: QubitMapping | None = None, measure_all: bool = True) -> FeasibilityReport:
    """Decompose, route onto ``d`` and estimate success.

    With ``measure_all`` every logical qubit is measured at its final
    physical position unless the circuit already measures.
    """
    graph = d.coupling_graph()
    native = decompose_to_native(c)
    routed = route(native, graph, initial)
    circ = routed.circuit
    if measure_all and not c.has_measurements:
        circ = circ.extend(measure(routed.final[q]) for q in range(c.width))
    return FeasibilityReport(
        success_probability=success_probability(circ, d),
        max_reliable_depth=max_reliable_depth(d, threshold),
        logical_census=census(native),
        routed_census=census(routed.circuit),
    )
