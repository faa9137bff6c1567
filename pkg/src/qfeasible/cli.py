"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input or validation error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import Sequence

from . import builders, estimator
from .builders import PartonShowerParams
from .circuit import census, decompose_to_native
from .device import (DeviceModel, average_discrepancies, averages, builtin, builtin_johannesburg,
                     load_calibration)
from .errors import InvalidArgumentError, QFeasibleError
from .routing import CouplingGraph, route
from .simulator import MAX_SIMULATE_QUBITS, measure_probabilities, simulate

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2

# Coupling graphs without calibration data, usable where only topology matters.
TOPOLOGIES = {
    "johannesburg": lambda: builtin_johannesburg().coupling_graph(),
    "johannesburg-line25": lambda: builtin_johannesburg().coupling_graph().extended_line(25),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.6g}"
    return str(value)


def _csv(rows: Sequence[Sequence], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    for row in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])


def _kv(rows, out) -> None:
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        out.write(f"{k:<{width}}  {_fmt(v)}\n")


def _load_device(args) -> DeviceModel | None:
    if getattr(args, "device", None) and getattr(args, "builtin", None):
        raise UsageError("use either --device or --builtin, not both")
    if getattr(args, "device", None):
        return load_calibration(args.device)
    if getattr(args, "builtin", None):
        return builtin(args.builtin)
    return None


def _load_graph(args) -> CouplingGraph | None:
    if args.builtin in TOPOLOGIES and not args.device:
        return TOPOLOGIES[args.builtin]()
    d = _load_device(args)
    return d.coupling_graph() if d else None


def cmd_qft_sweep(args, out) -> int:
    if not 1 <= args.min_n <= args.max_n <= builders.MAX_QFT_QUBITS:
        raise UsageError(f"need 1 <= min_n <= max_n <= {builders.MAX_QFT_QUBITS}")
    graph = _load_graph(args)
    if graph is not None and graph.n_nodes < args.max_n:
        raise InvalidArgumentError(f"device has {graph.n_nodes} qubits, sweep needs {args.max_n}")
    header = ["n", "total_gates", "cnot_gates", "depth"] + (["routed_cnot"] if graph else [])
    rows = [header]
    for n in range(args.min_n, args.max_n + 1):
        native = decompose_to_native(builders.build_qft(n))
        cen = census(native)
        row = [n, cen.total, cen.cnot, cen.depth]
        if graph is not None:
            row.append(census(route(native, graph).circuit).cnot)
        rows.append(row)
    _csv(rows, out)
    return EXIT_OK


def cmd_grover(args, out) -> int:
    n = args.n_qubits
    space = 2**n
    iters = builders.grover_optimal_iterations(space) if args.iterations is None else args.iterations
    circ = builders.build_grover(n, args.marked, iters)
    native = decompose_to_native(circ)
    rows: list[tuple[str, object]] = [
        ("n_qubits", n), ("marked", args.marked), ("iterations", iters),
        ("optimal_iterations", builders.grover_optimal_iterations(space)),
    ]
    if n <= MAX_SIMULATE_QUBITS:
        probs = measure_probabilities(simulate(circ))
        rows.append(("ideal_success_probability", float(probs[args.marked])))
    cen = census(native)
    rows += [("total_gates", cen.total), ("cnot_gates", cen.cnot), ("depth", cen.depth)]
    d = _load_device(args)
    if d is not None:
        rep = estimator.estimate_circuit(circ, d, threshold=args.threshold)
        rows += [("routed_cnot_gates", rep.routed_census.cnot), ("routed_depth", rep.routed_census.depth),
                 ("device_success_probability", rep.success_probability),
                 ("max_reliable_depth", rep.max_reliable_depth)]
    if args.csv:
        _csv([("field", "value")] + rows, out)
    else:
        _kv(rows, out)
    return EXIT_OK


def cmd_shower(args, out) -> int:
    p = PartonShowerParams(args.steps, args.initial_particles, args.n_f, args.mcm)
    d = _load_device(args)
    if d is not None:
        roadmap = estimator.RoadmapModel.for_device(d, args.period)
        rep = estimator.advantage_report(p, d, roadmap, threshold=args.threshold)
        rows = [("device", d.name), ("device_qubits", d.n_qubits), ("doubling_period_years", args.period)]
        rows += rep.as_rows()
    else:
        regs = builders.parton_shower_registers(p)
        q, c = builders.parton_shower_costs(p)
        rows = [
            ("particle_state_qubits", regs.particle_state),
            ("history_qubits", regs.history),
            ("total_dominant_qubits", regs.total_dominant),
            ("quantum_cost", q),
            ("classical_cost", c),
            ("crossover", estimator.find_crossover(estimator.shower_model(p.steps),
                                                   *estimator.DEFAULT_CROSSOVER_RANGE)),
        ]
    rows = [("steps", p.steps), ("initial_particles", p.initial_particles), ("n_f", p.fermion_flavors),
            ("mid_circuit_measurement", p.mid_circuit_measurement)] + rows
    if args.csv:
        _csv([("field", "value")] + rows, out)
    else:
        _kv(rows, out)
    return EXIT_OK


_QUBIT_COLS = ("t1_us", "t2_us", "readout_err", "p01", "p10")


def cmd_device(args, out) -> int:
    if args.file and (args.device or args.builtin):
        raise UsageError("give a calibration file or --device/--builtin, not both")
    if args.file:
        d = load_calibration(args.file)
    else:
        d = _load_device(args)
        if d is None:
            raise UsageError("device needs a calibration file or --builtin NAME")
    avg = averages(d)
    warns = [str(w) for w in d.warnings()]
    if d.name == builtin_johannesburg().name:
        warns += [str(w) for w in average_discrepancies(avg)]

    if args.csv:
        rows = [("kind", "id", "name", "field", "value")]
        for q in sorted(d.qubits, key=lambda q: q.id):
            rows += [("qubit", q.id, "", k, float(getattr(q, k))) for k in _QUBIT_COLS]
        for g in d.gates:
            ids = "-".join(map(str, g.qubits))
            rows += [("gate", ids, g.name, "err", g.error), ("gate", ids, g.name, "dur_ns", g.duration_ns)]
        rows += [("average", "", "", k, v) for k, v in avg.as_dict().items()]
        _csv(rows, out)
    else:
        out.write(f"device {d.name}: {d.n_qubits} qubits, {len(d.edges)} coupling edges\n")
        out.write("qubit  " + "  ".join(f"{c:>11}" for c in _QUBIT_COLS) + "\n")
        for q in sorted(d.qubits, key=lambda q: q.id):
            out.write(f"{q.id:<5}  " + "  ".join(f"{_fmt(float(getattr(q, c))):>11}" for c in _QUBIT_COLS) + "\n")
        out.write("gate\n")
        for g in d.gates:
            out.write(f"  {g.name} {'-'.join(map(str, g.qubits)):<6} err={_fmt(g.error)} dur_ns={_fmt(g.duration_ns)}\n")
        out.write("averages\n")
        for k, v in avg.as_dict().items():
            out.write(f"  {k:<20} {_fmt(v)}\n")
    for w in warns:
        out.write(f"WARN {w}\n")
    return EXIT_OK


def cmd_crossover(args, out) -> int:
    model = estimator.model_by_name(args.model, args.param)
    lo, hi = args.min, args.max
    if lo > hi:
        raise UsageError(f"empty range [{lo}, {hi}]")
    found = estimator.find_crossover(model, lo, hi)
    if args.csv:
        rows = [(model.parameter_name, "quantum_cost", "classical_cost")]
        rows += estimator.cost_table(model, lo, hi)
        _csv(rows, out)
    if found is None:
        out.write(f"no crossover in range [{lo}, {hi}]\n")
    else:
        out.write(f"crossover {model.name}: {model.parameter_name} = {found}\n")
    return EXIT_OK


def cmd_project(args, out) -> int:
    current = args.current
    d = _load_device(args)
    if current is None:
        if d is None:
            raise UsageError("project needs a current capability or a device")
        current = float(d.n_qubits)
    r = estimator.RoadmapModel(current, args.period)
    years = estimator.years_until(args.required, r)
    rows = [("required", args.required), ("current", current), ("doubling_period_years", args.period),
            ("years", years)]
    if args.csv:
        _csv([("field", "value")] + rows, out)
    else:
        _kv(rows, out)
    return EXIT_OK


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--csv", action="store_true", help="emit machine-readable CSV")
    p.add_argument("--device", metavar="FILE", help="calibration file")
    p.add_argument("--builtin", metavar="NAME", help="built-in device (johannesburg)")
    p.add_argument("--period", type=float, default=estimator.DEFAULT_DOUBLING_PERIOD,
                   help="capability doubling period in years")
    p.add_argument("--threshold", type=float, default=estimator.DEFAULT_THRESHOLD,
                   help="reliability threshold for max depth")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="qfeasible", description="Quantum resource and feasibility estimates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("qft-sweep", parents=[common], help="QFT gate counts over a size range (CSV)")
    p.add_argument("min_n", type=int)
    p.add_argument("max_n", type=int)
    p.set_defaults(func=cmd_qft_sweep)

    p = sub.add_parser("grover", parents=[common], help="build and check a Grover circuit")
    p.add_argument("n_qubits", type=int)
    p.add_argument("marked", type=int)
    p.add_argument("--iterations", type=int)
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("shower", parents=[common], help="parton-shower registers, costs and projection")
    p.add_argument("steps", type=int)
    p.add_argument("initial_particles", type=int)
    p.add_argument("n_f", type=int)
    p.add_argument("--mcm", action="store_true", help="assume mid-circuit measurement")
    p.set_defaults(func=cmd_shower)

    p = sub.add_parser("device", parents=[common], help="summarize calibration data")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_device)

    p = sub.add_parser("crossover", parents=[common], help="first quantum-advantage point of a cost model")
    p.add_argument("model", choices=estimator.MODELS)
    p.add_argument("min", type=int)
    p.add_argument("max", type=int)
    p.add_argument("--param", type=float, help="model parameter (kappa for hhl, steps for shower)")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("project", parents=[common], help="years until a capability is reached")
    p.add_argument("required", type=float)
    p.add_argument("current", type=float, nargs="?")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "crossover" and args.model == "hhl" and args.param is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("qfeasible: error: hhl needs --param KAPPA\n")
        return EXIT_USAGE
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except UsageError as e:
        sys.stderr.write(f"qfeasible: error: {e}\n")
        return EXIT_USAGE
    except FileNotFoundError as e:
        sys.stderr.write(f"qfeasible: error: file not found: {e.filename}\n")
        return EXIT_INPUT
    except (QFeasibleError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        sys.stderr.write(f"qfeasible: error: {msg}\n")
        return EXIT_INPUT
    out.write(buf.getvalue())
    return code


def main_entry() -> None:
    sys.exit(main())
