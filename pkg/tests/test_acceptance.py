"""Exit criteria. Each test is one criterion; the summary hook prints PASS/FAIL per test."""
import csv
import io
import math
import time

import numpy as np
import pytest

from qfeasible.builders import (PartonShowerParams, build_grover, build_qft, grover_optimal_iterations,
                                parton_shower_registers, qft_counts)
from qfeasible.circuit import Kind, census, decompose_to_native
from qfeasible.cli import TOPOLOGIES, main
from qfeasible.device import average_discrepancies, averages, builtin_johannesburg
from qfeasible.estimator import RoadmapModel, REFERENCE_CONSTANTS, advantage_report, years_until
from qfeasible.routing import route
from qfeasible.simulator import dft_matrix, measure_probabilities, phase_distance, simulate, unitary_of

from conftest import embedding, random_circuit


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_criterion_1_shower_crossover():
    start = time.perf_counter()
    code, text = cli("crossover", "shower", "2", "64")
    elapsed = time.perf_counter() - start
    assert code == 0
    assert text.strip() == "crossover shower: n_f = 21"
    assert elapsed < 1.0


def test_criterion_2_qft_correctness():
    start = time.perf_counter()
    for n in range(1, 7):
        assert phase_distance(unitary_of(build_qft(n)), dft_matrix(n)) < 1e-9
    for n in range(1, 21):
        cen = census(decompose_to_native(build_qft(n)))
        assert cen.cnot == n * (n - 1) + 3 * (n // 2) == qft_counts(n).cnot
    assert time.perf_counter() - start < 10.0


def test_criterion_3_fig1_sweep():
    code, text = cli("qft-sweep", "5", "25")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 21
    for col in ("total_gates", "cnot_gates"):
        vals = [int(r[col]) for r in rows]
        assert all(b > a for a, b in zip(vals, vals[1:])), col

    code, text = cli("qft-sweep", "5", "25", "--builtin", "johannesburg-line25")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 21
    assert TOPOLOGIES["johannesburg-line25"]().n_nodes == 25
    for r in rows:
        assert int(r["routed_cnot"]) > int(r["cnot_gates"]), r["n"]


def test_criterion_4a_grover_n4_exact():
    p = measure_probabilities(simulate(build_grover(2, 3, 1)))[3]
    assert abs(p - 1.0) <= 1e-9


def test_criterion_4b_grover_exhaustive_sweep():
    start = time.perf_counter()
    failures = []
    for n in range(1, 5):
        space = 2**n
        k = grover_optimal_iterations(space)
        for marked in range(space):
            p = measure_probabilities(simulate(build_grover(n, marked, k)))[marked]
            if p < 2 / 3:
                failures.append((n, marked, round(float(p), 6)))
    assert time.perf_counter() - start < 5.0
    assert not failures, f"below 2/3: {failures}"


def test_criterion_5_table_fidelity():
    d = builtin_johannesburg()
    avg = averages(d)
    printed = {"t1_us": 61.303, "t2_us": 13.106, "p01": 0.083, "p10": 0.087,
               "single_qubit_err": 0.0017, "single_qubit_dur_ns": 71.111}
    for key, value in printed.items():
        assert abs(getattr(avg, key) - value) <= 0.001, key
    warned = {w.message.split()[0]: w.message for w in average_discrepancies(avg)}
    assert set(warned) == {"readout_err", "two_qubit_err", "two_qubit_dur_ns"}
    assert "0.2596" in warned["readout_err"] and "0.418" in warned["readout_err"]
    assert "0.0220" in warned["two_qubit_err"] and "0.0209" in warned["two_qubit_err"]
    assert "405.333" in warned["two_qubit_dur_ns"] and "393.9556" in warned["two_qubit_dur_ns"]
    code, text = cli("device", "--builtin", "johannesburg")
    assert code == 0
    assert sum(l.startswith("WARN") and "average" in l for l in text.splitlines()) == 3


def test_criterion_6_register_budget():
    b = parton_shower_registers(PartonShowerParams(4, 1, 2, False))
    assert (b.particle_state, b.history, b.total_dominant) == (15, 12, 27)
    b = parton_shower_registers(PartonShowerParams(4, 1, 2, True))
    assert (b.particle_state, b.history, b.total_dominant) == (15, 2, 17)


def test_criterion_7_routing_soundness():
    rng = np.random.default_rng(7)
    graph = builtin_johannesburg().coupling_graph()
    kinds = (Kind.H, Kind.X, Kind.RX, Kind.RY, Kind.RZ, Kind.CX)
    routed_any = 0
    for _ in range(100):
        width = int(rng.integers(2, 6))
        c = random_circuit(rng, width, int(rng.integers(1, 40)), kinds)
        r = route(c, graph)
        lhs = unitary_of(r.circuit) @ embedding(r.initial.physical, width, graph.n_nodes)
        rhs = embedding(r.final.physical, width, graph.n_nodes) @ unitary_of(c)
        assert np.max(np.abs(lhs - rhs)) < 1e-9
        assert r.swaps_inserted * 3 == census(r.circuit).cnot - census(c).cnot
        routed_any += r.swaps_inserted > 0
    assert routed_any > 0


def test_criterion_8_roadmap_math():
    assert abs(years_until(1e7, RoadmapModel(1e3, 2)) - 26.575) <= 0.001
    rng = np.random.default_rng(8)
    for _ in range(200):
        a, b, c = sorted(float(v) for v in 10 ** rng.uniform(0, 8, size=3))
        period = float(rng.uniform(0.5, 5))
        lhs = years_until(b, RoadmapModel(a, period)) + years_until(c, RoadmapModel(b, period))
        assert abs(lhs - years_until(c, RoadmapModel(a, period))) < 1e-9
    assert years_until(10.0, RoadmapModel(10.0)) == 0.0
    assert years_until(3.0, RoadmapModel(10.0)) == 0.0


COMMANDS = [
    ("qft-sweep", "5", "25"),
    ("qft-sweep", "5", "25", "--builtin", "johannesburg-line25"),
    ("grover", "3", "5", "--builtin", "johannesburg"),
    ("shower", "4", "1", "25", "--mcm", "--builtin", "johannesburg", "--period", "2"),
    ("shower", "4", "1", "25", "--mcm", "--csv"),
    ("device", "--builtin", "johannesburg"),
    ("device", "--builtin", "johannesburg", "--csv"),
    ("crossover", "shower", "2", "64", "--csv"),
    ("crossover", "hhl", "--param", "10", "2", "100"),
    ("crossover", "grover", "1", "16"),
    ("project", "1e7", "1e3"),
]


def test_criterion_9_determinism():
    for argv in COMMANDS:
        first, second = cli(*argv), cli(*argv)
        assert first[0] == 0, argv
        assert first[1].encode() == second[1].encode(), argv


def test_reference_constants_present():
    rep = advantage_report(PartonShowerParams(4, 1, 25, True), builtin_johannesburg())
    assert dict(rep.reference) == dict(REFERENCE_CONSTANTS)
    assert rep.reference["simplified_shower_gates"] == 53
    assert rep.reference["full_shower_gates_order"] == 1e4
    assert rep.reference["jlp_logical_qubits_order"] == 1e7
