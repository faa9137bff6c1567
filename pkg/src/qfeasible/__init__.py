"""Resource estimation and quantum-advantage feasibility for small quantum algorithms."""
from .builders import (PartonShowerParams, RegisterBudget, build_grover, build_qft, grover_optimal_iterations,
                       parton_shower_costs, parton_shower_registers, qft_counts)
from .circuit import Circuit, Gate, GateCensus, Kind, census, decompose_to_native
from .device import DeviceModel, GateCal, QubitCal, averages, builtin_johannesburg, parse_calibration, serialize
from .estimator import (ComplexityModel, FeasibilityReport, RoadmapModel, advantage_report, find_crossover,
                        max_reliable_depth, success_probability, years_until)
from .routing import CouplingGraph, QubitMapping, route, shortest_path
from .simulator import measure_probabilities, simulate, unitary_of

__version__ = "0.1.0"
