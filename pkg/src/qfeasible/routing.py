"""Greedy SWAP-insertion routing onto an undirected coupling graph."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .circuit import Circuit, Gate, Kind, census, cx
from .errors import CapacityError, InvalidArgumentError, NoPathError, UnsupportedGateError


@dataclass(frozen=True)
class CouplingGraph:
    """Undirected coupling map over nodes ``0..n_nodes-1``.

    ``labels`` optionally names each node with its device qubit id.
    """

    n_nodes: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[int, ...] | None = None
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __init__(self, n_nodes: int, edges: Iterable[tuple[int, int]], labels: Sequence[int] | None = None):
        if n_nodes < 1:
            raise InvalidArgumentError(f"coupling graph needs at least one node, got {n_nodes}")
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise InvalidArgumentError(f"self-loop on node {a}")
            if not (0 <= a < n_nodes and 0 <= b < n_nodes):
                raise InvalidArgumentError(f"edge ({a}, {b}) references a node outside 0..{n_nodes - 1}")
            norm.add((min(a, b), max(a, b)))
        if labels is not None:
            labels = tuple(int(v) for v in labels)
            if len(labels) != n_nodes or len(set(labels)) != n_nodes:
                raise InvalidArgumentError("labels must be distinct and one per node")
        adj: list[list[int]] = [[] for _ in range(n_nodes)]
        for a, b in norm:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "n_nodes", int(n_nodes))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(n)) for n in adj))

    @classmethod
    def line(cls, n: int) -> CouplingGraph:
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete(cls, n: int) -> CouplingGraph:
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def from_labeled_edges(cls, edges: Iterable[tuple[int, int]], labels: Iterable[int] | None = None) -> CouplingGraph:
        """Relabel arbitrary qubit ids to ``0..k-1`` in ascending id order."""
        edges = list(edges)
        ids = set(labels or ()) | {q for e in edges for q in e}
        order = sorted(ids)
        index = {q: i for i, q in enumerate(order)}
        return cls(len(order), [(index[a], index[b]) for a, b in edges], labels=order)

    def neighbors(self, node: int) -> tuple[int, ...]:
        return self._adj[node]

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    @property
    def is_connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            for nb in self._adj[todo.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        return len(seen) == self.n_nodes

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n_nodes * (self.n_nodes - 1) // 2

    def extended_line(self, n_nodes: int) -> CouplingGraph:
        """Append a chain of new nodes hanging off the highest existing node."""
        if n_nodes < self.n_nodes:
            raise InvalidArgumentError("extension must not shrink the graph")
        extra = [(i - 1, i) for i in range(self.n_nodes, n_nodes)]
        return CouplingGraph(n_nodes, list(self.edges) + extra)


def shortest_path(g: CouplingGraph, a: int, b: int) -> list[int]:
    """BFS path from ``a`` to ``b``; lower-index neighbours are expanded first."""
    for node in (a, b):
        if not 0 <= node < g.n_nodes:
            raise InvalidArgumentError(f"node {node} not in graph")
    parent = {a: a}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        if cur == b:
            break
        for nb in g.neighbors(cur):
            if nb not in parent:
                parent[nb] = cur
                queue.append(nb)
    if b not in parent:
        raise NoPathError(f"no path between {a} and {b}")
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


@dataclass(frozen=True)
class QubitMapping:
    """Injective map logical index -> physical node; ``physical[i]`` hosts logical ``i``."""

    physical: tuple[int, ...]

    def __post_init__(self):
        phys = tuple(int(p) for p in self.physical)
        if len(set(phys)) != len(phys):
            raise InvalidArgumentError(f"mapping {phys} is not injective")
        if any(p < 0 for p in phys):
            raise InvalidArgumentError(f"negative physical index in {phys}")
        object.__setattr__(self, "physical", phys)

    @classmethod
    def identity(cls, width: int) -> QubitMapping:
        return cls(tuple(range(width)))

    def __getitem__(self, logical: int) -> int:
        return self.physical[logical]

    def __len__(self) -> int:
        return len(self.physical)


@dataclass(frozen=True)
class RoutingResult:
    circuit: Circuit
    swaps_inserted: int
    final: QubitMapping
    initial: QubitMapping


def route(c: Circuit, g: CouplingGraph, initial: QubitMapping | None = None) -> RoutingResult:
    """Greedy router: walk each distant CX control toward its target.

    For a control/target pair whose shortest path has ``L`` nodes, ``L - 2``
    SWAPs make them adjacent. Each SWAP is emitted as three CX and permanently
    updates the mapping. The routed circuit acts on all ``g.n_nodes`` qubits.
    """
    if c.width > g.n_nodes:
        raise CapacityError(f"circuit width {c.width} exceeds device size {g.n_nodes}")
    if initial is None:
        initial = QubitMapping.identity(c.width)
    if len(initial) != c.width:
        raise InvalidArgumentError(f"mapping covers {len(initial)} qubits, circuit has {c.width}")
    if any(p >= g.n_nodes for p in initial.physical):
        raise InvalidArgumentError(f"mapping {initial.physical} references nodes outside the device")

    l2p = list(initial.physical)
    p2l: list[int | None] = [None] * g.n_nodes
    for lq, pq in enumerate(l2p):
        p2l[pq] = lq

    out: list[Gate] = []
    swaps = 0
    for gate in c.gates:
        if gate.kind is not Kind.CX and gate.is_two_qubit:
            raise UnsupportedGateError(f"route expects native gates, got {gate.kind.value}; decompose first")
        if gate.kind is Kind.CX:
            ctrl, tgt = l2p[gate.qubits[0]], l2p[gate.qubits[1]]
            if not g.adjacent(ctrl, tgt):
                path = shortest_path(g, ctrl, tgt)
                for nxt in path[1:-1]:
                    out.extend((cx(ctrl, nxt), cx(nxt, ctrl), cx(ctrl, nxt)))
                    swaps += 1
                    a, b = p2l[ctrl], p2l[nxt]
                    p2l[ctrl], p2l[nxt] = b, a
                    if a is not None:
                        l2p[a] = nxt
                    if b is not None:
                        l2p[b] = ctrl
                    ctrl = nxt
        out.append(gate.on(*(l2p[q] for q in gate.qubits)))

    return RoutingResult(
        circuit=Circuit(g.n_nodes, tuple(out)),
        swaps_inserted=swaps,
        final=QubitMapping(tuple(l2p)),
        initial=initial,
    )


def routed_cnot(c: Circuit, g: CouplingGraph) -> int:
    return census(route(c, g).circuit).cnot
