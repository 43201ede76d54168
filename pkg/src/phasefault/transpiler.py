"""Mapping logical circuits onto physical qubit topologies.

The initial layout greedily packs the circuit's two-qubit interaction
graph onto coupled device pairs; routing inserts SWAP chains (emitted
as 3 CX each) along BFS shortest paths for non-adjacent pairs. Logical
SWAP gates are likewise decomposed, but do not permute the running
layout: only routing swaps change which logical qubit lives on which
wire. Measurements move to the end of the op list and read through the
final layout, which leaves the observed distribution unchanged.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .circuit import Circuit, GateKind, GateOp, ResourceLimitError, cx, measure

_ISHAPE_7Q = frozenset({(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)})


@dataclass(frozen=True)
class CouplingMap:
    """Physical qubit adjacency; two-qubit gates run only on edges."""

    n_physical: int
    edges: frozenset[tuple[int, int]]
    name: str = "custom"

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on physical qubit {a}")
            if not (0 <= a < self.n_physical and 0 <= b < self.n_physical):
                raise ValueError(f"edge ({a},{b}) outside 0..{self.n_physical - 1}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.n_physical < 1:
            raise ValueError("topology needs at least one qubit")
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for p in frontier:
                for q in self.neighbors(p):
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        if len(seen) != self.n_physical:
            raise ValueError(f"topology {self.name!r} is not connected")

    @cached_property
    def _adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_physical)]
        for a, b in sorted(self.edges):
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(n)) for n in adj)

    def neighbors(self, p: int) -> tuple[int, ...]:
        return self._adjacency[p]

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def shortest_path(self, src: int, dst: int) -> list[int]:
        """BFS path with sorted neighbor expansion; deterministic."""
        if src == dst:
            return [src]
        parent = {src: src}
        frontier = [src]
        while frontier:
            nxt = []
            for p in frontier:
                for q in self.neighbors(p):
                    if q not in parent:
                        parent[q] = p
                        if q == dst:
                            path = [dst]
                            while path[-1] != src:
                                path.append(parent[path[-1]])
                            return path[::-1]
                        nxt.append(q)
            frontier = nxt
        raise AssertionError("connected graph must contain a path")


def builtin_topology(name: str) -> CouplingMap:
    """Named device maps: casablanca, jakarta, line-N, full-N.

    casablanca and jakarta share the 7-qubit I-shape with edges
    (0,1),(1,2),(1,3),(3,5),(4,5),(5,6).
    """
    if name in ("casablanca", "jakarta"):
        return CouplingMap(7, _ISHAPE_7Q, name=name)
    for prefix in ("line-", "full-"):
        if name.startswith(prefix):
            try:
                n = int(name[len(prefix):])
            except ValueError:
                raise ValueError(f"unknown topology {name!r}")
            if n < 1:
                raise ValueError(f"topology size must be >= 1 in {name!r}")
            if prefix == "line-":
                edges = {(i, i + 1) for i in range(n - 1)}
            else:
                edges = {(i, j) for i in range(n) for j in range(i + 1, n)}
            return CouplingMap(n, frozenset(edges), name=name)
    raise ValueError(f"unknown topology {name!r}")


def load_topology(path) -> CouplingMap:
    """Read a JSON topology: {"name": ..., "n_physical": N, "edges": [[a,b],...]}."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        edges = frozenset((int(a), int(b)) for a, b in doc["edges"])
        return CouplingMap(int(doc["n_physical"]), edges, name=str(doc.get("name", "file")))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed topology file {path}: {exc}")


@dataclass(frozen=True)
class Layout:
    """Injective assignment of logical qubit index -> physical qubit index."""

    logical_to_physical: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.logical_to_physical)) != len(self.logical_to_physical):
            raise ValueError("layout must be injective")

    def physical(self, logical: int) -> int:
        return self.logical_to_physical[logical]

    @cached_property
    def physical_to_logical(self) -> dict[int, int]:
        return {p: l for l, p in enumerate(self.logical_to_physical)}

    def logical(self, physical: int) -> int | None:
        return self.physical_to_logical.get(physical)


@dataclass(frozen=True)
class TranspiledCircuit:
    """Physical-index circuit plus the tracking needed by the injector.

    op_layouts[i] is the logical->physical map in force after op i, with
    a routing swap taking effect at its third CX. site_provenance[i] is
    the index of the logical op that produced transpiled op i.
    """

    circuit: Circuit
    coupling: CouplingMap
    initial_layout: Layout
    final_layout: Layout
    site_provenance: tuple[int, ...]
    op_layouts: tuple[tuple[int, ...], ...]

    @property
    def n_logical(self) -> int:
        return len(self.initial_layout.logical_to_physical)

    def logical_operands(self, op_index: int) -> tuple[int | None, ...]:
        """Logical qubit under each operand wire once op_index has run."""
        l2p = self.op_layouts[op_index]
        inverse = {p: l for l, p in enumerate(l2p)}
        return tuple(inverse.get(p) for p in self.circuit.ops[op_index].qubits)

    def wire_of(self, op_index: int, logical: int) -> int:
        """Physical wire holding `logical` once op_index has run."""
        return self.op_layouts[op_index][logical]


def _dense_initial_layout(
    n_logical: int, weights: dict[tuple[int, int], int], coupling: CouplingMap
) -> tuple[int, ...]:
    pull = {l: 0 for l in range(n_logical)}
    for (a, b), w in weights.items():
        pull[a] += w
        pull[b] += w
    order = sorted(range(n_logical), key=lambda l: (-pull[l], l))
    placed: dict[int, int] = {}
    free = set(range(coupling.n_physical))

    for l in order:
        if not placed:
            best = min(free, key=lambda p: (-len(coupling.neighbors(p)), p))
        else:
            def score(p: int) -> int:
                total = 0
                for m, pm in placed.items():
                    w = weights.get((min(l, m), max(l, m)), 0)
                    if w and coupling.has_edge(p, pm):
                        total += w
                return total

            best = min(free, key=lambda p: (-score(p), p))
        placed[l] = best
        free.remove(best)
    return tuple(placed[l] for l in range(n_logical))


def transpile(
    circuit: Circuit,
    coupling: CouplingMap,
    initial_layout: tuple[int, ...] | None = None,
) -> TranspiledCircuit:
    """Map a logical circuit onto `coupling`.

    Every two-qubit gate in the result acts on a coupling edge, and
    exact simulation of the result reproduces the logical circuit's
    measured distribution. `initial_layout` overrides the dense-packing
    heuristic (mainly for tests and reproductions).
    """
    if circuit.n_qubits > coupling.n_physical:
        raise ResourceLimitError(
            f"circuit has {circuit.n_qubits} qubits, device {coupling.n_physical}"
        )
    weights: dict[tuple[int, int], int] = {}
    for op in circuit.ops:
        if len(op.qubits) == 2:
            pair = (min(op.qubits), max(op.qubits))
            weights[pair] = weights.get(pair, 0) + 1

    if initial_layout is not None:
        if len(initial_layout) != circuit.n_qubits:
            raise ValueError("initial_layout must place every logical qubit")
        if any(not 0 <= p < coupling.n_physical for p in initial_layout):
            raise ValueError("initial_layout references qubits outside the device")
        init = tuple(initial_layout)
    else:
        init = _dense_initial_layout(circuit.n_qubits, weights, coupling)
    l2p = list(init)
    p2l: list[int | None] = [None] * coupling.n_physical
    for l, p in enumerate(l2p):
        p2l[p] = l

    ops_out: list[GateOp] = []
    provenance: list[int] = []
    snapshots: list[tuple[int, ...]] = []
    deferred: list[tuple[int, GateOp]] = []

    def emit(op: GateOp, source: int) -> None:
        ops_out.append(op)
        provenance.append(source)
        snapshots.append(tuple(l2p))

    def routing_swap(wa: int, wb: int, source: int) -> None:
        # SWAP as 3 CX; the layout permutes at the final CX.
        emit(cx(wa, wb), source)
        emit(cx(wb, wa), source)
        la, lb = p2l[wa], p2l[wb]
        if la is not None:
            l2p[la] = wb
        if lb is not None:
            l2p[lb] = wa
        p2l[wa], p2l[wb] = lb, la
        emit(cx(wa, wb), source)

    for idx, op in enumerate(circuit.ops):
        if op.kind is GateKind.MEASURE:
            deferred.append((idx, op))
            continue
        if len(op.qubits) == 1:
            emit(GateOp(op.kind, (l2p[op.qubits[0]],), op.params, injected=op.injected), idx)
            continue
        a, b = op.qubits
        if not coupling.has_edge(l2p[a], l2p[b]):
            path = coupling.shortest_path(l2p[a], l2p[b])
            for i in range(len(path) - 2):
                routing_swap(path[i], path[i + 1], idx)
        wa, wb = l2p[a], l2p[b]
        if op.kind is GateKind.CX:
            emit(cx(wa, wb), idx)
        else:  # logical SWAP: state moves, logical labels stay put
            emit(cx(wa, wb), idx)
            emit(cx(wb, wa), idx)
            emit(cx(wa, wb), idx)

    for idx, op in deferred:
        emit(measure(l2p[op.qubits[0]], op.clbit), idx)

    out = Circuit(coupling.n_physical, circuit.n_clbits, tuple(ops_out), circuit.name)
    return TranspiledCircuit(
        circuit=out,
        coupling=coupling,
        initial_layout=Layout(tuple(init)),
        final_layout=Layout(tuple(l2p)),
        site_provenance=tuple(provenance),
        op_layouts=tuple(snapshots),
    )


def neighbor_pairs(
    t: TranspiledCircuit, coupling: CouplingMap | None = None
) -> set[tuple[int, int]]:
    """Logical qubit pairs physically adjacent under the initial layout."""
    coupling = coupling if coupling is not None else t.coupling
    l2p = t.initial_layout.logical_to_physical
    pairs = set()
    for a in range(len(l2p)):
        for b in range(a + 1, len(l2p)):
            if coupling.has_edge(l2p[a], l2p[b]):
                pairs.add((a, b))
    return pairs
