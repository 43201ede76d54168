import json

import pytest

from dense_oracle import assert_dist_close
from phasefault.benchmarks import make_bernstein_vazirani, make_deutsch_jozsa, make_qft
from phasefault.circuit import Circuit, GateKind, ResourceLimitError, cx, h, measure, swap
from phasefault.simulator import run_exact
from phasefault.transpiler import (
    CouplingMap,
    Layout,
    builtin_topology,
    load_topology,
    neighbor_pairs,
    transpile,
)


def cx_count(t):
    return sum(1 for op in t.circuit.ops if op.kind is GateKind.CX)


def all_two_qubit_on_edges(t):
    return all(
        t.coupling.has_edge(*op.qubits)
        for op in t.circuit.ops
        if len(op.qubits) == 2
    )


class TestTopologies:
    def test_jakarta_shape(self):
        cm = builtin_topology("jakarta")
        assert cm.n_physical == 7
        assert len(cm.edges) == 6
        assert cm.has_edge(0, 1) and cm.has_edge(5, 6)
        assert not cm.has_edge(0, 6)

    def test_casablanca_matches_jakarta(self):
        assert builtin_topology("casablanca").edges == builtin_topology("jakarta").edges

    def test_line(self):
        cm = builtin_topology("line-3")
        assert cm.edges == frozenset({(0, 1), (1, 2)})

    def test_full(self):
        assert len(builtin_topology("full-4").edges) == 6

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            builtin_topology("hexagon")
        with pytest.raises(ValueError):
            builtin_topology("line-x")

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            CouplingMap(4, frozenset({(0, 1), (2, 3)}))

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            CouplingMap(2, frozenset({(0, 0), (0, 1)}))

    def test_load_topology_file(self, tmp_path):
        doc = {"name": "tee", "n_physical": 4, "edges": [[0, 1], [1, 2], [1, 3]]}
        path = tmp_path / "tee.json"
        path.write_text(json.dumps(doc))
        cm = load_topology(path)
        assert cm.name == "tee" and cm.n_physical == 4 and len(cm.edges) == 3

    def test_load_topology_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n_physical": 3}')
        with pytest.raises(ValueError):
            load_topology(path)


class TestLayout:
    def test_injective(self):
        with pytest.raises(ValueError):
            Layout((0, 0))

    def test_inverse(self):
        lay = Layout((2, 0, 1))
        assert lay.physical(0) == 2
        assert lay.logical(2) == 0
        assert lay.logical(5) is None


class TestTranspile:
    def test_adjacent_interactions_need_no_swaps(self):
        c = make_bernstein_vazirani(2, "11")
        t = transpile(c, builtin_topology("jakarta"))
        assert cx_count(t) == 2  # the two oracle CX, nothing added
        assert_dist_close(run_exact(t.circuit).outcomes, run_exact(c).outcomes)

    def test_forced_swap_chain(self):
        # logical pair pinned to line ends: distance 2 -> one chain of 3 CX
        c = Circuit(2, 2, (cx(0, 1), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("line-3"), initial_layout=(0, 2))
        assert cx_count(t) == 4
        assert all_two_qubit_on_edges(t)
        assert_dist_close(run_exact(t.circuit).outcomes, run_exact(c).outcomes)
        # the moved qubit's tracking follows the swap
        assert t.final_layout.logical_to_physical == (1, 2)

    def test_width_over_device(self):
        with pytest.raises(ResourceLimitError):
            transpile(make_qft(4, 0), builtin_topology("line-3"))

    def test_deterministic(self):
        c = make_qft(5, 9)
        cm = builtin_topology("jakarta")
        a, b = transpile(c, cm), transpile(c, cm)
        assert a.circuit.ops == b.circuit.ops
        assert a.initial_layout == b.initial_layout

    def test_measures_moved_to_end(self):
        t = transpile(make_bernstein_vazirani(3, "101"), builtin_topology("jakarta"))
        kinds = [op.kind for op in t.circuit.ops]
        first_measure = kinds.index(GateKind.MEASURE)
        assert all(k is GateKind.MEASURE for k in kinds[first_measure:])

    def test_provenance_tracks_logical_ops(self):
        c = make_bernstein_vazirani(3, "101")
        t = transpile(c, builtin_topology("jakarta"))
        assert len(t.site_provenance) == len(t.circuit.ops)
        assert all(0 <= s < len(c.ops) for s in t.site_provenance)

    def test_logical_operand_labels_across_routing(self):
        c = Circuit(2, 2, (cx(0, 1), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("line-3"), initial_layout=(0, 2))
        # routing triple on (0,1): labels stay pre-swap until the last CX
        assert t.logical_operands(0) == (0, None)
        assert t.logical_operands(1) == (None, 0)
        assert t.logical_operands(2) == (None, 0)
        # then the actual CX on wires (1, 2) touches logical (0, 1)
        assert t.logical_operands(3) == (0, 1)

    def test_logical_swap_keeps_labels(self):
        c = Circuit(2, 2, (h(0), swap(0, 1), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("line-2"))
        assert t.initial_layout == t.final_layout
        assert cx_count(t) == 3  # decomposed swap
        assert_dist_close(run_exact(t.circuit).outcomes, run_exact(c).outcomes)

    @pytest.mark.parametrize("width", [4, 5])
    @pytest.mark.parametrize("family", ["bv", "dj", "qft"])
    def test_distribution_equivalence(self, family, width):
        if family == "bv":
            c = make_bernstein_vazirani(width - 1, ("10" * width)[: width - 1])
        elif family == "dj":
            c = make_deutsch_jozsa(width - 1, "balanced", ("01" * width)[: width - 1])
        else:
            c = make_qft(width, width + 1)
        t = transpile(c, builtin_topology("jakarta"))
        assert all_two_qubit_on_edges(t)
        assert_dist_close(run_exact(t.circuit).outcomes, run_exact(c).outcomes)


class TestNeighborPairs:
    def test_adjacent_logical_pair_included(self):
        c = Circuit(2, 2, (cx(0, 1), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("jakarta"), initial_layout=(0, 1))
        assert (0, 1) in neighbor_pairs(t)

    def test_distant_logical_pair_excluded(self):
        c = Circuit(2, 2, (h(0), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("jakarta"), initial_layout=(0, 6))
        assert neighbor_pairs(t) == set()

    def test_single_qubit_circuit_empty(self):
        c = Circuit(1, 1, (h(0), measure(0, 0)))
        t = transpile(c, builtin_topology("jakarta"))
        assert neighbor_pairs(t) == set()

    def test_bv4_star_layout(self):
        t = transpile(make_bernstein_vazirani(3, "101"), builtin_topology("jakarta"))
        pairs = neighbor_pairs(t)
        # the ancilla (logical 3) must sit next to both oracle qubits
        assert (0, 3) in pairs and (2, 3) in pairs
