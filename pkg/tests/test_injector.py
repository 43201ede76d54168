import math

import pytest

from dense_oracle import assert_dist_close
from phasefault.benchmarks import make_bernstein_vazirani
from phasefault.circuit import Circuit, GateKind, cx, h, measure
from phasefault.injector import (
    BASE_STEP,
    CampaignPlan,
    FaultSite,
    FaultSpec,
    PhaseShift,
    angle_grid,
    build_faulty_circuit,
    enumerate_angles,
    enumerate_double,
    enumerate_sites,
    plan_campaign,
)
from phasefault.simulator import NoiseModel, run_exact
from phasefault.transpiler import builtin_topology, transpile

PI = math.pi


def bv_transpiled(topology="full-4"):
    return transpile(make_bernstein_vazirani(3, "101"), builtin_topology(topology))


class TestAngleGrid:
    def test_full_sweep_has_312_configurations(self):
        grid = enumerate_angles()
        assert len(grid) == 312

    def test_origin_first(self):
        assert enumerate_angles()[0] == PhaseShift(0.0, 0.0)

    def test_endpoints(self):
        grid = enumerate_angles()
        assert PhaseShift(PI, 23 * BASE_STEP) in grid
        assert all(shift.phi < 2 * PI for shift in grid)
        assert max(shift.theta for shift in grid) == PI

    def test_theta_major_order(self):
        grid = enumerate_angles()
        assert grid[1] == PhaseShift(0.0, BASE_STEP)
        assert grid[24] == PhaseShift(BASE_STEP, 0.0)

    def test_coarse_grid(self):
        assert len(angle_grid(30)) == 7 * 12
        assert len(angle_grid(45)) == 5 * 8
        assert len(angle_grid(180)) == 2 * 2

    def test_coarse_grid_on_fine_lattice(self):
        fine = set(enumerate_angles())
        assert all(s in fine for s in angle_grid(30))

    def test_invalid_steps(self):
        for bad in (0, 20, 50, 25, -15):
            with pytest.raises(ValueError):
                angle_grid(bad)

    def test_phase_shift_range_validation(self):
        with pytest.raises(ValueError):
            PhaseShift(-0.1, 0.0)
        with pytest.raises(ValueError):
            PhaseShift(0.0, 2 * PI)


class TestEnumerateDouble:
    def test_origin_only(self):
        assert enumerate_double(PhaseShift(0.0, 0.0)) == [PhaseShift(0.0, 0.0)]

    def test_quarter_corner(self):
        shifts = enumerate_double(PhaseShift(PI / 2, PI / 2))
        assert len(shifts) == 49

    def test_full_corner(self):
        assert len(enumerate_double(PhaseShift(PI, 23 * BASE_STEP))) == 312

    def test_off_grid_rejected(self):
        with pytest.raises(ValueError):
            enumerate_double(PhaseShift(0.1, 0.0))

    def test_all_weaker_or_equal(self):
        first = PhaseShift(5 * BASE_STEP, 7 * BASE_STEP)
        for second in enumerate_double(first):
            assert second.theta <= first.theta and second.phi <= first.phi

    def test_coarse_step(self):
        shifts = enumerate_double(PhaseShift(PI, PI), step_deg=30)
        assert len(shifts) == 7 * 7


class TestEnumerateSites:
    def test_single_gate(self):
        c = Circuit(1, 1, (h(0), measure(0, 0)))
        t = transpile(c, builtin_topology("line-2"))
        sites = enumerate_sites(t)
        assert len(sites) == 1
        assert sites[0].op_index == 0

    def test_two_qubit_gate_contributes_two(self):
        c = Circuit(2, 2, (cx(0, 1), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("line-2"))
        sites = enumerate_sites(t)
        assert len(sites) == 2
        assert {s.qubit for s in sites} == {0, 1}

    def test_bv3_hand_count(self):
        # 4 H + 1 Z + 3 final H = 8 one-qubit sites, 2 CX x 2 operands = 4
        sites = enumerate_sites(bv_transpiled())
        assert len(sites) == 12

    def test_injected_ops_not_sites(self):
        t = bv_transpiled()
        sites = enumerate_sites(t)
        faulty = build_faulty_circuit(t, FaultSpec(sites[0], PhaseShift(PI / 4, 0.0)))
        t2 = transpile(faulty, t.coupling, initial_layout=tuple(range(faulty.n_qubits)))
        assert len(enumerate_sites(t2)) == len(sites)


class TestBuildFaultyCircuit:
    def test_zero_shift_is_identity(self):
        t = bv_transpiled()
        for site in enumerate_sites(t):
            faulty = build_faulty_circuit(t, FaultSpec(site, PhaseShift(0.0, 0.0)))
            assert_dist_close(
                run_exact(faulty).outcomes, run_exact(t.circuit).outcomes, tol=1e-9
            )

    def test_injector_inserted_after_site(self):
        t = bv_transpiled()
        site = enumerate_sites(t)[3]
        faulty = build_faulty_circuit(t, FaultSpec(site, PhaseShift(PI / 3, PI / 6)))
        inj = faulty.ops[site.op_index + 1]
        assert inj.kind is GateKind.U and inj.injected
        assert inj.qubits == (site.wire,)
        assert inj.params[0] == pytest.approx(PI / 3)
        # everything else untouched
        assert faulty.ops[: site.op_index + 1] == t.circuit.ops[: site.op_index + 1]
        assert faulty.ops[site.op_index + 2 :] == t.circuit.ops[site.op_index + 1 :]

    def test_first_h_theta_quarter_leaks_to_neighbor_state(self):
        # shift after the first H on the rightmost data qubit moves
        # probability from "101" toward "100"
        t = bv_transpiled()
        site = next(s for s in enumerate_sites(t) if s.qubit == 0)
        faulty = build_faulty_circuit(t, FaultSpec(site, PhaseShift(PI / 4, 0.0)))
        dist = run_exact(faulty).outcomes
        assert dist["101"] < 1.0 - 1e-6
        wrong = {k: v for k, v in dist.items() if k != "101"}
        assert max(wrong, key=wrong.get) == "100"

    def test_full_theta_after_final_h_flips_gold_bit(self):
        t = bv_transpiled()
        # the final H on data qubit 0 is the last op-with-qubit-0 site
        site = [s for s in enumerate_sites(t) if s.qubit == 0][-1]
        faulty = build_faulty_circuit(t, FaultSpec(site, PhaseShift(PI, 0.0)))
        dist = run_exact(faulty).outcomes
        assert dist.get("101", 0.0) == pytest.approx(0.0, abs=1e-12)
        assert dist["100"] == pytest.approx(1.0, abs=1e-9)

    def test_double_injection_order_and_wires(self):
        t = bv_transpiled("jakarta")
        site = next(s for s in enumerate_sites(t) if s.qubit == 3)
        spec = FaultSpec(site, PhaseShift(PI, PI), 0, PhaseShift(PI / 2, PI / 2))
        faulty = build_faulty_circuit(t, spec)
        first, second = faulty.ops[site.op_index + 1], faulty.ops[site.op_index + 2]
        assert first.injected and second.injected
        assert first.qubits == (site.wire,)
        assert second.qubits == (t.wire_of(site.op_index, 0),)
        assert len(faulty.ops) == len(t.circuit.ops) + 2

    def test_non_neighbor_second_rejected(self):
        t = bv_transpiled("jakarta")
        site = next(s for s in enumerate_sites(t) if s.qubit == 0)
        # logical 1 is not adjacent to logical 0 under the dense layout
        spec = FaultSpec(site, PhaseShift(PI, PI), 1, PhaseShift(0.0, 0.0))
        with pytest.raises(ValueError):
            build_faulty_circuit(t, spec)

    def test_invalid_site_rejected(self):
        t = bv_transpiled()
        with pytest.raises(ValueError):
            build_faulty_circuit(t, FaultSpec(FaultSite(999, 0, 0), PhaseShift(0, 0)))
        measure_idx = next(
            i for i, op in enumerate(t.circuit.ops) if op.kind is GateKind.MEASURE
        )
        wire = t.circuit.ops[measure_idx].qubits[0]
        with pytest.raises(ValueError):
            build_faulty_circuit(
                t, FaultSpec(FaultSite(measure_idx, 0, wire), PhaseShift(0, 0))
            )


class TestFaultSpec:
    def test_magnitude_constraint(self):
        site = FaultSite(0, 0, 0)
        with pytest.raises(ValueError):
            FaultSpec(site, PhaseShift(PI / 2, PI / 2), 1, PhaseShift(PI, 0.0))
        with pytest.raises(ValueError):
            FaultSpec(site, PhaseShift(PI / 2, PI / 2), 1, PhaseShift(0.0, PI))

    def test_second_needs_both_fields(self):
        with pytest.raises(ValueError):
            FaultSpec(FaultSite(0, 0, 0), PhaseShift(0, 0), second_qubit=1)

    def test_same_qubit_rejected(self):
        with pytest.raises(ValueError):
            FaultSpec(FaultSite(0, 0, 0), PhaseShift(0, 0), 0, PhaseShift(0, 0))


class TestPlanCampaign:
    def test_single_mode_product_count(self):
        t = bv_transpiled()
        plan = plan_campaign(t, "single", 1024, NoiseModel.disabled(), 7)
        assert len(plan) == 12 * 312

    def test_double_slice_count(self):
        c = Circuit(2, 2, (cx(0, 1), measure(0, 0), measure(1, 1)))
        t = transpile(c, builtin_topology("line-2"))
        plan = plan_campaign(t, "double", 64, NoiseModel.disabled(), 7)
        corner = [
            s
            for s in plan.specs
            if s.site == enumerate_sites(t)[0]
            and s.shift == PhaseShift(PI, PI)
        ]
        assert len(corner) == 13 * 13

    def test_double_requires_neighbors(self):
        c = Circuit(1, 1, (h(0), measure(0, 0)))
        t = transpile(c, builtin_topology("line-2"))
        with pytest.raises(ValueError):
            plan_campaign(t, "double", 64, NoiseModel.disabled(), 7)

    def test_double_constraint_exhaustive(self):
        t = bv_transpiled("jakarta")
        plan = plan_campaign(t, "double", 64, NoiseModel.disabled(), 3, step_deg=90)
        assert len(plan) > 0
        for spec in plan.specs:
            assert spec.second_shift.theta <= spec.shift.theta
            assert spec.second_shift.phi <= spec.shift.phi

    def test_plan_deterministic_and_duplicate_free(self):
        t = bv_transpiled()
        a = plan_campaign(t, "single", 10, NoiseModel.disabled(), 1, step_deg=30)
        b = plan_campaign(t, "single", 10, NoiseModel.disabled(), 1, step_deg=30)
        assert a.specs == b.specs
        assert len(set(a.specs)) == len(a.specs)

    def test_spec_seeds_injective(self):
        plan = CampaignPlan("c", "single", (), 1, NoiseModel.disabled(), 123, 15)
        seeds = [plan.spec_seed(i) for i in range(5000)]
        assert len(set(seeds)) == len(seeds)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            plan_campaign(bv_transpiled(), "triple", 1, NoiseModel.disabled(), 0)
