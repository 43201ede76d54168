"""Phase-shift fault injection and vulnerability analysis for quantum circuits.

The toolkit sweeps parametrized U-gate injectors over every position of
a transpiled circuit, executes the faulty circuits exactly or under a
stochastic noise model, and scores output corruption with the Quantum
Vulnerability Factor (QVF).
"""
from .analysis import (
    GoldResult,
    Heatmap,
    Histogram,
    QvfRecord,
    aggregate_double_detail,
    aggregate_heatmap,
    classify,
    compute_qvf,
    delta_qvf,
    gold_result,
    histogram,
    summarize,
)
from .benchmarks import make_bernstein_vazirani, make_deutsch_jozsa, make_qft
from .campaign import (
    CampaignConfig,
    CampaignResult,
    ConfigError,
    GuardrailError,
    InputError,
    execute_plan,
    load_config,
    read_records,
    run_campaign,
    write_records,
)
from .circuit import Circuit, GateKind, GateOp, ResourceLimitError
from .injector import (
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
from .qasm import QasmError, emit_qasm, parse_qasm
from .simulator import (
    Distribution,
    NoiseModel,
    Statevector,
    apply_gate,
    run_exact,
    run_shots,
)
from .svgmap import render_heatmap
from .transpiler import (
    CouplingMap,
    Layout,
    TranspiledCircuit,
    builtin_topology,
    load_topology,
    neighbor_pairs,
    transpile,
)

__version__ = "0.1.0"

__all__ = [
    "CampaignConfig",
    "CampaignPlan",
    "CampaignResult",
    "Circuit",
    "ConfigError",
    "CouplingMap",
    "Distribution",
    "FaultSite",
    "FaultSpec",
    "GateKind",
    "GateOp",
    "GoldResult",
    "GuardrailError",
    "Heatmap",
    "Histogram",
    "InputError",
    "Layout",
    "NoiseModel",
    "PhaseShift",
    "QasmError",
    "QvfRecord",
    "ResourceLimitError",
    "Statevector",
    "TranspiledCircuit",
    "aggregate_double_detail",
    "aggregate_heatmap",
    "angle_grid",
    "apply_gate",
    "build_faulty_circuit",
    "builtin_topology",
    "classify",
    "compute_qvf",
    "delta_qvf",
    "emit_qasm",
    "enumerate_angles",
    "enumerate_double",
    "enumerate_sites",
    "execute_plan",
    "gold_result",
    "histogram",
    "load_config",
    "load_topology",
    "make_bernstein_vazirani",
    "make_deutsch_jozsa",
    "make_qft",
    "neighbor_pairs",
    "parse_qasm",
    "plan_campaign",
    "read_records",
    "render_heatmap",
    "run_campaign",
    "run_exact",
    "run_shots",
    "summarize",
    "transpile",
    "write_records",
]
