"""Fault-site and phase-shift enumeration, and faulty-circuit construction.

A fault is a U(theta, phi, 0) injector inserted right after a gate on
one of its operand wires. The sweep covers theta in [0, pi] and phi in
[0, 2*pi) on a 15-degree lattice: 13 x 24 = 312 shifts per site.
Double faults add a second, weaker injector (theta1 <= theta0 and
phi1 <= phi0) on a qubit whose physical home neighbors the first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, GateKind, u
from .simulator import NoiseModel
from .transpiler import TranspiledCircuit, neighbor_pairs

BASE_STEP = math.pi / 12  # 15 degrees
_GRID_TOL = 1e-9
# Odd multiplier keeps index -> seed injective mod 2**64.
_SEED_STRIDE = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class PhaseShift:
    """Injector angles: theta in [0, pi], phi in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta {self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi {self.phi} outside [0, 2*pi)")


def _check_step(step_deg: int) -> int:
    """A valid sweep step is a multiple of 15 degrees that divides 180."""
    if step_deg % 15 != 0 or step_deg <= 0 or 180 % step_deg != 0:
        raise ValueError(f"grid step must be a multiple of 15 dividing 180, got {step_deg}")
    return step_deg // 15


def grid_index(value: float, name: str = "angle") -> int:
    """Index of `value` on the 15-degree lattice; rejects off-grid values."""
    k = round(value / BASE_STEP)
    if abs(value - k * BASE_STEP) > _GRID_TOL:
        raise ValueError(f"{name} {value} is not on the 15-degree grid")
    return k


def angle_grid(step_deg: int = 15) -> list[PhaseShift]:
    """Theta-major sweep grid at the given step, endpoints [0,pi] x [0,2*pi)."""
    m = _check_step(step_deg)
    thetas = [k * m * BASE_STEP for k in range(12 // m + 1)]
    phis = [j * m * BASE_STEP for j in range(24 // m)]
    return [PhaseShift(t, p) for t in thetas for p in phis]


def enumerate_angles() -> list[PhaseShift]:
    """The full 13 x 24 = 312 configuration sweep."""
    return angle_grid(15)


def enumerate_double(first: PhaseShift, step_deg: int = 15) -> list[PhaseShift]:
    """All grid shifts with theta <= first.theta and phi <= first.phi."""
    m = _check_step(step_deg)
    k0 = grid_index(first.theta, "theta")
    j0 = grid_index(first.phi, "phi")
    thetas = [i * m * BASE_STEP for i in range(k0 // m + 1)]
    phis = [j * m * BASE_STEP for j in range(j0 // m + 1)]
    return [PhaseShift(t, p) for t in thetas for p in phis]


@dataclass(frozen=True)
class FaultSite:
    """Injection point: after transpiled op `op_index` on operand wire `wire`.

    `qubit` is the logical qubit living on that wire at that point, or
    -1 when a routing gate touches a wire holding no logical qubit.
    """

    op_index: int
    qubit: int
    wire: int


def enumerate_sites(t: TranspiledCircuit) -> list[FaultSite]:
    """One site per (gate, operand) pair; measures, barriers, and
    injectors contribute none."""
    sites: list[FaultSite] = []
    for i, op in enumerate(t.circuit.ops):
        if op.kind in (GateKind.MEASURE, GateKind.BARRIER) or op.injected:
            continue
        labels = t.logical_operands(i)
        for label, wire in zip(labels, op.qubits):
            sites.append(FaultSite(i, label if label is not None else -1, wire))
    return sites


@dataclass(frozen=True)
class FaultSpec:
    """One or two injections: the optional second is weaker in both angles."""

    site: FaultSite
    shift: PhaseShift
    second_qubit: int | None = None
    second_shift: PhaseShift | None = None

    def __post_init__(self):
        if (self.second_qubit is None) != (self.second_shift is None):
            raise ValueError("second fault needs both a qubit and a shift")
        if self.second_qubit is not None:
            if self.second_qubit == self.site.qubit:
                raise ValueError("second fault must hit a different qubit")
            if self.second_shift.theta > self.shift.theta + _GRID_TOL:
                raise ValueError("second fault theta exceeds the first")
            if self.second_shift.phi > self.shift.phi + _GRID_TOL:
                raise ValueError("second fault phi exceeds the first")

    @property
    def is_double(self) -> bool:
        return self.second_qubit is not None


def _validate_site(t: TranspiledCircuit, site: FaultSite) -> None:
    if not 0 <= site.op_index < len(t.circuit.ops):
        raise ValueError(f"site op_index {site.op_index} out of range")
    op = t.circuit.ops[site.op_index]
    if op.kind in (GateKind.MEASURE, GateKind.BARRIER) or op.injected:
        raise ValueError(f"op {site.op_index} ({op.kind.value}) is not injectable")
    if site.wire not in op.qubits:
        raise ValueError(f"wire {site.wire} is not an operand of op {site.op_index}")
    pos = op.qubits.index(site.wire)
    label = t.logical_operands(site.op_index)[pos]
    expected = label if label is not None else -1
    if site.qubit != expected:
        raise ValueError(
            f"site names logical qubit {site.qubit}, wire holds {expected}"
        )


def build_faulty_circuit(t: TranspiledCircuit, spec: FaultSpec) -> Circuit:
    """Copy of the transpiled circuit with the injector(s) inserted.

    The first injector lands immediately after the site op on the site
    wire; a second one lands immediately after it on the neighbor
    qubit's wire at that point.
    """
    _validate_site(t, spec.site)
    inserted = [u(spec.shift.theta, spec.shift.phi, 0.0, spec.site.wire, injected=True)]
    if spec.is_double:
        pairs = neighbor_pairs(t)
        key = (min(spec.site.qubit, spec.second_qubit), max(spec.site.qubit, spec.second_qubit))
        if spec.site.qubit < 0 or key not in pairs:
            raise ValueError(
                f"qubits {spec.site.qubit} and {spec.second_qubit} are not neighbors"
            )
        wire2 = t.wire_of(spec.site.op_index, spec.second_qubit)
        inserted.append(
            u(spec.second_shift.theta, spec.second_shift.phi, 0.0, wire2, injected=True)
        )
    ops = t.circuit.ops
    cut = spec.site.op_index + 1
    return t.circuit.with_ops(ops[:cut] + tuple(inserted) + ops[cut:])


@dataclass(frozen=True)
class CampaignPlan:
    """Immutable list of independent fault specs with derived per-spec seeds."""

    circuit_id: str
    mode: str
    specs: tuple[FaultSpec, ...]
    shots: int
    noise: NoiseModel
    base_seed: int
    grid_step_deg: int

    def spec_seed(self, index: int) -> int:
        return (self.base_seed + _SEED_STRIDE * (index + 1)) % (1 << 64)

    def __len__(self) -> int:
        return len(self.specs)


def plan_campaign(
    t: TranspiledCircuit,
    mode: str,
    shots: int,
    noise: NoiseModel,
    base_seed: int,
    step_deg: int = 15,
) -> CampaignPlan:
    """Enumerate the full sweep: sites x shifts, plus neighbors x weaker
    shifts in double mode."""
    if mode not in ("single", "double"):
        raise ValueError(f"mode must be 'single' or 'double', got {mode!r}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    sites = enumerate_sites(t)
    shifts = angle_grid(step_deg)
    specs: list[FaultSpec] = []
    if mode == "single":
        for site in sites:
            for shift in shifts:
                specs.append(FaultSpec(site, shift))
    else:
        pairs = neighbor_pairs(t)
        if not pairs:
            raise ValueError("double mode needs at least one physically adjacent qubit pair")
        neighbors: dict[int, list[int]] = {}
        for a, b in sorted(pairs):
            neighbors.setdefault(a, []).append(b)
            neighbors.setdefault(b, []).append(a)
        for site in sites:
            for shift in shifts:
                for q2 in sorted(neighbors.get(site.qubit, ())):
                    for shift2 in enumerate_double(shift, step_deg):
                        specs.append(FaultSpec(site, shift, q2, shift2))
    return CampaignPlan(
        circuit_id=t.circuit.name,
        mode=mode,
        specs=tuple(specs),
        shots=shots,
        noise=noise,
        base_seed=base_seed,
        grid_step_deg=step_deg,
    )
