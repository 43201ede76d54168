"""Gate-level circuit representation.

Circuits are flat, immutable op lists over indexed qubits and classical
bits. Measurement outcomes are rendered as bit strings with the highest
classical index leftmost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TWO_PI = 2.0 * math.pi

# Snap window for angle normalization at the theta=pi / phi=2*pi seams;
# wide enough to absorb 12-significant-digit serialization drift.
_SEAM_EPS = 1e-9


class ResourceLimitError(RuntimeError):
    """Requested work exceeds a configured size cap (circuit width, device size)."""


class GateKind(Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    T = "t"
    RZ = "rz"
    SX = "sx"
    U = "u"
    CX = "cx"
    SWAP = "swap"
    BARRIER = "barrier"
    MEASURE = "measure"


ARITY = {
    GateKind.CX: 2,
    GateKind.SWAP: 2,
}
N_PARAMS = {
    GateKind.RZ: 1,
    GateKind.U: 3,
}

UNITARY_KINDS = frozenset(
    k for k in GateKind if k not in (GateKind.BARRIER, GateKind.MEASURE)
)


def _wrap_2pi(angle: float) -> float:
    angle = math.fmod(angle, TWO_PI)
    if angle < 0.0:
        angle += TWO_PI
    if TWO_PI - angle < _SEAM_EPS:
        angle = 0.0
    return angle


def canonicalize_u(theta: float, phi: float, lam: float) -> tuple[float, float, float]:
    """Normalize U-gate angles to theta in [0, pi], phi and lambda in [0, 2*pi).

    Uses U(t, p, l) = -U(2*pi - t, p + pi, l + pi) to fold theta above pi
    back into range; the dropped factor is a global phase.
    """
    for a in (theta, phi, lam):
        if not math.isfinite(a):
            raise ValueError(f"U angles must be finite, got {(theta, phi, lam)}")
    theta = math.fmod(theta, TWO_PI)
    if theta < 0.0:
        theta += TWO_PI
    if TWO_PI - theta < _SEAM_EPS:
        theta = 0.0
    if theta > math.pi:
        if theta - math.pi < _SEAM_EPS:
            theta = math.pi
        else:
            theta = TWO_PI - theta
            phi += math.pi
            lam += math.pi
    return theta, _wrap_2pi(phi), _wrap_2pi(lam)


@dataclass(frozen=True)
class GateOp:
    """One gate application. `injected` marks U gates added as fault injectors."""

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbit: int | None = None
    injected: bool = False

    def __post_init__(self):
        arity = ARITY.get(self.kind, 1)
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind.value} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind.value} operands must be distinct, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        nparams = N_PARAMS.get(self.kind, 0)
        if len(self.params) != nparams:
            raise ValueError(f"{self.kind.value} takes {nparams} parameter(s), got {self.params}")
        if any(not math.isfinite(p) for p in self.params):
            raise ValueError(f"gate angles must be finite, got {self.params}")
        if self.kind is GateKind.U:
            object.__setattr__(self, "params", canonicalize_u(*self.params))
        if self.kind is GateKind.MEASURE:
            if self.clbit is None or self.clbit < 0:
                raise ValueError("measure requires a classical bit index")
        elif self.clbit is not None:
            raise ValueError(f"{self.kind.value} does not take a classical bit")
        if self.injected and self.kind is not GateKind.U:
            raise ValueError("only U gates can be marked injected")


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list over `n_qubits` wires and `n_clbits` classical bits."""

    n_qubits: int
    n_clbits: int
    ops: tuple[GateOp, ...]
    name: str = "circuit"

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        if self.n_clbits < 0:
            raise ValueError("negative classical register size")
        object.__setattr__(self, "ops", tuple(self.ops))
        measured: set[int] = set()
        for op in self.ops:
            for q in op.qubits:
                if q >= self.n_qubits:
                    raise ValueError(f"qubit {q} out of range for width {self.n_qubits}")
            if op.kind is GateKind.MEASURE:
                if op.clbit >= self.n_clbits:
                    raise ValueError(f"clbit {op.clbit} out of range for {self.n_clbits}")
                measured.add(op.qubits[0])
            elif measured.intersection(op.qubits):
                raise ValueError(
                    f"{op.kind.value} on {op.qubits} follows measurement of the same qubit"
                )

    @property
    def measure_pairs(self) -> tuple[tuple[int, int], ...]:
        """(qubit, clbit) pairs in program order."""
        return tuple(
            (op.qubits[0], op.clbit) for op in self.ops if op.kind is GateKind.MEASURE
        )

    def with_ops(self, ops, name: str | None = None) -> "Circuit":
        return Circuit(self.n_qubits, self.n_clbits, tuple(ops), name or self.name)


# Op constructors. Generators and tests build circuits from these.

def h(q: int) -> GateOp:
    return GateOp(GateKind.H, (q,))


def x(q: int) -> GateOp:
    return GateOp(GateKind.X, (q,))


def y(q: int) -> GateOp:
    return GateOp(GateKind.Y, (q,))


def z(q: int) -> GateOp:
    return GateOp(GateKind.Z, (q,))


def s(q: int) -> GateOp:
    return GateOp(GateKind.S, (q,))


def t(q: int) -> GateOp:
    return GateOp(GateKind.T, (q,))


def sx(q: int) -> GateOp:
    return GateOp(GateKind.SX, (q,))


def rz(angle: float, q: int) -> GateOp:
    return GateOp(GateKind.RZ, (q,), (angle,))


def u(theta: float, phi: float, lam: float, q: int, injected: bool = False) -> GateOp:
    return GateOp(GateKind.U, (q,), (theta, phi, lam), injected=injected)


def cx(control: int, target: int) -> GateOp:
    return GateOp(GateKind.CX, (control, target))


def swap(a: int, b: int) -> GateOp:
    return GateOp(GateKind.SWAP, (a, b))


def barrier(q: int) -> GateOp:
    return GateOp(GateKind.BARRIER, (q,))


def measure(q: int, c: int) -> GateOp:
    return GateOp(GateKind.MEASURE, (q,), clbit=c)
