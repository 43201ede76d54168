"""Exact statevector simulation and stochastic shot sampling.

Noisy execution uses the trajectory method: each shot evolves a pure
state, and with probability p1 (p2 per operand for two-qubit gates) a
uniformly chosen Pauli X/Y/Z is applied after a gate. Readout errors
flip each measured bit independently. Memory stays O(2^n) per shot;
shots are simulated as one batched array.

All randomness for a call comes from a counter-based Philox stream
keyed by the seed; every draw is a (shots,)-shaped block whose row i
belongs to shot i, so a shot's outcome depends only on (seed, shot
index) and the circuit. Identical inputs give identical counts no
matter how calling code schedules the work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GateKind, GateOp, ResourceLimitError, UNITARY_KINDS

MAX_QUBITS = 20
_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q = {
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
_PAULIS = (_FIXED_1Q[GateKind.X], _FIXED_1Q[GateKind.Y], _FIXED_1Q[GateKind.Z])


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """General single-qubit unitary.

    [[cos(t/2),            -e^{i*lam} sin(t/2)],
     [e^{i*phi} sin(t/2),  e^{i*(phi+lam)} cos(t/2)]]
    """
    c, sn = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * sn],
            [np.exp(1j * phi) * sn, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def rz_matrix(angle: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex
    )


def gate_matrix(op: GateOp) -> np.ndarray:
    if op.kind in _FIXED_1Q:
        return _FIXED_1Q[op.kind]
    if op.kind is GateKind.RZ:
        return rz_matrix(op.params[0])
    if op.kind is GateKind.U:
        return u_matrix(*op.params)
    if op.kind is GateKind.CX:
        return _CX
    if op.kind is GateKind.SWAP:
        return _SWAP
    raise ValueError(f"{op.kind.value} has no unitary matrix")


def _apply_1q(amps: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    hi, lo = 1 << (n - 1 - q), 1 << q
    shaped = amps.reshape(-1, hi, 2, lo)
    out = np.einsum("ab,ihbl->ihal", mat, shaped)
    return out.reshape(amps.shape)


def _apply_2q(amps: np.ndarray, mat: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    # mat row/column index packs (bit of qa, bit of qb); reorder if qa < qb
    # so the high axis always carries the first matrix index.
    if qa < qb:
        mat = mat.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        qa, qb = qb, qa
    hi = 1 << (n - 1 - qa)
    mid = 1 << (qa - 1 - qb)
    lo = 1 << qb
    shaped = amps.reshape(-1, hi, 2, mid, 2, lo)
    m = mat.reshape(2, 2, 2, 2)
    out = np.einsum("abcd,ihcmdl->ihambl", m, shaped)
    return out.reshape(amps.shape)


def _apply_op(amps: np.ndarray, op: GateOp, n: int) -> np.ndarray:
    if len(op.qubits) == 1:
        return _apply_1q(amps, gate_matrix(op), op.qubits[0], n)
    return _apply_2q(amps, gate_matrix(op), op.qubits[0], op.qubits[1], n)


@dataclass(frozen=True)
class Statevector:
    """Normalized amplitudes over 2^n_qubits basis states, qubit 0 least significant."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude length must be 2**n_qubits")

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    def probabilities(self) -> np.ndarray:
        return self.amplitudes.real**2 + self.amplitudes.imag**2


def apply_gate(state: Statevector, op: GateOp) -> Statevector:
    """Apply a unitary gate; MEASURE and BARRIER are rejected."""
    if op.kind not in UNITARY_KINDS:
        raise ValueError(f"{op.kind.value} is not a unitary gate")
    return Statevector(state.n_qubits, _apply_op(state.amplitudes, op, state.n_qubits))


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing-style stochastic Pauli noise plus readout bit flips.

    p1/p2 are the per-operand probabilities of a Pauli event after a
    single-/two-qubit gate. enabled=False is bit-exact noiseless
    execution regardless of the probability fields.
    """

    p1: float = 0.0
    p2: float = 0.0
    readout_flip: float = 0.0
    enabled: bool = True

    def __post_init__(self):
        for name in ("p1", "p2", "readout_flip"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    @classmethod
    def disabled(cls) -> "NoiseModel":
        return cls(enabled=False)

    def effective(self) -> tuple[float, float, float]:
        if not self.enabled:
            return 0.0, 0.0, 0.0
        return self.p1, self.p2, self.readout_flip


@dataclass(frozen=True)
class Distribution:
    """Outcome map: probabilities when shots is None, else observed counts."""

    outcomes: dict[str, float]
    shots: int | None = None

    def __post_init__(self):
        if self.shots is None:
            total = sum(self.outcomes.values())
            if self.outcomes and abs(total - 1.0) > 1e-9:
                raise ValueError(f"exact probabilities sum to {total}, expected 1")
        else:
            total = sum(self.outcomes.values())
            if total != self.shots:
                raise ValueError(f"counts sum to {total}, expected shots={self.shots}")

    def frequencies(self) -> dict[str, float]:
        if self.shots is None:
            return dict(self.outcomes)
        return {k: v / self.shots for k, v in self.outcomes.items()}


def _compress(circuit: Circuit) -> tuple[Circuit, int]:
    """Drop wires no op touches (they stay |0> and factor out)."""
    used = sorted({q for op in circuit.ops for q in op.qubits})
    if not used:
        used = [0]
    if len(used) == circuit.n_qubits:
        return circuit, circuit.n_qubits
    remap = {q: i for i, q in enumerate(used)}
    ops = tuple(
        GateOp(op.kind, tuple(remap[q] for q in op.qubits), op.params, op.clbit, op.injected)
        for op in circuit.ops
    )
    return Circuit(len(used), circuit.n_clbits, ops, circuit.name), len(used)


def _outcome_indices(circuit: Circuit, n: int) -> tuple[np.ndarray, int]:
    """Map basis-state index -> measured classical word (later measures win)."""
    k = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for q, c in circuit.measure_pairs:
        bit = (k >> q) & 1
        out = (out & ~(1 << c)) | (bit << c)
    return out, circuit.n_clbits


def _format_outcomes(values: np.ndarray, weights: np.ndarray, n_clbits: int, integral: bool):
    if n_clbits == 0:
        total = weights.sum()
        return {"": int(total) if integral else float(total)}
    agg = np.bincount(values, weights=weights, minlength=1 << n_clbits)
    if integral:
        return {format(i, f"0{n_clbits}b"): int(v) for i, v in enumerate(agg) if v > 0}
    return {format(i, f"0{n_clbits}b"): float(v) for i, v in enumerate(agg) if v > 0.0}


def run_exact(circuit: Circuit) -> Distribution:
    """Born-rule distribution over the measured classical bits.

    Unmeasured qubits are traced out by marginalization; unused classical
    bits read 0.
    """
    circuit, n = _compress(circuit)
    if n > MAX_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds simulator cap of {MAX_QUBITS}")
    amps = Statevector.zero(n).amplitudes
    for op in circuit.ops:
        if op.kind in (GateKind.MEASURE, GateKind.BARRIER):
            continue
        amps = _apply_op(amps, op, n)
    probs = amps.real**2 + amps.imag**2
    out_idx, n_clbits = _outcome_indices(circuit, n)
    return Distribution(_format_outcomes(out_idx, probs, n_clbits, integral=False))


def _pauli_kicks(amps, q, n, mask, choice):
    for idx, pauli in enumerate(_PAULIS):
        rows = mask & (choice == idx)
        if rows.any():
            amps[rows] = _apply_1q(amps[rows], pauli, q, n)
    return amps


def run_shots(
    circuit: Circuit, shots: int, noise: NoiseModel, seed: int
) -> Distribution:
    """Sample `shots` executions under the trajectory noise model."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    circuit, n = _compress(circuit)
    if n > MAX_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds simulator cap of {MAX_QUBITS}")
    p1, p2, readout = noise.effective()
    rng = np.random.Generator(np.random.Philox(key=seed % (1 << 64)))
    dim = 1 << n

    if p1 == 0.0 and p2 == 0.0:
        # Every trajectory is identical: evolve once, sample per shot.
        amps = Statevector.zero(n).amplitudes
        for op in circuit.ops:
            if op.kind in (GateKind.MEASURE, GateKind.BARRIER):
                continue
            amps = _apply_op(amps, op, n)
        probs = amps.real**2 + amps.imag**2
        cum = np.cumsum(probs)
        draws = rng.random(shots) * cum[-1]
        basis = np.minimum(np.searchsorted(cum, draws, side="right"), dim - 1)
    else:
        amps = np.zeros((shots, dim), dtype=complex)
        amps[:, 0] = 1.0
        for op in circuit.ops:
            if op.kind in (GateKind.MEASURE, GateKind.BARRIER):
                continue
            amps = _apply_op(amps, op, n)
            p = p1 if len(op.qubits) == 1 else p2
            if p > 0.0:
                for q in op.qubits:
                    events = rng.random(shots) < p
                    choice = rng.integers(0, 3, size=shots)
                    if events.any():
                        amps = _pauli_kicks(amps, q, n, events, choice)
        probs = amps.real**2 + amps.imag**2
        cum = np.cumsum(probs, axis=1)
        draws = rng.random(shots) * cum[:, -1]
        basis = np.minimum((cum < draws[:, None]).sum(axis=1), dim - 1)

    out_idx, n_clbits = _outcome_indices(circuit, n)
    outcomes = out_idx[basis]
    if readout > 0.0:
        for _q, c in circuit.measure_pairs:
            flips = rng.random(shots) < readout
            outcomes = outcomes ^ (flips.astype(np.int64) << c)
    weights = np.ones(shots, dtype=np.int64)
    return Distribution(
        _format_outcomes(outcomes, weights, n_clbits, integral=True), shots=shots
    )
