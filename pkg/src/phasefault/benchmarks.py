"""Benchmark circuit generators.

All three families produce circuits whose noiseless output is a single
basis state, so campaign analysis has a well-defined correct answer.
Bit strings follow the display convention of `circuit`: highest index
leftmost, so the measured string reads exactly like the constructor
argument.
"""
from __future__ import annotations

import math

from .circuit import Circuit, GateOp, cx, h, measure, rz, swap, x, z

TWO_PI = 2.0 * math.pi


def _check_bits(bits: str, length: int, what: str) -> None:
    if len(bits) != length:
        raise ValueError(f"{what} must have length {length}, got {bits!r}")
    if any(c not in "01" for c in bits):
        raise ValueError(f"{what} must be a bit string, got {bits!r}")


def make_bernstein_vazirani(n_data: int, hidden_string: str) -> Circuit:
    """Circuit that recovers `hidden_string` from a dot-product oracle.

    Uses n_data data qubits plus one ancilla prepared in |-> via H then Z.
    Data qubit i carries bit hidden_string[n_data - 1 - i], so the measured
    string equals `hidden_string`.
    """
    if n_data < 1:
        raise ValueError("n_data must be >= 1")
    _check_bits(hidden_string, n_data, "hidden_string")
    anc = n_data
    ops: list[GateOp] = [h(q) for q in range(n_data + 1)]
    ops.append(z(anc))
    for q in range(n_data):
        if hidden_string[n_data - 1 - q] == "1":
            ops.append(cx(q, anc))
    ops.extend(h(q) for q in range(n_data))
    ops.extend(measure(q, q) for q in range(n_data))
    return Circuit(n_data + 1, n_data, tuple(ops), name=f"bv-{hidden_string}")


def make_deutsch_jozsa(n_data: int, oracle: str, mask: str | None = None) -> Circuit:
    """Circuit deciding whether an oracle is constant or balanced.

    `oracle` is one of "constant-zero", "constant-one", or "balanced";
    balanced oracles compute the parity mask.x and require a nonzero
    `mask`. Constant oracles measure all zeros; the balanced one
    measures `mask`.
    """
    if n_data < 1:
        raise ValueError("n_data must be >= 1")
    anc = n_data
    ops: list[GateOp] = [h(q) for q in range(n_data + 1)]
    ops.append(z(anc))
    if oracle == "constant-zero":
        pass
    elif oracle == "constant-one":
        ops.append(x(anc))
    elif oracle == "balanced":
        if mask is None:
            raise ValueError("balanced oracle requires a mask")
        _check_bits(mask, n_data, "mask")
        if "1" not in mask:
            raise ValueError("balanced mask must be nonzero")
        for q in range(n_data):
            if mask[n_data - 1 - q] == "1":
                ops.append(cx(q, anc))
    else:
        raise ValueError(f"unknown oracle {oracle!r}")
    ops.extend(h(q) for q in range(n_data))
    ops.extend(measure(q, q) for q in range(n_data))
    label = mask if oracle == "balanced" else oracle
    return Circuit(n_data + 1, n_data, tuple(ops), name=f"dj-{label}")


def _cp_ops(angle: float, control: int, target: int) -> list[GateOp]:
    # Controlled-phase over {RZ, CX}, exact up to a global phase.
    half = angle / 2.0
    return [
        cx(control, target),
        rz(-half, target),
        cx(control, target),
        rz(half, target),
        rz(half, control),
    ]


def make_qft(n: int, encoded_value: int) -> Circuit:
    """Fourier-basis preparation of `encoded_value` followed by the inverse QFT.

    The preparation is an H on every qubit and a phase ladder; the inverse
    transform uses H, controlled-phase (decomposed to CX+RZ), and SWAP.
    Noiseless output is the n-bit binary encoding of `encoded_value`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= encoded_value < 2**n:
        raise ValueError(f"encoded_value {encoded_value} out of range for {n} qubits")
    ops: list[GateOp] = []
    for q in range(n):
        ops.append(h(q))
        rem = encoded_value % (1 << (n - q))
        if rem:
            ops.append(rz(TWO_PI * rem / (1 << (n - q)), q))
    # Forward QFT as an abstract op list, then emit its inverse.
    forward: list[tuple] = []
    for j in range(n - 1, -1, -1):
        forward.append(("h", j))
        for m in range(j - 1, -1, -1):
            forward.append(("cp", math.pi / (1 << (j - m)), m, j))
    for i in range(n // 2):
        forward.append(("swap", i, n - 1 - i))
    for item in reversed(forward):
        if item[0] == "h":
            ops.append(h(item[1]))
        elif item[0] == "swap":
            ops.append(swap(item[1], item[2]))
        else:
            ops.extend(_cp_ops(-item[1], item[2], item[3]))
    ops.extend(measure(q, q) for q in range(n))
    return Circuit(n, n, tuple(ops), name=f"qft-{n}-{encoded_value}")
