"""Random circuit generation for oracle cross-checks."""
from __future__ import annotations

import numpy as np

from phasefault.circuit import Circuit, cx, h, measure, rz, s, swap, sx, t, u, x, y, z

_ONE_QUBIT = [h, x, y, z, s, t, sx]


def random_circuit(rng: np.random.Generator, n_qubits: int, n_gates: int) -> Circuit:
    ops = []
    for _ in range(n_gates):
        roll = rng.integers(0, 10)
        if roll < 5:
            q = int(rng.integers(0, n_qubits))
            ops.append(_ONE_QUBIT[rng.integers(0, len(_ONE_QUBIT))](q))
        elif roll < 7:
            q = int(rng.integers(0, n_qubits))
            if roll == 5:
                ops.append(rz(float(rng.uniform(-2 * np.pi, 2 * np.pi)), q))
            else:
                ops.append(
                    u(
                        float(rng.uniform(0, 2 * np.pi)),
                        float(rng.uniform(0, 2 * np.pi)),
                        float(rng.uniform(0, 2 * np.pi)),
                        q,
                    )
                )
        elif n_qubits >= 2:
            a, b = rng.choice(n_qubits, size=2, replace=False)
            ops.append(cx(int(a), int(b)) if roll < 9 else swap(int(a), int(b)))
    ops.extend(measure(q, q) for q in range(n_qubits))
    return Circuit(n_qubits, n_qubits, tuple(ops), name="random")
