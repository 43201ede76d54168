"""Vulnerability metrics and campaign aggregation.

The QVF maps the Michelson contrast between the correct state's
probability P(A) and the strongest wrong state's P(B) onto [0, 1]:

    contrast = (P(A) - P(B)) / (P(A) + P(B))
    qvf      = 1 - (contrast + 1) / 2

0 means the fault is harmless, 1 means a wrong state dominates, and
values near 0.5 mean the output is too ambiguous to trust.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .injector import BASE_STEP, PhaseShift, angle_grid, grid_index
from .simulator import Distribution

GREEN_BELOW = 0.45
RED_ABOVE = 0.55


@dataclass(frozen=True)
class GoldResult:
    """Correct output states: the maximal-probability outcomes of the
    fault-free exact distribution (ties within 1e-9 all count)."""

    correct_states: frozenset[str]
    source: Distribution


def gold_result(exact: Distribution) -> GoldResult:
    if not exact.outcomes:
        raise ValueError("cannot derive a gold result from an empty distribution")
    top = max(exact.outcomes.values())
    states = frozenset(k for k, v in exact.outcomes.items() if v >= top - 1e-9)
    return GoldResult(states, exact)


def compute_qvf(gold: GoldResult, observed: Distribution) -> tuple[float, float, float]:
    """Returns (qvf, p_correct, p_wrong_max) for an observed distribution."""
    freqs = observed.frequencies()
    if not freqs:
        raise ValueError("observed distribution is empty")
    p_correct = sum(v for k, v in freqs.items() if k in gold.correct_states)
    wrong = [v for k, v in freqs.items() if k not in gold.correct_states]
    p_wrong_max = max(wrong, default=0.0)
    if p_correct == 0.0 and p_wrong_max == 0.0:
        return 0.5, 0.0, 0.0
    contrast = (p_correct - p_wrong_max) / (p_correct + p_wrong_max)
    return 1.0 - (contrast + 1.0) / 2.0, p_correct, p_wrong_max


def classify(qvf: float) -> str:
    """green below 0.45, red above 0.55, white (dubious) between,
    boundaries included in white."""
    if not 0.0 <= qvf <= 1.0:
        raise ValueError(f"qvf {qvf} outside [0, 1]")
    if qvf < GREEN_BELOW:
        return "green"
    if qvf > RED_ABOVE:
        return "red"
    return "white"


@dataclass(frozen=True)
class QvfRecord:
    """One campaign data point; columns mirror the records CSV."""

    circuit: str
    n_qubits: int
    mode: str
    site_index: int
    logical_gate_index: int
    qubit: int
    theta0: float
    phi0: float
    qubit2: int | None
    theta1: float | None
    phi1: float | None
    qvf: float
    p_correct: float
    p_wrong_max: float
    shots: int
    seed: int


@dataclass(frozen=True)
class Heatmap:
    """Mean QVF per (theta, phi) cell; NaN marks cells with no samples."""

    thetas: tuple[float, ...]
    phis: tuple[float, ...]
    mean: np.ndarray
    count: np.ndarray

    def cell(self, theta: float, phi: float) -> float:
        ti = self.thetas.index(theta)
        pi_ = self.phis.index(phi)
        return float(self.mean[ti, pi_])

    @property
    def step_deg(self) -> int:
        return round((self.thetas[1] - self.thetas[0]) / BASE_STEP) * 15


def _axes(step_deg: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    grid = angle_grid(step_deg)
    thetas = tuple(sorted({s.theta for s in grid}))
    phis = tuple(sorted({s.phi for s in grid}))
    return thetas, phis


def _cell_index(value: float, step_deg: int, name: str) -> int:
    k = grid_index(value, name)
    m = step_deg // 15
    if k % m != 0:
        raise ValueError(f"{name} {value} not on the {step_deg}-degree grid")
    return k // m


def _accumulate(selected, keys, step_deg: int) -> Heatmap:
    thetas, phis = _axes(step_deg)
    sums = np.zeros((len(thetas), len(phis)))
    count = np.zeros((len(thetas), len(phis)), dtype=np.int64)
    for record, (theta, phi) in zip(selected, keys):
        ti = _cell_index(theta, step_deg, "theta")
        pi_ = _cell_index(phi, step_deg, "phi")
        sums[ti, pi_] += record.qvf
        count[ti, pi_] += 1
    with np.errstate(invalid="ignore"):
        mean = np.where(count > 0, sums / np.maximum(count, 1), np.nan)
    return Heatmap(thetas, phis, mean, count)


def aggregate_heatmap(
    records: list[QvfRecord], qubit: int | None = None, step_deg: int = 15
) -> Heatmap:
    """Mean QVF per first-fault (theta0, phi0) cell, optionally for one
    logical qubit's injections only."""
    selected = [r for r in records if qubit is None or r.qubit == qubit]
    keys = [(r.theta0, r.phi0) for r in selected]
    return _accumulate(selected, keys, step_deg)


def aggregate_double_detail(
    records: list[QvfRecord], first: PhaseShift, step_deg: int = 15
) -> Heatmap:
    """Mean QVF per second-fault (theta1, phi1) cell, for double records
    whose first fault equals `first`."""
    k0, j0 = grid_index(first.theta), grid_index(first.phi)
    selected = [
        r
        for r in records
        if r.theta1 is not None
        and grid_index(r.theta0) == k0
        and grid_index(r.phi0) == j0
    ]
    keys = [(r.theta1, r.phi1) for r in selected]
    return _accumulate(selected, keys, step_deg)


def delta_qvf(single: Heatmap, double: Heatmap) -> Heatmap:
    """Cellwise double - single; cells absent on either side stay absent."""
    if single.thetas != double.thetas or single.phis != double.phis:
        raise ValueError("heatmap grids do not match")
    mean = double.mean - single.mean  # NaN propagates absent cells
    count = np.minimum(single.count, double.count)
    return Heatmap(single.thetas, single.phis, mean, count)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    mean: float
    stddev: float


def histogram(records, bins: int) -> Histogram:
    """Uniform-bin histogram over [0, 1] with population statistics."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    values = np.array([r.qvf if isinstance(r, QvfRecord) else float(r) for r in records])
    if values.size == 0:
        raise ValueError("no records to histogram")
    counts, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    return Histogram(edges, counts, float(values.mean()), float(values.std()))


def summarize(records: list[QvfRecord]) -> dict:
    """Report payload: moments, class counts, per-qubit means, and how
    many injections beat the zero-shift (noisy fault-free) baseline."""
    if not records:
        raise ValueError("no records to summarize")
    values = np.array([r.qvf for r in records])
    classes = {"green": 0, "white": 0, "red": 0}
    for v in values:
        classes[classify(float(v))] += 1
    baseline_records = [
        r for r in records if grid_index(r.theta0) == 0 and grid_index(r.phi0) == 0
    ]
    baseline = float(np.mean([r.qvf for r in baseline_records])) if baseline_records else None
    improving = int((values < baseline).sum()) if baseline is not None else None
    per_qubit: dict[int, float] = {}
    for q in sorted({r.qubit for r in records}):
        per_qubit[q] = float(np.mean([r.qvf for r in records if r.qubit == q]))
    return {
        "records": len(records),
        "mean_qvf": float(values.mean()),
        "stddev_qvf": float(values.std()),
        "classes": classes,
        "baseline_qvf": baseline,
        "improving_records": improving,
        "per_qubit_mean": per_qubit,
    }
