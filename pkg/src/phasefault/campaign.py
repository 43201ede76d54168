"""Campaign orchestration: configuration, execution, persistence.

A campaign transpiles one circuit, derives its gold result, enumerates
a fault plan, executes every spec, and writes three artifacts into the
output directory: records.csv (one row per injection), gold.json, and
manifest.json. Everything except manifest timestamps is a pure
function of (config, seed), whatever the worker count.
"""
from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .analysis import QvfRecord, compute_qvf, gold_result
from .benchmarks import make_bernstein_vazirani, make_deutsch_jozsa, make_qft
from .circuit import Circuit
from .injector import CampaignPlan, angle_grid, build_faulty_circuit, plan_campaign
from .qasm import parse_qasm
from .simulator import NoiseModel, run_exact, run_shots
from .transpiler import CouplingMap, TranspiledCircuit, builtin_topology, load_topology, transpile

DEFAULT_NOISE = NoiseModel(p1=0.001, p2=0.01, readout_flip=0.02, enabled=True)
DEFAULT_PLAN_CAP = 1_000_000

CSV_COLUMNS = [
    "circuit", "n_qubits", "mode", "site_index", "logical_gate_index", "qubit",
    "theta0_rad", "phi0_rad", "qubit2", "theta1_rad", "phi1_rad",
    "qvf", "p_correct", "p_wrong_max", "shots", "seed",
]


class ConfigError(ValueError):
    """Bad campaign configuration (CLI exit code 2)."""


class InputError(ValueError):
    """Unreadable or malformed input file (CLI exit code 3)."""


class GuardrailError(RuntimeError):
    """Plan larger than the configured cap (CLI exit code 4)."""


@dataclass(frozen=True)
class CampaignConfig:
    circuit: dict
    topology: str = "jakarta"
    mode: str = "single"
    shots: int = 1024
    noise: NoiseModel = DEFAULT_NOISE
    seed: int = 0
    grid_step_deg: int = 15
    out_dir: str = "campaign-out"
    max_plan_size: int = DEFAULT_PLAN_CAP


def _noise_from_table(table: dict) -> NoiseModel:
    known = {"enabled", "p1", "p2", "readout_flip"}
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"unknown noise keys: {sorted(unknown)}")
    try:
        return NoiseModel(
            p1=float(table.get("p1", DEFAULT_NOISE.p1)),
            p2=float(table.get("p2", DEFAULT_NOISE.p2)),
            readout_flip=float(table.get("readout_flip", DEFAULT_NOISE.readout_flip)),
            enabled=bool(table.get("enabled", True)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad noise model: {exc}")


def load_config(path) -> CampaignConfig:
    """Read a TOML or JSON campaign config, picked by file extension."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        if path.suffix == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            doc = tomllib.loads(path.read_text(encoding="utf-8"))
        elif path.suffix == ".json":
            doc = json.loads(path.read_text(encoding="utf-8"))
        else:
            raise ConfigError(f"config must be .toml or .json, got {path.suffix!r}")
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"cannot parse {path}: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a table")
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> CampaignConfig:
    known = {
        "circuit", "topology", "mode", "shots", "noise", "seed",
        "grid_step_deg", "out_dir", "max_plan_size",
    }
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    circuit = doc.get("circuit")
    if not isinstance(circuit, dict):
        raise ConfigError("config needs a [circuit] table")
    sources = [k for k in ("benchmark", "qasm") if k in circuit]
    if len(sources) != 1:
        raise ConfigError("circuit table needs exactly one of 'benchmark' or 'qasm'")
    mode = doc.get("mode", "single")
    if mode not in ("single", "double"):
        raise ConfigError(f"mode must be 'single' or 'double', got {mode!r}")
    shots = doc.get("shots", 1024)
    if not isinstance(shots, int) or shots < 1:
        raise ConfigError(f"shots must be a positive integer, got {shots!r}")
    step = doc.get("grid_step_deg", 15)
    try:
        angle_grid(step)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    cap = doc.get("max_plan_size", DEFAULT_PLAN_CAP)
    if not isinstance(cap, int) or cap < 1:
        raise ConfigError("max_plan_size must be a positive integer")
    return CampaignConfig(
        circuit=dict(circuit),
        topology=str(doc.get("topology", "jakarta")),
        mode=mode,
        shots=shots,
        noise=_noise_from_table(doc.get("noise", {})),
        seed=seed,
        grid_step_deg=step,
        out_dir=str(doc.get("out_dir", "campaign-out")),
        max_plan_size=cap,
    )


def build_circuit(config: CampaignConfig) -> Circuit:
    table = config.circuit
    if "qasm" in table:
        path = Path(table["qasm"])
        if not path.exists():
            raise InputError(f"QASM file not found: {path}")
        return parse_qasm(path.read_text(encoding="utf-8"))
    name = table["benchmark"]
    try:
        if name == "bv":
            return make_bernstein_vazirani(int(table["n_data"]), str(table["hidden_string"]))
        if name == "dj":
            mask = table.get("mask")
            return make_deutsch_jozsa(
                int(table["n_data"]), str(table["oracle"]), None if mask is None else str(mask)
            )
        if name == "qft":
            return make_qft(int(table["n"]), int(table["value"]))
    except KeyError as exc:
        raise ConfigError(f"benchmark {name!r} is missing parameter {exc}")
    except ValueError as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown benchmark {name!r} (expected bv, dj, or qft)")


def resolve_topology(name_or_path: str) -> CouplingMap:
    try:
        return builtin_topology(name_or_path)
    except ValueError:
        pass
    path = Path(name_or_path)
    if path.exists():
        try:
            return load_topology(path)
        except (ValueError, OSError) as exc:
            raise InputError(str(exc))
    raise ConfigError(f"unknown topology {name_or_path!r}")


def _spec_record(
    t: TranspiledCircuit, plan: CampaignPlan, gold, index: int, exact: bool
) -> QvfRecord:
    spec = plan.specs[index]
    faulty = build_faulty_circuit(t, spec)
    if exact:
        dist = run_exact(faulty)
        shots, seed = 0, 0
    else:
        seed = plan.spec_seed(index)
        shots = plan.shots
        dist = run_shots(faulty, shots, plan.noise, seed)
    qvf, p_correct, p_wrong_max = compute_qvf(gold, dist)
    return QvfRecord(
        circuit=plan.circuit_id,
        n_qubits=t.n_logical,
        mode=plan.mode,
        site_index=spec.site.op_index,
        logical_gate_index=t.site_provenance[spec.site.op_index],
        qubit=spec.site.qubit,
        theta0=spec.shift.theta,
        phi0=spec.shift.phi,
        qubit2=spec.second_qubit,
        theta1=spec.second_shift.theta if spec.second_shift else None,
        phi1=spec.second_shift.phi if spec.second_shift else None,
        qvf=qvf,
        p_correct=p_correct,
        p_wrong_max=p_wrong_max,
        shots=shots,
        seed=seed,
    )


def _run_chunk(args) -> list[QvfRecord]:
    t, plan, gold, exact, start, stop = args
    return [_spec_record(t, plan, gold, i, exact) for i in range(start, stop)]


def execute_plan(
    t: TranspiledCircuit,
    plan: CampaignPlan,
    gold,
    workers: int = 1,
    exact: bool = False,
) -> list[QvfRecord]:
    """Run every spec; records come back in plan order regardless of
    worker count."""
    n = len(plan.specs)
    if workers <= 1 or n < 2:
        return _run_chunk((t, plan, gold, exact, 0, n))
    chunk = max(1, -(-n // (workers * 4)))
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
    tasks = [(t, plan, gold, exact, s, e) for s, e in bounds]
    records: list[QvfRecord] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, tasks):
            records.extend(part)
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def write_records(path, records: list[QvfRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.circuit, r.n_qubits, r.mode, r.site_index,
                    r.logical_gate_index, r.qubit,
                    _fmt(r.theta0), _fmt(r.phi0),
                    _fmt(r.qubit2), _fmt(r.theta1), _fmt(r.phi1),
                    _fmt(r.qvf), _fmt(r.p_correct), _fmt(r.p_wrong_max),
                    r.shots, r.seed,
                ]
            )


def read_records(path) -> list[QvfRecord]:
    path = Path(path)
    if not path.exists():
        raise InputError(f"records file not found: {path}")
    records: list[QvfRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_COLUMNS:
            raise InputError(f"unexpected records header in {path}")
        for row in reader:
            if len(row) != len(CSV_COLUMNS):
                raise InputError(f"malformed row in {path}: {row!r}")
            try:
                records.append(
                    QvfRecord(
                        circuit=row[0],
                        n_qubits=int(row[1]),
                        mode=row[2],
                        site_index=int(row[3]),
                        logical_gate_index=int(row[4]),
                        qubit=int(row[5]),
                        theta0=float(row[6]),
                        phi0=float(row[7]),
                        qubit2=int(row[8]) if row[8] else None,
                        theta1=float(row[9]) if row[9] else None,
                        phi1=float(row[10]) if row[10] else None,
                        qvf=float(row[11]),
                        p_correct=float(row[12]),
                        p_wrong_max=float(row[13]),
                        shots=int(row[14]),
                        seed=int(row[15]),
                    )
                )
            except ValueError as exc:
                raise InputError(f"malformed row in {path}: {exc}")
    if not records:
        raise InputError(f"no records in {path}")
    return records


@dataclass(frozen=True)
class CampaignResult:
    out_dir: Path
    records_path: Path
    gold_path: Path
    manifest_path: Path
    plan_size: int
    records: list[QvfRecord] = field(repr=False, default_factory=list)


def run_campaign(
    config: CampaignConfig, workers: int = 1, force: bool = False
) -> CampaignResult:
    """Execute a configured campaign and write its artifacts."""
    started = time.monotonic()
    circuit = build_circuit(config)
    coupling = resolve_topology(config.topology)
    t = transpile(circuit, coupling)
    gold = gold_result(run_exact(t.circuit))
    try:
        plan = plan_campaign(
            t, config.mode, config.shots, config.noise, config.seed,
            step_deg=config.grid_step_deg,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    if len(plan) > config.max_plan_size and not force:
        raise GuardrailError(
            f"plan of {len(plan)} specs exceeds cap {config.max_plan_size}; "
            "raise max_plan_size or pass --force"
        )
    records = execute_plan(t, plan, gold, workers=workers)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records_path = out_dir / "records.csv"
    gold_path = out_dir / "gold.json"
    manifest_path = out_dir / "manifest.json"

    write_records(records_path, records)
    gold_doc = {
        "circuit": plan.circuit_id,
        "correct_states": sorted(gold.correct_states),
        "probabilities": {k: gold.source.outcomes[k] for k in sorted(gold.source.outcomes)},
    }
    gold_path.write_text(json.dumps(gold_doc, indent=2) + "\n", encoding="utf-8")

    manifest = {
        "circuit": plan.circuit_id,
        "config": {
            "circuit": config.circuit,
            "topology": config.topology,
            "mode": config.mode,
            "shots": config.shots,
            "noise": asdict(config.noise),
            "seed": config.seed,
            "grid_step_deg": config.grid_step_deg,
            "max_plan_size": config.max_plan_size,
        },
        "n_logical_qubits": t.n_logical,
        "transpiled_ops": len(t.circuit.ops),
        "plan_size": len(plan),
        "workers": workers,
        "wall_clock_s": round(time.monotonic() - started, 3),
        "created_unix": round(time.time(), 3),
    }
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return CampaignResult(
        out_dir=out_dir,
        records_path=records_path,
        gold_path=gold_path,
        manifest_path=manifest_path,
        plan_size=len(plan),
        records=records,
    )


def read_grid_step(records_path, fallback: int = 15) -> int:
    """Grid step recorded in the manifest next to a records file, if any."""
    manifest = Path(records_path).parent / "manifest.json"
    if manifest.exists():
        try:
            doc = json.loads(manifest.read_text(encoding="utf-8"))
            return int(doc["config"]["grid_step_deg"])
        except (ValueError, KeyError, TypeError):
            pass
    return fallback
