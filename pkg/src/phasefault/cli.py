"""Command-line interface.

Verbs: run (execute a campaign), heatmap (render an SVG from records),
report (summary JSON plus histogram figure), gold (print the fault-free
result), transpile-dump (layouts, provenance, neighbor pairs as JSON),
qasm-roundtrip (parse and re-emit a QASM file).

Exit codes: 0 success, 2 config error, 3 input parse error, 4 plan
guardrail, 5 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import aggregate_double_detail, aggregate_heatmap, histogram, summarize
from .campaign import (
    ConfigError,
    GuardrailError,
    InputError,
    build_circuit,
    load_config,
    read_grid_step,
    read_records,
    resolve_topology,
    run_campaign,
)
from .analysis import gold_result
from .injector import PhaseShift, grid_index
from .qasm import QasmError, emit_qasm, parse_qasm
from .simulator import run_exact
from .svgmap import render_heatmap
from .transpiler import neighbor_pairs, transpile

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_GUARDRAIL = 4
EXIT_INTERNAL = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasefault",
        description="Phase-shift fault injection campaigns for quantum circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a fault-injection campaign")
    run_p.add_argument("--config", required=True, help="TOML or JSON campaign config")
    run_p.add_argument("--out", help="output directory (overrides config)")
    run_p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    run_p.add_argument("--seed", type=int, help="base seed (overrides config)")
    run_p.add_argument("--grid-step", type=int, help="sweep step in degrees (overrides config)")
    run_p.add_argument("--force", action="store_true", help="ignore the plan-size guardrail")

    hm_p = sub.add_parser("heatmap", help="render an SVG heatmap from records")
    hm_p.add_argument("records", help="records.csv from a campaign")
    hm_p.add_argument("--out", required=True, help="SVG output path")
    hm_p.add_argument("--qubit", type=int, help="restrict to one logical qubit's injections")
    hm_p.add_argument(
        "--double-detail",
        metavar="THETA0,PHI0",
        help="second-fault view for a fixed first shift, in degrees (e.g. 180,180)",
    )
    hm_p.add_argument("--grid-step", type=int, help="grid step in degrees (default: manifest)")
    hm_p.add_argument("--no-markers", action="store_true", help="omit gate-equivalent markers")
    hm_p.add_argument("--title", default="", help="title text")

    rep_p = sub.add_parser("report", help="summary statistics from records")
    rep_p.add_argument("records", help="records.csv from a campaign")
    rep_p.add_argument("--out", help="write the JSON summary here (default: stdout)")
    rep_p.add_argument("--figure", help="histogram figure path (default: alongside --out)")
    rep_p.add_argument("--bins", type=int, default=20, help="histogram bins")

    gold_p = sub.add_parser("gold", help="fault-free result for a configured circuit")
    gold_p.add_argument("--config", required=True)
    gold_p.add_argument("--out", help="write JSON here (default: stdout)")

    td_p = sub.add_parser("transpile-dump", help="transpiled circuit and layout as JSON")
    td_p.add_argument("--config", required=True)
    td_p.add_argument("--out", help="write JSON here (default: stdout)")

    rt_p = sub.add_parser("qasm-roundtrip", help="parse a QASM file and re-emit it")
    rt_p.add_argument("input", help="OpenQASM 2.0 file")
    rt_p.add_argument("--out", help="write the canonical emission here (default: stdout)")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.out:
        config = replace(config, out_dir=args.out)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.grid_step is not None:
        config = replace(config, grid_step_deg=args.grid_step)
        from .injector import angle_grid

        try:
            angle_grid(args.grid_step)
        except ValueError as exc:
            raise ConfigError(str(exc))
    result = run_campaign(config, workers=max(1, args.workers), force=args.force)
    print(f"{result.plan_size} injections -> {result.records_path}")
    return EXIT_OK


def _cmd_heatmap(args) -> int:
    records = read_records(args.records)
    step = args.grid_step if args.grid_step else read_grid_step(args.records)
    if args.double_detail is not None and args.qubit is not None:
        raise ConfigError("--qubit and --double-detail are mutually exclusive")
    try:
        if args.double_detail is not None:
            parts = args.double_detail.split(",")
            if len(parts) != 2:
                raise ConfigError("--double-detail expects THETA_DEG,PHI_DEG")
            import math

            theta = float(parts[0]) * math.pi / 180.0
            phi = float(parts[1]) * math.pi / 180.0
            grid_index(theta, "theta")
            grid_index(phi, "phi")
            hm = aggregate_double_detail(records, PhaseShift(theta, phi), step_deg=step)
        else:
            hm = aggregate_heatmap(records, qubit=args.qubit, step_deg=step)
    except ValueError as exc:
        raise InputError(str(exc))
    if int(hm.count.sum()) == 0:
        raise InputError("selection matches no records; no file written")
    svg = render_heatmap(hm, title=args.title, markers=not args.no_markers)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    records = read_records(args.records)
    summary = summarize(records)
    hist = histogram(records, bins=max(2, args.bins))
    summary["histogram"] = {
        "edges": [round(float(e), 12) for e in hist.edges],
        "counts": [int(c) for c in hist.counts],
    }
    text = json.dumps(summary, indent=2) + "\n"
    _emit(text, args.out)
    figure = args.figure
    if figure is None and args.out:
        figure = str(Path(args.out).with_suffix("")) + "_hist.png"
    if figure:
        from .figures import save_qvf_histogram

        save_qvf_histogram(
            [r.qvf for r in records], figure, bins=max(2, args.bins),
            title=records[0].circuit,
        )
        print(f"wrote {figure}", file=sys.stderr)
    return EXIT_OK


def _prepare(args):
    config = load_config(args.config)
    circuit = build_circuit(config)
    coupling = resolve_topology(config.topology)
    return config, transpile(circuit, coupling)


def _cmd_gold(args) -> int:
    _, t = _prepare(args)
    gold = gold_result(run_exact(t.circuit))
    doc = {
        "circuit": t.circuit.name,
        "correct_states": sorted(gold.correct_states),
        "probabilities": {k: gold.source.outcomes[k] for k in sorted(gold.source.outcomes)},
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_transpile_dump(args) -> int:
    _, t = _prepare(args)
    doc = {
        "circuit": t.circuit.name,
        "topology": t.coupling.name,
        "n_physical": t.coupling.n_physical,
        "initial_layout": list(t.initial_layout.logical_to_physical),
        "final_layout": list(t.final_layout.logical_to_physical),
        "neighbor_pairs": sorted(list(p) for p in neighbor_pairs(t)),
        "ops": [
            {
                "kind": op.kind.value,
                "qubits": list(op.qubits),
                "params": ["%.12g" % p for p in op.params],
                "clbit": op.clbit,
                "source_op": t.site_provenance[i],
            }
            for i, op in enumerate(t.circuit.ops)
        ],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_qasm_roundtrip(args) -> int:
    path = Path(args.input)
    if not path.exists():
        raise InputError(f"QASM file not found: {path}")
    circuit = parse_qasm(path.read_text(encoding="utf-8"))
    _emit(emit_qasm(circuit), args.out)
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "heatmap": _cmd_heatmap,
    "report": _cmd_report,
    "gold": _cmd_gold,
    "transpile-dump": _cmd_transpile_dump,
    "qasm-roundtrip": _cmd_qasm_roundtrip,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, QasmError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardrailError as exc:
        print(f"guardrail: {exc}", file=sys.stderr)
        return EXIT_GUARDRAIL
    except Exception as exc:  # keep the exit-code contract for anything unexpected
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
