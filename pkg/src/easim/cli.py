"""Command-line entry point: ``easim run ...`` and ``easim compare ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .budget import STRATEGIES
from .runner import RunConfig, compare, run


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=("mps", "mpo"), required=True)
    p.add_argument("--circuit", choices=("haar", "cheng", "mirror", "file"), required=True)
    p.add_argument("--circuit-file")
    p.add_argument("--qubits", type=int, default=8)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fidelity-min", type=float, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="global")
    p.add_argument("--chi-cap", type=int)
    p.add_argument("--eps1", type=float, default=0.0)
    p.add_argument("--eps2", type=float, default=0.0)
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--out", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="easim", description="Entanglement-aware MPS/MPO circuit simulation")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("run", help="simulate one circuit with fidelity-targeted truncation"))
    _add_run_flags(sub.add_parser("compare", help="EA run versus fixed bond dimension at the EA peak"))
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        mode=args.mode,
        circuit=args.circuit,
        n_qubits=args.qubits,
        depth=args.depth,
        seed=args.seed,
        circuit_file=args.circuit_file,
        f_min=args.fidelity_min,
        strategy=args.strategy,
        chi_cap=args.chi_cap,
        eps1=args.eps1,
        eps2=args.eps2,
        oracle_check=args.oracle_check,
        out=args.out,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "run":
            report = run(config)
            summary = {k: report.to_dict()[k] for k in ("estimate", "guarantee_held", "peak_chi", "wall_ms")}
        else:
            res = compare(config)
            summary = {k: res[k] for k in ("chi_max", "wall_ratio", "fidelity_delta")}
    except (ValueError, OSError, MemoryError) as exc:
        print(f"easim: error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary))
    return 0
