"""Command-line entry point: ``g2strom <command> [options]``."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .reports import ERROR, Check, Report, RunConfig
from .suites import SUITES

DEFAULT_SAMPLES = {"symbols": 1000, "courant": 20}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="g2strom", description="Numerical verification of G2 deformation complexes.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("verify-algebra", "exterior algebra and G2 representation theory invariants"),
        ("symbols", "principal symbol exactness sweep"),
        ("moduli", "per-mode cohomology of the deformation complexes at the flat base"),
        ("torsion", "torsion classification and Strominger residuals of a field file"),
        ("courant", "Courant algebroid axioms and the Killing-data dictionary"),
    ]:
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--tol", type=float, default=None, help="residual tolerance (command default if omitted)")
        s.add_argument("--rank-tol", type=float, default=1e-9, help="relative singular value cutoff")
        s.add_argument("--seed", type=int, default=42)
        s.add_argument("--cutoff", type=int, default=1, help="Fourier cutoff K (|k|_inf <= K)")
        s.add_argument("--lie", choices=["trivial", "su2", "u1"], default="su2")
        s.add_argument("--samples", type=int, default=None)
        s.add_argument("--input", default=None, help="field file (JSON)")
        s.add_argument("--output", default=None, help="write the report here instead of stdout")
        s.add_argument("--perturb-bianchi", type=float, nargs="*", default=[], metavar="EPS")
        s.add_argument("--timing", action="store_true", help="record wall time (makes reports non-reproducible)")
    return p


def run(cfg: RunConfig) -> Report:
    report = Report(cfg.command, cfg)
    t0 = time.perf_counter()
    try:
        for check in SUITES[cfg.command](cfg):
            report.add(check)
    except Exception as exc:  # surfaced as an ERROR entry, exit code 2
        report.add(Check("exception", ERROR, {"type": type(exc).__name__, "message": str(exc)}))
    if cfg.timing:
        report.wall_time = time.perf_counter() - t0
    return report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(command=args.command, tol=args.tol, rank_tol=args.rank_tol, seed=args.seed,
                        cutoff=args.cutoff, lie=args.lie,
                        samples=args.samples if args.samples is not None else DEFAULT_SAMPLES.get(args.command, 1000),
                        input=args.input, output=args.output, perturb_bianchi=list(args.perturb_bianchi),
                        timing=args.timing)
    except ValueError as exc:
        print(f"g2strom: {exc}", file=sys.stderr)
        return 2
    report = run(cfg)
    text = report.to_json()
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    for c in report.checks:
        print(f"{c.status:5s} {c.name}", file=sys.stderr)
    print(f"{report.status} ({cfg.command})", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
