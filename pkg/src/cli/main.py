"""Command-line harness for the allocation toolkit.

Subcommands: ``solve`` and ``verify`` run a mechanism on an instance CSV,
``sweep`` runs a seeded experiment config, ``gen`` writes a generated instance
and ``bounds`` prints the closed-form ratio curves. Exit codes: 0 ok,
1 property violation or manipulation found, 2 input error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

if __package__ in {None, ""}:
    repo_root = Path(__file__).resolve().parents[2]
    if str(repo_root) not in sys.path:
        sys.path.insert(0, str(repo_root))

from src.cli.schemas import CheckRecord, FindingRecord, SolveRecord, VerifyRecord
from src.cli.sweep import load_sweep_config, run_sweep
from src.core.errors import EXIT_OK, EXIT_VIOLATION, AllocationError
from src.core.instance_io import format_instance_csv, read_instance_csv, write_instance_csv
from src.core.model import Instance, dominant_resources, partition
from src.core.settings import load_environment, resolve_eps
from src.fairopt import ratio_curve
from src.instances import GENERATOR_KINDS, GeneratorSpec, generate, load_trace_pool
from src.mechanisms import MECHANISM_TAGS, MechanismResult, run_tag
from src.properties import (
    DEFAULT_GRID_POINTS,
    ManipulationFinding,
    PropertyReport,
    demand_grid,
    probe_all_agents,
    verify_allocation,
)

logger = logging.getLogger("src.cli")

DEFAULT_BOUND_TAGS = ("drf", "f1", "f2", "f2star")
DEFAULT_BOUND_ALPHAS = tuple(k / 100 for k in range(5, 55, 5))


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _fmt_row(values: Sequence[float]) -> str:
    return ",".join(_fmt(float(v)) for v in values)


def _solve_record(result: MechanismResult) -> SolveRecord:
    return SolveRecord(
        mechanism=result.mechanism,
        branch=result.branch,
        score=result.score,
        n=result.instance.n,
        m=result.instance.m,
        shares=[float(v) for v in result.shares],
        allocation=[[float(v) for v in row] for row in result.allocation.matrix],
        social_welfare=result.social_welfare,
        utilization=result.utilization,
        max_column_sum=result.max_column_sum,
        exhausted=sorted(r + 1 for r in result.exhausted),
    )


def cmd_solve(args: argparse.Namespace) -> int:
    instance = read_instance_csv(args.instance)
    result = run_tag(args.mechanism, instance, score_spec=args.g, eps=args.eps, orient=not args.no_orient)
    record = _solve_record(result)
    if args.json:
        print(json.dumps(record.model_dump(), indent=2, sort_keys=True))
        return EXIT_OK

    header = record.mechanism if record.branch is None else f"{record.mechanism} (branch {record.branch})"
    print(f"mechanism: {header}")
    if record.score is not None:
        print(f"score: {record.score}")
    for agent, row in enumerate(record.allocation, 1):
        print(f"A{agent}: {_fmt_row(row)}")
    print(f"shares: {_fmt_row(record.shares)}")
    print(f"social_welfare: {_fmt(record.social_welfare)}")
    print(f"utilization: {_fmt(record.utilization)}")
    print(f"exhausted: {','.join(str(r) for r in record.exhausted) or 'none'}")
    return EXIT_OK


def _verify_record(
    mechanism: str,
    report: PropertyReport,
    grid_points: int | None,
    finding: ManipulationFinding | None,
) -> VerifyRecord:
    manipulation = None
    if finding is not None:
        manipulation = FindingRecord(
            agent=finding.agent + 1,
            false_demand=list(finding.false_demand),
            truthful_utility=finding.truthful_utility,
            manipulated_utility=finding.manipulated_utility,
            gain=finding.gain,
        )
    return VerifyRecord(
        mechanism=mechanism,
        passed=report.passed and finding is None,
        si=CheckRecord(
            passed=report.si.passed,
            detail={"worst_agent": None if report.si.worst_agent is None else report.si.worst_agent + 1,
                    "shortfall": report.si.shortfall},
        ),
        ef=CheckRecord(
            passed=report.ef.passed,
            detail={"envy_pairs": [[p.envious + 1, p.envied + 1, p.magnitude] for p in report.ef.envy_pairs]},
        ),
        po=CheckRecord(passed=report.po.passed, detail={"max_column_sum": report.po.max_column_sum}),
        non_wasteful=CheckRecord(
            passed=report.non_wasteful.passed,
            detail={"worst_deviation": report.non_wasteful.worst_deviation},
        ),
        sp_grid=grid_points,
        manipulation=manipulation,
    )


def cmd_verify(args: argparse.Namespace) -> int:
    instance = read_instance_csv(args.instance)

    def run(candidate: Instance) -> MechanismResult:
        return run_tag(args.mechanism, candidate, score_spec=args.g, eps=args.eps, orient=not args.no_orient)

    result = run(instance)
    report = verify_allocation(result.allocation, instance, eps=args.eps)
    finding = None
    if args.sp_grid is not None:
        finding = probe_all_agents(run, instance, demand_grid(instance.m, args.sp_grid))
    record = _verify_record(result.mechanism, report, args.sp_grid, finding)

    if args.json:
        print(json.dumps(record.model_dump(), indent=2, sort_keys=True))
    else:
        for name in ("si", "ef", "po", "non_wasteful"):
            check: CheckRecord = getattr(record, name)
            print(f"{name}: {'pass' if check.passed else 'FAIL'}")
        if record.manipulation is not None:
            found = record.manipulation
            print(
                f"manipulation: agent {found.agent} reports ({_fmt_row(found.false_demand)}) "
                f"utility {_fmt(found.manipulated_utility)} vs {_fmt(found.truthful_utility)} "
                f"(gain {_fmt(found.gain)})"
            )
        elif args.sp_grid is not None:
            print(f"manipulation: none on the {args.sp_grid}-point grid")
    return EXIT_OK if record.passed else EXIT_VIOLATION


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_sweep_config(args.config)
    summary = run_sweep(
        config,
        output=args.output,
        stream=sys.stdout,
        workers=args.workers,
        progress=not args.no_progress,
        eps=args.eps,
    )
    print(json.dumps(summary, indent=2, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def _realized_lines(instance: Instance) -> list[str]:
    groups = partition(instance)
    lines = [f"n={instance.n}", f"m={instance.m}", f"alpha_realized={_fmt(groups.alpha)}"]
    if groups.beta is not None:
        lines.append(f"beta_realized={_fmt(groups.beta)}")
    counts = [int((dominant_resources(instance) == r).sum()) for r in range(instance.m)]
    lines.append("dominant_split=" + ",".join(f"r{r + 1}:{count}" for r, count in enumerate(counts)))
    return lines


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        m=args.m,
        alpha=args.alpha,
        beta=args.beta,
        seed=args.seed,
        trace_path=args.path,
    )
    lines: list[str] = []
    pool = None
    if spec.kind == "trace" and args.path is not None:
        pool = load_trace_pool(args.path)
        lines.append(f"trace_rows={pool.size} skipped={pool.skipped} cpu_dominant={_fmt(pool.cpu_dominant_fraction)}")
    instance = generate(spec, pool)
    lines.extend(_realized_lines(instance))

    if args.output is None:
        sys.stdout.write(format_instance_csv(instance))
        echo = sys.stderr
    else:
        write_instance_csv(instance, args.output)
        lines.insert(0, f"wrote {args.output}")
        echo = sys.stdout
    for line in lines:
        print(line, file=echo)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    tags = [tag.strip() for tag in args.tags.split(",") if tag.strip()]
    alphas = [float(x) for x in args.alphas.split(",") if x.strip()] if args.alphas else list(DEFAULT_BOUND_ALPHAS)
    rows = ratio_curve(tags, alphas, n=args.n)
    columns = ["alpha"] + [f"{tag}_{metric}_bound" for tag in tags for metric in ("sw", "util")]
    writer = csv.DictWriter(sys.stdout, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if value is None else repr(value) for key, value in row.items()})
    return EXIT_OK


def _add_mechanism_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("instance", type=Path, help="Instance CSV (header r1,...,rm)")
    parser.add_argument("mechanism", choices=MECHANISM_TAGS, type=str.lower)
    parser.add_argument("--g", default=None, help="Score for fg: coord:<r>, linear:<w1,...>, dominant")
    parser.add_argument("--no-orient", action="store_true", help="Keep the given column order for m = 2")
    parser.add_argument("--json", action="store_true", help="Emit a JSON record")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Fair multi-resource allocation for Leontief agents.")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--eps", type=float, default=None, help="Tolerance (default: ALLOC_EPS or 1e-9)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="Run a mechanism and print the allocation")
    _add_mechanism_arguments(solve)
    solve.set_defaults(handler=cmd_solve)

    verify = subparsers.add_parser("verify", help="Check SI, EF, PO, non-wastefulness and probe for manipulation")
    _add_mechanism_arguments(verify)
    verify.add_argument(
        "--sp-grid",
        type=int,
        nargs="?",
        const=DEFAULT_GRID_POINTS,
        default=None,
        help="Probe misreports on a k-point demand grid",
    )
    verify.set_defaults(handler=cmd_verify)

    sweep = subparsers.add_parser("sweep", help="Run a seeded experiment sweep to CSV")
    sweep.add_argument("config", type=Path, help="key = value sweep config")
    sweep.add_argument("--output", type=Path, default=None, help="Trial CSV path (aggregate goes to *.summary.csv)")
    sweep.add_argument("--workers", type=int, default=None, help="Worker processes (default: ALLOC_WORKERS or 1)")
    sweep.add_argument("--no-progress", action="store_true")
    sweep.set_defaults(handler=cmd_sweep)

    gen = subparsers.add_parser("gen", help="Write a generated instance CSV")
    gen.add_argument("--kind", required=True, type=lambda value: value.strip().lower().replace("-", "_"),
                     choices=GENERATOR_KINDS)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--alpha", type=float, default=None)
    gen.add_argument("--beta", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--path", type=Path, default=None, help="Trace CSV with cpu,mem columns")
    gen.add_argument("--output", type=Path, default=None, help="Instance CSV path (default: stdout)")
    gen.set_defaults(handler=cmd_gen)

    bounds = subparsers.add_parser("bounds", help="Print closed-form fair-ratio curves over alpha as CSV")
    bounds.add_argument("--tags", default=",".join(DEFAULT_BOUND_TAGS))
    bounds.add_argument("--alphas", default=None, help="Comma-separated alpha values (default 0.05,...,0.50)")
    bounds.add_argument("--n", type=int, default=None, help="Finite n (default: the large-n limit)")
    bounds.set_defaults(handler=cmd_bounds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    load_environment()
    try:
        args.eps = resolve_eps(args.eps)
        return args.handler(args)
    except AllocationError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
