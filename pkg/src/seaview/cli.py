"""Operator command line: ingest, serve, analyze, generate fixtures.

Subcommands::

    benchmark add <file>
    ingest <dir>
    scan
    serve
    report <eid>
    health <eid>
    compare <baseline> <target>
    summarize <eid>...
    instances <eid> [--status S | --group G]
    fixtures generate <out-dir> [--seed N] [--experiments K] [--instances M]

Every analysis subcommand prints, under ``--format json``, exactly the payload
the corresponding API endpoint serves. Exit codes: 0 success, 1 user error,
2 store/I-O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import analysis
from .config import Config
from .errors import MalformedBenchmark, MissingConfig, SeaviewError
from .fixtures import generate_corpus
from .ingest import ingest_experiment, run_poll_cycle
from .model import Benchmark, BenchmarkInstance, slugify
from .rules import load_rules_or_default
from .store import Store

FORMATS = ("table", "json", "markdown")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; that slot is reserved for store/I-O errors.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt_cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)


def _render_rows(rows: list[dict[str, Any]], fmt: str) -> str:
    if not rows:
        return "(empty)" if fmt == "table" else "| (empty) |"
    headers = list(rows[0].keys())
    cells = [[_fmt_cell(r.get(h)) for h in headers] for r in rows]
    if fmt == "markdown":
        lines = ["| " + " | ".join(headers) + " |",
                 "| " + " | ".join("---" for _ in headers) + " |"]
        lines += ["| " + " | ".join(row) + " |" for row in cells]
        return "\n".join(lines)
    widths = [max(len(h), *(len(row[i]) for row in cells)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines += ["  ".join(row[i].ljust(widths[i]) for i in range(len(headers))) for row in cells]
    return "\n".join(lines)


def render(payload: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2)
    if isinstance(payload, list):
        return _render_rows(payload, fmt)
    if isinstance(payload, dict):
        rows = [{"field": k, "value": _fmt_cell(v)} for k, v in payload.items()]
        return _render_rows(rows, fmt)
    return str(payload)


def _parse_benchmark_file(path: Path) -> Benchmark:
    benchmark_id = slugify(path.stem)
    instances = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedBenchmark(f"cannot read {path}: {exc}")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            instances.append(
                BenchmarkInstance(
                    instance_id=data["instance_id"],
                    repo=data["repo"],
                    problem_statement=data["problem_statement"],
                    gold_patch=data.get("gold_patch"),
                )
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedBenchmark(f"{path} line {lineno}: {exc}")
    try:
        return Benchmark(benchmark_id=benchmark_id, name=path.stem, instances=tuple(instances))
    except ValueError as exc:
        raise MalformedBenchmark(f"{path}: {exc}")


def build_parser() -> _Parser:
    parser = _Parser(prog="seaview", description="SWE-agent experiment analysis")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table",
                        help="output format (default: table)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_benchmark = sub.add_parser("benchmark", help="manage benchmarks")
    bench_sub = p_benchmark.add_subparsers(dest="benchmark_command", required=True)
    p_bench_add = bench_sub.add_parser("add", parents=[common],
                                       help="ingest a benchmark definition file (jsonl)")
    p_bench_add.add_argument("file", type=Path)

    p_ingest = sub.add_parser("ingest", parents=[common], help="ingest one experiment directory")
    p_ingest.add_argument("dir", type=Path)

    sub.add_parser("scan", parents=[common], help="run one poll cycle over the upload root")
    sub.add_parser("serve", parents=[common], help="run the HTTP API with the background poller")

    p_report = sub.add_parser("report", parents=[common], help="experiment performance report")
    p_report.add_argument("eid")

    p_health = sub.add_parser("health", parents=[common], help="experiment health breakdown")
    p_health.add_argument("eid")

    p_compare = sub.add_parser("compare", parents=[common], help="pairwise experiment comparison")
    p_compare.add_argument("baseline")
    p_compare.add_argument("target")

    p_summarize = sub.add_parser("summarize", parents=[common],
                                 help="union summary over several experiments")
    p_summarize.add_argument("eids", nargs="+", metavar="eid")

    p_instances = sub.add_parser("instances", parents=[common], help="list instance statuses")
    p_instances.add_argument("eid")
    filt = p_instances.add_mutually_exclusive_group()
    filt.add_argument("--status")
    filt.add_argument("--group")

    p_fixtures = sub.add_parser("fixtures", help="fixture corpora")
    fixtures_sub = p_fixtures.add_subparsers(dest="fixtures_command", required=True)
    p_gen = fixtures_sub.add_parser("generate", parents=[common],
                                    help="write a deterministic fixture corpus")
    p_gen.add_argument("out_dir", type=Path)
    p_gen.add_argument("--seed", type=int, default=7)
    p_gen.add_argument("--experiments", type=int, default=3)
    p_gen.add_argument("--instances", type=int, default=12)

    return parser


def _run(args: argparse.Namespace, config: Config) -> Any:
    """Execute one subcommand and return its printable payload."""
    if args.command == "serve":
        from . import api

        api.serve(config)
        return None

    if args.command == "fixtures":
        expected = generate_corpus(
            args.out_dir, seed=args.seed,
            experiments=args.experiments, instances=args.instances,
        )
        return {
            "out_dir": str(args.out_dir),
            "benchmark_file": expected["benchmark_file"],
            "experiment_ids": expected["experiment_ids"],
            "sidecars": ["expected.json", "expected_steps.json"],
        }

    store = Store(config.store_path)

    if args.command == "benchmark":
        benchmark = _parse_benchmark_file(args.file)
        store.put_benchmark(benchmark)
        return {
            "benchmark_id": benchmark.benchmark_id,
            "name": benchmark.name,
            "n_instances": len(benchmark.instances),
        }
    if args.command == "ingest":
        rules = load_rules_or_default(store.root)
        experiment = ingest_experiment(store, args.dir, rules)
        if experiment is None:
            return {"skipped": True, "reason": "already ingested (identical content)"}
        return {
            "experiment_id": experiment.experiment_id,
            "ingest_state": experiment.ingest_state.value,
            "warnings": store.experiment_warnings(experiment.experiment_id),
            "fail_reason": store.experiment_fail_reason(experiment.experiment_id),
        }
    if args.command == "scan":
        if config.data_root is None:
            raise MissingConfig("SEAVIEW_DATA_ROOT is not set")
        rules = load_rules_or_default(store.root)
        return run_poll_cycle(config.data_root, store, rules)
    if args.command == "report":
        return analysis.build_report(store, args.eid).to_dict()
    if args.command == "health":
        return analysis.health_breakdown(store, args.eid).to_dict()
    if args.command == "compare":
        return analysis.compare(store, args.baseline, args.target).to_dict()
    if args.command == "summarize":
        return analysis.summarize(store, args.eids).to_dict()
    if args.command == "instances":
        return analysis.instance_summaries(store, args.eid, status=args.status, group=args.group)
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # bad usage exits 1, --help exits 0
        return int(exc.code or 0)
    config = Config.from_env()
    try:
        payload = _run(args, config)
    except SeaviewError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error[io_error]: {exc}", file=sys.stderr)
        return 2
    if payload is not None:
        print(render(payload, getattr(args, "format", "table")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
