"""Command-line front end: run traces, run the law suite, relate traces.

Exit codes: 0 on success, 1 when an assertion, law, or relation fails,
2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import trace as trace_mod
from .lawcheck.runner import SuiteConfig, jsonl_report, run_suite, text_report
from .memstate import CapacityPolicy, MemConfig
from .trace import TraceParseError, exec_trace, parse_embedding, parse_trace, relate

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SystemExit(f"cannot read config file {path}: {e}")
    if not isinstance(data, dict):
        raise SystemExit(f"config file {path} must hold a JSON object")
    return data


def _mem_config(args, file_cfg: dict) -> MemConfig:
    capacity = file_cfg.get("capacity_bytes")
    if args.capacity is not None:
        capacity = args.capacity
    check_alignment = bool(file_cfg.get("alignment_check", True))
    if args.no_alignment_check:
        check_alignment = False
    return MemConfig(
        capacity=CapacityPolicy(max_total_bytes=capacity),
        check_alignment=check_alignment,
    )


def _read_trace(path: str) -> trace_mod.Trace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SystemExit(f"cannot read trace {path}: {e}")
    try:
        return parse_trace(text)
    except TraceParseError as e:
        print(f"{path}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cmd_run(args) -> int:
    file_cfg = _load_config_file(args.config)
    tr = _read_trace(args.trace)
    report = exec_trace(tr, _mem_config(args, file_cfg))
    if args.verbose:
        for step in report.steps:
            mark = "ok  " if step.ok else "FAIL"
            print(f"{mark} line {step.line}: {step.note}")
    if report.ok:
        blocks = sum(
            1 for b in range(1, report.state.nextblock) if b not in report.state.freed
        )
        print(
            f"ok: {len(report.steps)} statements, "
            f"{blocks} live blocks, next block {report.state.nextblock}"
        )
        return EXIT_OK
    f = report.failure
    print(f"FAIL line {f.line}: {f.note}", file=sys.stderr)
    return EXIT_FAILURE


def _cmd_laws(args) -> int:
    file_cfg = _load_config_file(args.config)
    seed = args.seed if args.seed is not None else int(file_cfg.get("seed", 42))
    cases = args.cases
    if cases is None and file_cfg.get("random_cases") is not None:
        cases = int(file_cfg["random_cases"])
    cfg = SuiteConfig(seed=seed, random_cases=cases, jobs=args.jobs)
    suite = run_suite(cfg)
    print(text_report(suite), end="")
    if args.report:
        Path(args.report).write_text(jsonl_report(suite), encoding="utf-8")
        print(f"report written to {args.report}")
    return EXIT_OK if suite.passed else EXIT_FAILURE


def _cmd_relate(args) -> int:
    file_cfg = _load_config_file(args.config)
    t1 = _read_trace(args.trace1)
    t2 = _read_trace(args.trace2)
    emb = None
    if args.emb:
        try:
            emb = parse_embedding(Path(args.emb).read_text(encoding="utf-8"))
        except OSError as e:
            raise SystemExit(f"cannot read relocation map {args.emb}: {e}")
        except TraceParseError as e:
            print(f"{args.emb}: {e}", file=sys.stderr)
            return EXIT_USAGE
    try:
        report = relate(
            t1, t2, args.relation, emb=emb, stepwise=args.stepwise,
            config=_mem_config(args, file_cfg),
        )
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    print(report.message)
    return EXIT_OK if report.ok else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockmem",
        description="Block/offset memory model: trace interpreter and law suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file", default=None)
    common.add_argument(
        "--capacity", type=int, default=None, help="total byte budget for alloc"
    )
    common.add_argument(
        "--no-alignment-check",
        action="store_true",
        help="drop the alignment conjunct from valid accesses",
    )

    p_run = sub.add_parser("run", parents=[common], help="execute a trace file")
    p_run.add_argument("trace")
    p_run.add_argument("-v", "--verbose", action="store_true")
    p_run.set_defaults(func=_cmd_run)

    p_laws = sub.add_parser("laws", parents=[common], help="run the law suite")
    p_laws.add_argument("--cases", type=int, default=None, help="random cases per law")
    p_laws.add_argument("--seed", type=int, default=None)
    p_laws.add_argument("--report", help="write the JSON-lines report here")
    p_laws.add_argument("--jobs", type=int, default=1, help="parallel law runners")
    p_laws.set_defaults(func=_cmd_laws)

    p_rel = sub.add_parser(
        "relate", parents=[common], help="check a relation between two traces"
    )
    p_rel.add_argument("trace1")
    p_rel.add_argument("trace2")
    p_rel.add_argument("--relation", choices=trace_mod.RELATIONS, required=True)
    p_rel.add_argument("--emb", help="relocation map file for inject")
    p_rel.add_argument("--stepwise", action="store_true")
    p_rel.set_defaults(func=_cmd_relate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
