"""Command line front-end: stats, filter, sample, flatten, gen, serve.

Exit codes: 0 success, 1 invalid log content, 2 usage or I/O error. Filter
flags build the pipeline in the order they appear on the command line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import io as ocel_io
from .filters import (
    STEP_CLASSES,
    FilterPipeline,
    PipelineError,
)
from .generate import GenParams, generate_log
from .model import OcelError, validate
from .sampling import SampleSpec, Strategy, connected_event_samples, sample
from .stats import DiffReport, LogSummary, summarize

OUT_DIR_ENV = "OCELKIT_OUT_DIR"


class _UsageError(Exception):
    pass


class _StepFlag(argparse.Action):
    """Append (kind, value) to a shared list so flag order defines step order."""

    def __init__(self, option_strings, dest, kind=None, takes_value=True, **kwargs):
        self.kind = kind
        self.takes_value = takes_value
        if not takes_value:
            kwargs["nargs"] = 0
        super().__init__(option_strings, dest, **kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, "ordered_steps", None)
        if steps is None:
            steps = []
            namespace.ordered_steps = steps
        steps.append((self.kind, values if self.takes_value else None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocelkit",
        description="Filter, sample, flatten and summarize object-centric event logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="print summary statistics for a log")
    p_stats.add_argument("input", help="path to a JSON-OCEL or XML-OCEL file")
    p_stats.add_argument("--json", action="store_true", help="machine-readable output")

    p_filter = sub.add_parser(
        "filter",
        help="apply a filter pipeline and write the result",
        description="Filter steps run in the order their flags appear. "
        "--ev-essential combined with --ev-min-activity-count merges both "
        "into a single essential-or-frequent step at the earlier position.",
    )
    p_filter.add_argument("input")
    p_filter.add_argument("-o", "--output", required=True, help="output log path")
    p_filter.add_argument("--pipeline", help="pipeline descriptor file (JSON); "
                          "mutually exclusive with step flags")
    p_filter.add_argument("--ot-min-objects", kind="OTF1", action=_StepFlag,
                          type=int, metavar="N",
                          help="keep object types with at least N objects")
    p_filter.add_argument("--ot-min-events", kind="OTF2", action=_StepFlag,
                          type=int, metavar="N",
                          help="keep object types related to at least N events")
    p_filter.add_argument("--ot-min-activity-ratio", kind="OTF3", action=_StepFlag,
                          type=float, metavar="R",
                          help="keep object types with unique-activity ratio >= R")
    p_filter.add_argument("--ev-min-activity-count", kind="OE1", action=_StepFlag,
                          type=int, metavar="N",
                          help="keep events whose activity occurs at least N times")
    p_filter.add_argument("--ev-essential", kind="OE2", action=_StepFlag,
                          takes_value=False, help="keep only essential events")
    p_filter.add_argument("--rel-min-unique-ratio", kind="OA_RATIO", action=_StepFlag,
                          type=float, metavar="R",
                          help="drop relations with unique-object ratio below R")
    p_filter.add_argument("--drop-empty-events", kind="DROP_EMPTY_EVENTS",
                          action=_StepFlag, takes_value=False,
                          help="drop events with no related objects")
    p_filter.add_argument("--drop-orphan-objects", kind="DROP_ORPHAN_OBJECTS",
                          action=_StepFlag, takes_value=False,
                          help="drop objects that occur in no event")
    p_filter.add_argument("--json", action="store_true", help="machine-readable diff")

    p_sample = sub.add_parser("sample", help="sample a log")
    p_sample.add_argument("input")
    p_sample.add_argument("--strategy", required=True,
                          choices=[s.value for s in Strategy])
    p_sample.add_argument("--k", type=int, help="sample size (events/objects/types)")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out-dir", default=None,
                          help=f"output directory (default: ${OUT_DIR_ENV} or CWD)")

    p_flatten = sub.add_parser("flatten", help="flatten on an object type")
    p_flatten.add_argument("input")
    p_flatten.add_argument("--type", required=True, dest="otype",
                           help="object type to use as the case notion")
    p_flatten.add_argument("--format", choices=["csv", "jsonocel-flat"], default="csv")
    p_flatten.add_argument("-o", "--output", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic order-to-cash log")
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.add_argument("--orders", type=int, default=10)
    p_gen.add_argument("--items", type=int, nargs=2, default=[1, 3],
                       metavar=("MIN", "MAX"), help="items per order range")
    p_gen.add_argument("--deliveries", type=int, nargs=2, default=[1, 2],
                       metavar=("MIN", "MAX"), help="deliveries per order range")
    p_gen.add_argument("--global-object-rate", type=float, default=1.0,
                       help="probability that an event carries the log-wide dummy object")
    p_gen.add_argument("--singleton-rate", type=float, default=0.05,
                       help="probability of a one-off activity per order")
    p_gen.add_argument("--seed", type=int, default=0)

    p_serve = sub.add_parser("serve", help="run the interactive filtering service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--session-ttl", type=float, default=3600.0,
                         help="idle seconds before a session expires")
    p_serve.add_argument("--max-snapshots", type=int, default=16)
    p_serve.add_argument("--max-upload-mb", type=int, default=64)
    p_serve.add_argument("--static-dir", default=None,
                         help="directory with the built web UI (default: ./frontend/dist if present)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OcelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


def _dispatch(args) -> int:
    command = args.command
    if command == "stats":
        return _cmd_stats(args)
    if command == "filter":
        return _cmd_filter(args)
    if command == "sample":
        return _cmd_sample(args)
    if command == "flatten":
        return _cmd_flatten(args)
    if command == "gen":
        return _cmd_generate(args)
    if command == "serve":
        return _cmd_serve(args)
    raise _UsageError(f"unknown command {command!r}")


def _load(path: str):
    if not Path(path).is_file():
        raise _UsageError(f"file not found: {path}")
    return ocel_io.read_ocel_file(path)


def _cmd_stats(args) -> int:
    summary = summarize(_load(args.input))
    if args.json:
        print(json.dumps(summary.to_dict(), indent=1))
        return 0
    print(_summary_headline(summary))
    for otype, count in sorted(summary.objects_per_type.items()):
        ratio = summary.activity_ratio_per_type[otype]
        print(f"  type {otype}: {count} objects, {summary.events_per_type[otype]} events, "
              f"activity ratio {float(ratio):.3f}")
    for activity, count in sorted(summary.events_per_activity.items()):
        print(f"  activity {activity}: {count} events")
    return 0


def _summary_headline(summary: LogSummary) -> str:
    return (f"{summary.event_count} events, {summary.object_count} objects, "
            f"{summary.type_count} object types")


def _build_pipeline(args) -> FilterPipeline:
    ordered = getattr(args, "ordered_steps", None) or []
    if args.pipeline:
        if ordered:
            raise _UsageError("--pipeline cannot be combined with step flags")
        try:
            text = Path(args.pipeline).read_text()
        except OSError as exc:
            raise _UsageError(f"cannot read pipeline file: {exc}") from None
        return FilterPipeline.from_json(text)

    kinds = [kind for kind, _ in ordered]
    if "OE1" in kinds and "OE2" in kinds:
        # Merge into the essential-or-frequent step at the earlier position.
        count = next(value for kind, value in ordered if kind == "OE1")
        merged = []
        placed = False
        for kind, value in ordered:
            if kind in ("OE1", "OE2"):
                if not placed:
                    merged.append(("OE3", count))
                    placed = True
                continue
            merged.append((kind, value))
        ordered = merged

    steps = []
    for kind, value in ordered:
        step_cls = STEP_CLASSES[kind]
        try:
            if value is None:
                step = step_cls()
            elif kind in ("OTF3", "OA_RATIO"):
                step = step_cls(r=value)
            else:
                step = step_cls(n=value)
            step._validate_params()
        except ValueError as exc:
            raise _UsageError(f"{kind}: {exc}") from None
        steps.append(step)
    return FilterPipeline(steps)


def _cmd_filter(args) -> int:
    if Path(args.output).resolve() == Path(args.input).resolve():
        raise _UsageError("output path must differ from the input path")
    log = _load(args.input)
    pipeline = _build_pipeline(args)
    try:
        filtered, report = pipeline.apply(log)
    except PipelineError as exc:
        raise _UsageError(str(exc)) from None
    ocel_io.write_ocel_file(filtered, args.output)
    if args.json:
        print(json.dumps(report.to_dict(), indent=1))
    else:
        _print_diff(report)
        print(f"wrote {args.output}")
    return 0


def _print_diff(report: DiffReport) -> None:
    if not len(report):
        print("no filter steps; log written unchanged")
        return
    for entry in report:
        parts = []
        for dimension, label in (("events", "events"), ("objects", "objects"),
                                 ("object_types", "types"), ("relations", "relations")):
            before = entry.before.dimension(dimension)
            after = entry.after.dimension(dimension)
            parts.append(f"{label} {before} -> {after} ({entry.retention_percent(dimension)}%)")
        print(f"step {entry.label}: " + ", ".join(parts))


def _out_dir(args) -> Path:
    chosen = args.out_dir or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_sample(args) -> int:
    log = _load(args.input)
    stem = Path(args.input).stem
    out_dir = _out_dir(args)
    strategy = Strategy(args.strategy)

    if strategy is Strategy.CONNECTED:
        partition = connected_event_samples(log)
        manifest = {"strategy": strategy.value, "blocks": []}
        for index, block in enumerate(partition.blocks):
            name = f"{stem}.block{index:03d}.jsonocel"
            ocel_io.write_ocel_file(partition.block_log(index), out_dir / name)
            manifest["blocks"].append({"file": name, "events": len(block)})
        manifest_path = out_dir / f"{stem}.manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=1) + "\n")
        sizes = ", ".join(str(len(b)) for b in partition.blocks)
        print(f"{len(partition)} connected samples (sizes: {sizes}); manifest at {manifest_path}")
        return 0

    if args.k is None:
        raise _UsageError(f"--k is required for strategy {strategy.value!r}")
    try:
        sampled = sample(log, SampleSpec(strategy=strategy, k=args.k, seed=args.seed))
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    out_path = out_dir / f"{stem}.sample.jsonocel"
    ocel_io.write_ocel_file(sampled, out_path)
    print(f"wrote {out_path}: {_summary_headline(summarize(sampled))}")
    return 0


def _cmd_flatten(args) -> int:
    log = _load(args.input)
    try:
        flat = ocel_io.flatten(log, args.otype)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    data = ocel_io.write_flat_csv(flat) if args.format == "csv" else ocel_io.write_flat_json(flat)
    Path(args.output).write_bytes(data)
    print(f"wrote {args.output}: {flat.case_count()} cases, {flat.total_rows()} rows")
    return 0


def _cmd_generate(args) -> int:
    try:
        params = GenParams(
            orders=args.orders,
            items_per_order=tuple(args.items),
            deliveries_per_order=tuple(args.deliveries),
            global_object_rate=args.global_object_rate,
            singleton_rate=args.singleton_rate,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    log = generate_log(params)
    report = validate(log)
    if not report.ok:
        raise OcelError(f"generated log failed validation: {report.violations[0].message}")
    ocel_io.write_ocel_file(log, args.output)
    print(f"wrote {args.output}: {_summary_headline(summarize(log))}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    static_dir = args.static_dir
    if static_dir is None:
        default = Path("frontend") / "dist"
        static_dir = default if default.is_dir() else None
    config = ServiceConfig(
        session_ttl=args.session_ttl,
        max_snapshots=args.max_snapshots,
        max_upload_bytes=args.max_upload_mb * 1024 * 1024,
        static_dir=Path(static_dir) if static_dir else None,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    entrypoint()
