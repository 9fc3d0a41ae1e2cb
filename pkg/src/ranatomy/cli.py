"""Command-line interface.

Subcommands:
    extract    scan corpus roots and run the per-file pipeline
    summarize  aggregate one run's records into summary tables (CSV/JSON)
    compare    statistical comparison of two runs
    failures   print a run's failure breakdown
    lint       print style findings (spans included) for individual files

Exit codes: 0 success, 1 usage error, 2 hard I/O error. The environment
variable RANATOMY_JOBS supplies the default for --jobs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tarfile
import zipfile
from pathlib import Path

from . import SCHEMA_VERSION, __version__
from .corpus import load_index, load_records, run_corpus, scan
from .dataflow import build_dataflow
from .features import extract_features
from .report import ComparisonReport, SummaryTables, compare, sanitize_json, summarize
from .syntax import classify_parse_failure, parse
from .syntax.tokens import decode_source


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors must exit 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _env_jobs() -> int:
    raw = os.environ.get("RANATOMY_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ranatomy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_extract = sub.add_parser("extract", help="run the pipeline over corpus roots")
    p_extract.add_argument("roots", nargs="+", help="directories to scan")
    p_extract.add_argument("--label", required=True, help="dataset label")
    p_extract.add_argument("--out", required=True, help="output directory")
    p_extract.add_argument(
        "--jobs", type=int, default=_env_jobs(), help="worker processes"
    )
    p_extract.add_argument(
        "--archives", action="store_true", help="descend into .zip/.tar.gz files"
    )
    p_extract.add_argument(
        "--resume", action="store_true", help="keep compatible existing records"
    )
    p_extract.set_defaults(func=cmd_extract)

    p_summ = sub.add_parser("summarize", help="aggregate a run into tables")
    p_summ.add_argument("dir", help="extract output directory")
    p_summ.add_argument("--out", required=True, help="table output directory")
    p_summ.add_argument(
        "--format", choices=("csv", "json", "both"), default="both"
    )
    p_summ.set_defaults(func=cmd_summarize)

    p_cmp = sub.add_parser("compare", help="compare two runs statistically")
    p_cmp.add_argument("dir_a", help="first extract output directory")
    p_cmp.add_argument("dir_b", help="second extract output directory")
    p_cmp.add_argument("--out", required=True, help="report output directory")
    p_cmp.add_argument(
        "--k", type=int, default=None, help="Bonferroni test count override"
    )
    p_cmp.set_defaults(func=cmd_compare)

    p_fail = sub.add_parser("failures", help="print a run's failure breakdown")
    p_fail.add_argument("dir", help="extract output directory")
    p_fail.set_defaults(func=cmd_failures)

    p_lint = sub.add_parser("lint", help="print findings for individual files")
    p_lint.add_argument("files", nargs="+", help="R source files")
    p_lint.set_defaults(func=cmd_lint)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except (OSError, tarfile.TarError, zipfile.BadZipFile) as exc:
        print(f"ranatomy: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ranatomy: error: {exc}", file=sys.stderr)
        return 1


def cmd_extract(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise ValueError("--jobs must be at least 1")
    manifest = scan(args.roots, args.label, include_archives=args.archives)
    index = run_corpus(
        manifest, args.out, jobs=args.jobs, resume=args.resume
    )
    counts = index["counts"]
    parse_failed = sum(counts["parse_failed"].values())
    print(
        f"{args.label}: {counts['total']} files, {counts['ok']} ok, "
        f"{parse_failed} parse failed, {counts['dataflow_failed']} dataflow failed"
    )
    return 0


def _dump_json(payload: dict, target: Path) -> None:
    target.write_text(
        json.dumps(sanitize_json(payload), ensure_ascii=False, indent=1) + "\n",
        encoding="utf-8",
    )


def _write_csv(target: Path, header: list[str], rows: list[list]) -> None:
    with open(target, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _write_summary_csvs(tables: SummaryTables, out: Path) -> None:
    data = tables.to_dict()
    _write_csv(
        out / "summary_totals.csv",
        ["counter", "total", "mean_per_ok_file"],
        [[k, data["totals"][k], data["means"][k]] for k in data["totals"]],
    )
    _write_csv(
        out / "per_category.csv",
        ["category", "counter", "total", "mean_per_ok_file"],
        [
            [cat, key, block["totals"][key], block["means"][key]]
            for cat, block in data["per_category"].items()
            for key in block["totals"]
        ],
    )
    _write_csv(
        out / "operator_matrix.csv",
        ["operator_set", "file_count"],
        [[k, v] for k, v in data["operator_combination_matrix"].items()],
    )
    _write_csv(
        out / "top_functions.csv",
        ["name", "presence_pct", "calls"],
        [[r["name"], r["presence_pct"], r["calls"]] for r in data["top_functions"]],
    )
    _write_csv(
        out / "top_packages.csv",
        ["name", "presence_pct"],
        [[r["name"], r["presence_pct"]] for r in data["top_packages"]],
    )
    _write_csv(
        out / "size_distribution.csv",
        ["series", "percentile", "value"],
        [
            [series, point, value]
            for series, points in data["size_distribution"].items()
            for point, value in points.items()
        ],
    )
    _write_csv(
        out / "funnel.csv",
        ["key", "count"],
        [
            [key, value]
            for key, value in _flatten_funnel(data["funnel"]).items()
        ],
    )


def _flatten_funnel(funnel: dict) -> dict[str, int]:
    flat: dict[str, int] = {}
    for key, value in funnel.items():
        if isinstance(value, dict):
            for sub, count in value.items():
                flat[f"{key}.{sub}"] = count
        else:
            flat[key] = value
    return flat


def cmd_summarize(args: argparse.Namespace) -> int:
    index = load_index(args.dir)
    tables = summarize(load_records(args.dir), index)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format in ("json", "both"):
        _dump_json(
            {"schema_version": SCHEMA_VERSION, **tables.to_dict()},
            out / "summary.json",
        )
    if args.format in ("csv", "both"):
        _write_summary_csvs(tables, out)
    print(
        f"summarized {tables.file_counts['total']} files "
        f"({tables.file_counts['ok']} ok) into {out}"
    )
    return 0


_COMPARE_COLUMNS = [
    "feature", "framing", "testable", "a_with", "a_total", "b_with",
    "b_total", "a_mean", "b_mean", "u", "test", "p_value", "p_adjusted",
    "k", "effect", "ci_low", "ci_high", "effect_word",
]


def _write_compare_csv(report: ComparisonReport, target: Path) -> None:
    rows = []
    for row in report.rows:
        sanitized = sanitize_json(row)
        rows.append(
            ["" if sanitized.get(col) is None else sanitized.get(col)
             for col in _COMPARE_COLUMNS]
        )
    _write_csv(target, list(_COMPARE_COLUMNS), rows)


def cmd_compare(args: argparse.Namespace) -> int:
    label_a = load_index(args.dir_a).get("dataset_label", Path(args.dir_a).name)
    label_b = load_index(args.dir_b).get("dataset_label", Path(args.dir_b).name)
    report = compare(
        list(load_records(args.dir_a)),
        list(load_records(args.dir_b)),
        label_a=label_a,
        label_b=label_b,
        k=args.k,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(
        {"schema_version": SCHEMA_VERSION, **report.to_dict()},
        out / "comparison.json",
    )
    _write_compare_csv(report, out / "comparison.csv")
    print(
        f"compared {label_a} vs {label_b}: {len(report.rows)} rows, "
        f"k={report.k}, {len(report.notes)} notes"
    )
    return 0


def cmd_failures(args: argparse.Namespace) -> int:
    counts = load_index(args.dir)["counts"]
    print(f"total: {counts['total']}")
    print(f"ok: {counts['ok']}")
    for category, count in counts["parse_failed"].items():
        print(f"{category}: {count}")
    print(f"DataflowFailed: {counts['dataflow_failed']}")
    return 0


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def cmd_lint(args: argparse.Namespace) -> int:
    for path in args.files:
        source = Path(path).read_bytes()
        text = decode_source(source).text
        outcome = parse(source)
        if outcome.ok is None:
            failure = classify_parse_failure(source, outcome.failure)
            print(
                f"{path}: parse failed ({failure.category}): "
                f"{failure.message} at line {failure.line}"
            )
            continue
        graph = build_dataflow(outcome.ok)
        lint = extract_features(outcome.ok, graph, source).lint
        if lint.mixed_assignment_operators:
            ops = ", ".join(lint.mixed_operators)
            print(f"{path}: mixed assignment operators: {ops}")
        for span in lint.generalized_constant_conditions:
            print(
                f"{path}: constant condition at [{span[0]}..{span[1]}) "
                f"line {_line_of(text, span[0])}"
            )
        for name, span in lint.strict_mode_flags:
            print(
                f"{path}: strict-mode call {name} at [{span[0]}..{span[1]}) "
                f"line {_line_of(text, span[0])}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
