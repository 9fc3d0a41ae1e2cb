"""Aggregation of per-file records into summary tables and dataset comparisons.

Summaries fold records incrementally (no full-corpus retention of reports):
every census counter is flattened to a dotted key, summed across Ok files,
and averaged per Ok file. Open-ended name maps (calls by name, user-defined
operators) collapse to their value sums; the names themselves surface through
the ranked top-function / top-package tables instead.

Comparisons emit, for every flattened counter, both framings the literature
uses: a file-presence row (Fisher's exact test + phi on the 2x2 table) and a
per-file count row (Mann-Whitney + Cohen's d with CI). Bonferroni k defaults
to the number of testable rows; rows all-zero in both datasets are marked
untestable and excluded from k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .features import FeatureReport
from .stats import (
    CohensD,
    StatResult,
    bonferroni,
    cohens_d,
    effect_word,
    fisher_exact_2x2,
    mann_whitney,
    phi_coefficient,
)

OPEN_MAPS = frozenset({
    "fun_calls.by_name",
    "fun_defs.infix_defs",
    "fun_defs.replacement_defs",
    "fun_defs.operator_redefs",
})
PERCENTILE_POINTS = (1, 5, 10, 25, 50, 75, 90, 95, 99)
CATEGORIES = ("Default", "Example", "Test")


def percentile(values: list[float], q: float) -> float:
    """Nearest-rank percentile: the ceil(q/100 * n)-th smallest value."""
    if not values:
        raise ValueError("percentile of an empty sequence")
    if not 0 < q <= 100:
        raise ValueError(f"q must be in (0, 100], got {q}")
    ordered = sorted(values)
    rank = max(1, math.ceil(q / 100 * len(ordered)))
    return ordered[rank - 1]


def flatten_report(report: dict) -> dict[str, float]:
    """Dotted-key numeric view of a serialized FeatureReport.

    Booleans count as 0/1, lists by length, open name maps by value sum.
    """
    out: dict[str, float] = {}

    def walk(prefix: str, value) -> None:
        if isinstance(value, bool):
            out[prefix] = int(value)
        elif isinstance(value, (int, float)):
            out[prefix] = value
        elif isinstance(value, list):
            out[prefix] = len(value)
        elif isinstance(value, dict):
            if prefix in OPEN_MAPS:
                out[prefix] = sum(value.values())
            else:
                for key, child in value.items():
                    walk(f"{prefix}.{key}", child)

    for key, value in report.items():
        walk(key, value)
    return out


def canonical_counter_keys() -> list[str]:
    """Skeleton key set from an all-zero report; open keys join when seen."""
    return sorted(flatten_report(FeatureReport().to_dict()))


@dataclass(slots=True)
class SummaryTables:
    file_counts: dict = field(default_factory=dict)
    funnel: dict = field(default_factory=dict)
    totals: dict[str, float] = field(default_factory=dict)
    means: dict[str, float] = field(default_factory=dict)
    per_category: dict[str, dict] = field(default_factory=dict)
    operator_combination_matrix: dict[str, int] = field(default_factory=dict)
    top_functions: list[dict] = field(default_factory=list)
    top_packages: list[dict] = field(default_factory=list)
    size_distribution: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "file_counts": self.file_counts,
            "funnel": self.funnel,
            "totals": dict(sorted(self.totals.items())),
            "means": dict(sorted(self.means.items())),
            "per_category": self.per_category,
            "operator_combination_matrix": dict(
                sorted(self.operator_combination_matrix.items())
            ),
            "top_functions": self.top_functions,
            "top_packages": self.top_packages,
            "size_distribution": self.size_distribution,
        }


class _Fold:
    """Incremental accumulator for one record subset."""

    def __init__(self) -> None:
        self.files = 0
        self.ok = 0
        self.totals: dict[str, float] = {k: 0 for k in canonical_counter_keys()}

    def add(self, record: dict) -> dict[str, float] | None:
        self.files += 1
        report = record.get("report")
        if record.get("status") != "Ok" or report is None:
            return None
        self.ok += 1
        flat = flatten_report(report)
        for key, value in flat.items():
            self.totals[key] = self.totals.get(key, 0) + value
        return flat

    def means(self) -> dict[str, float]:
        if self.ok == 0:
            return {k: 0.0 for k in self.totals}
        return {k: v / self.ok for k, v in self.totals.items()}


def summarize(
    records: Iterable[dict],
    index: dict | None = None,
    top_n: int = 20,
) -> SummaryTables:
    """Deterministic corpus tables; per-file means over Ok files only."""
    overall = _Fold()
    by_category = {cat: _Fold() for cat in CATEGORIES}
    matrix: dict[str, int] = {}
    fn_files: dict[str, int] = {}
    fn_calls: dict[str, int] = {}
    pkg_files: dict[str, int] = {}
    sizes: dict[str, list[float]] = {"bytes": [], "lines": [], "max_line_length": []}

    for record in records:
        overall.add(record)
        category = record.get("category", "Default")
        by_category.setdefault(category, _Fold()).add(record)
        report = record.get("report")
        if record.get("status") != "Ok" or report is None:
            continue
        operator_set = report["assignments"]["operator_set"]
        if operator_set:
            key = ",".join(operator_set)
            matrix[key] = matrix.get(key, 0) + 1
        for name, count in report["fun_calls"]["by_name"].items():
            fn_files[name] = fn_files.get(name, 0) + 1
            fn_calls[name] = fn_calls.get(name, 0) + count
        for name in report["packages"]["loaded_names"]:
            pkg_files[name] = pkg_files.get(name, 0) + 1
        meta = report["metadata"]
        sizes["bytes"].append(meta["bytes"])
        sizes["lines"].append(meta["lines"])
        sizes["max_line_length"].append(meta["max_line_length"])

    ok = overall.ok
    pct = (lambda files: 100.0 * files / ok) if ok else (lambda files: 0.0)
    top_functions = [
        {"name": name, "presence_pct": pct(fn_files[name]), "calls": fn_calls[name]}
        for name in sorted(fn_calls, key=lambda n: (-fn_calls[n], n))[:top_n]
    ]
    top_packages = [
        {"name": name, "presence_pct": pct(pkg_files[name])}
        for name in sorted(pkg_files, key=lambda n: (-pkg_files[n], n))[:top_n]
    ]
    distribution = {
        series: (
            {
                ("median" if q == 50 else f"p{q}"): percentile(values, q)
                for q in PERCENTILE_POINTS
            }
            if values
            else {}
        )
        for series, values in sizes.items()
    }
    return SummaryTables(
        file_counts={"total": overall.files, "ok": ok},
        funnel=dict(index["counts"]) if index else {},
        totals=overall.totals,
        means=overall.means(),
        per_category={
            cat: {
                "files": fold.files,
                "ok": fold.ok,
                "totals": dict(sorted(fold.totals.items())),
                "means": dict(sorted(fold.means().items())),
            }
            for cat, fold in sorted(by_category.items())
        },
        operator_combination_matrix=matrix,
        top_functions=top_functions,
        top_packages=top_packages,
        size_distribution=distribution,
    )


# -- dataset comparison -------------------------------------------------------


@dataclass(slots=True)
class ComparisonReport:
    label_a: str
    label_b: str
    k: int
    rows: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "label_a": self.label_a,
            "label_b": self.label_b,
            "k": self.k,
            "rows": self.rows,
            "notes": self.notes,
        }


def _ok_flats(records: Iterable[dict]) -> list[dict[str, float]]:
    return [
        flatten_report(r["report"])
        for r in records
        if r.get("status") == "Ok" and r.get("report") is not None
    ]


def compare(
    records_a: Iterable[dict],
    records_b: Iterable[dict],
    label_a: str = "A",
    label_b: str = "B",
    k: int | None = None,
) -> ComparisonReport:
    """Per-feature presence and count comparisons between two datasets.

    Every flattened counter yields a presence row (Fisher + phi) and a count
    row (Mann-Whitney + Cohen's d). Rows that are all-zero in both datasets
    are untestable; Bonferroni k defaults to the number of testable rows.
    """
    flats_a = _ok_flats(records_a)
    flats_b = _ok_flats(records_b)
    if not flats_a or not flats_b:
        raise ValueError("compare requires Ok records on both sides")

    keys = set(canonical_counter_keys())
    for flat in flats_a + flats_b:
        keys.update(flat)
    features = sorted(keys)

    rows: list[dict] = []
    notes: list[str] = []
    for feature in features:
        xs = [flat.get(feature, 0) for flat in flats_a]
        ys = [flat.get(feature, 0) for flat in flats_b]
        testable = any(xs) or any(ys)
        if not testable:
            notes.append(f"{feature}: all-zero in both datasets, untestable")
        rows.append(_presence_row(feature, xs, ys, testable))
        rows.append(_count_row(feature, xs, ys, testable, notes))

    shared_k = k if k is not None else sum(1 for row in rows if row["testable"])
    for row in rows:
        row["k"] = shared_k
        row["p_adjusted"] = (
            bonferroni(row["p_value"], shared_k)
            if row["p_value"] is not None
            else None
        )
    return ComparisonReport(label_a, label_b, shared_k, rows, notes)


def _presence_row(
    feature: str, xs: list[float], ys: list[float], testable: bool
) -> dict:
    with_a = sum(1 for v in xs if v > 0)
    with_b = sum(1 for v in ys if v > 0)
    a, b = with_a, len(xs) - with_a
    c, d = with_b, len(ys) - with_b
    row = {
        "feature": feature,
        "framing": "presence",
        "testable": testable,
        "a_with": with_a,
        "a_total": len(xs),
        "b_with": with_b,
        "b_total": len(ys),
        "test": "FisherExact",
        "p_value": fisher_exact_2x2(a, b, c, d) if testable else None,
        "effect": phi_coefficient(a, b, c, d),
        "ci_low": None,
        "ci_high": None,
        "effect_word": None,
    }
    return row


def _count_row(
    feature: str,
    xs: list[float],
    ys: list[float],
    testable: bool,
    notes: list[str],
) -> dict:
    row = {
        "feature": feature,
        "framing": "count",
        "testable": testable,
        "a_mean": sum(xs) / len(xs),
        "b_mean": sum(ys) / len(ys),
        "test": "MannWhitney",
        "p_value": None,
        "u": None,
        "effect": None,
        "ci_low": None,
        "ci_high": None,
        "effect_word": None,
    }
    if not testable:
        return row
    u, p = mann_whitney(xs, ys)
    row["u"] = u
    row["p_value"] = p
    if len(xs) >= 2 and len(ys) >= 2:
        effect = cohens_d(xs, ys)
        row["effect"] = effect.d
        row["ci_low"] = effect.ci_low
        row["ci_high"] = effect.ci_high
        row["effect_word"] = (
            effect_word(effect.d) if math.isfinite(effect.d) else "infinite"
        )
        if not math.isfinite(effect.d):
            notes.append(f"{feature}: zero-variance unequal means, infinite d")
    else:
        notes.append(f"{feature}: a sample has fewer than 2 files, no Cohen's d")
    return row


def stat_result_for(row: dict) -> StatResult:
    """Typed view of one comparison row's statistics."""
    if row["framing"] == "presence":
        effect = {"phi": row["effect"]}
    else:
        effect = {
            "cohens_d": CohensD(
                row["effect"], row["ci_low"], row["ci_high"]
            ) if row["effect"] is not None else None
        }
    return StatResult(
        test=row["test"],
        p_value=row["p_value"] if row["p_value"] is not None else 1.0,
        p_adjusted=row["p_adjusted"] if row["p_adjusted"] is not None else 1.0,
        k=row["k"],
        effect=effect,
        effect_word=row["effect_word"] or "",
    )


def sanitize_json(obj):
    """Replace non-finite floats so emitted JSON stays standard-compliant."""
    if isinstance(obj, float) and not math.isfinite(obj):
        if math.isnan(obj):
            return "nan"
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {k: sanitize_json(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [sanitize_json(v) for v in obj]
    return obj
