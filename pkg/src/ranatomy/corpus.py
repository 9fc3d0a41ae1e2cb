"""Corpus runner: discover R files, run the per-file pipeline, persist results.

Discovery keeps only files ending in `.r` or `.R`, optionally reaching into
`.zip` / `.tar.gz` archives (members are addressed as `<archive>!<member>`).
Each file runs parse → failure-classification-or-dataflow → census; every
stage failure is captured in the file's record rather than aborting the run.

Output layout under the chosen directory:

    records/<sha1(path)[:16]>.json   one record per file
    index.json                       funnel totals, label, versions
    failures.csv                     path, failure category, message

Records are written by the parent process in manifest order, so output bytes
are identical for any worker count. Per-stage timings stay in memory only.
"""

from __future__ import annotations

import csv
import hashlib
import json
import tarfile
import time
import zipfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from . import SCHEMA_VERSION, __version__
from .dataflow import ResourceLimitError, build_dataflow
from .features import FeatureReport, extract_features
from .syntax import FailureCategory, FailureRecord, classify_parse_failure, parse
from .syntax.ast import node_count

DEFAULT_TIME_BUDGET = 60.0
DEFAULT_NODE_CAP = 2_000_000
ARCHIVE_SEP = "!"
_ARCHIVE_SUFFIXES = (".zip", ".tar.gz", ".tgz")


class Category(str, Enum):
    DEFAULT = "Default"
    EXAMPLE = "Example"
    TEST = "Test"


class Status(str, Enum):
    OK = "Ok"
    PARSE_FAILED = "ParseFailed"
    DATAFLOW_FAILED = "DataflowFailed"


@dataclass(slots=True)
class CorpusManifest:
    roots: list[str]
    files: list[tuple[str, str, int]]  # (path, category, bytes; -1 unreadable)
    dataset_label: str

    def __len__(self) -> int:
        return len(self.files)


@dataclass(slots=True)
class FileRecord:
    path: str
    category: str
    status: Status
    failure: FailureRecord | None = None
    reason: str | None = None
    report: FeatureReport | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        failure = None
        if self.failure is not None:
            failure = {
                "category": self.failure.category,
                "message": self.failure.message,
                "line": self.failure.line,
                "col": self.failure.col,
                "span": list(self.failure.span),
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "path": self.path,
            "category": self.category,
            "status": self.status.value,
            "failure": failure,
            "reason": self.reason,
            "report": self.report.to_dict() if self.report else None,
        }


# -- discovery ----------------------------------------------------------------


def _is_r_file(name: str) -> bool:
    return name.endswith(".r") or name.endswith(".R")


def _strip_archive_suffix(name: str) -> str:
    for suffix in _ARCHIVE_SUFFIXES:
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name


def categorize_file(path: str, package_name: str | None = None) -> Category:
    """Example beats Test beats Default.

    Example: any path segment contains "example" (case-insensitive).
    Test: any segment or the file stem starts with "test" once the package
    name is removed, so a package called e.g. testthat does not mark every
    one of its files as tests.
    """
    segments = [s for s in path.replace(ARCHIVE_SEP, "/").split("/") if s]
    if any("example" in seg.lower() for seg in segments):
        return Category.EXAMPLE
    stem = Path(segments[-1]).stem if segments else ""
    pkg = (package_name or "").lower()
    for seg in segments[:-1] + [stem]:
        cleaned = seg.lower()
        if pkg:
            cleaned = cleaned.replace(pkg, "")
        if cleaned.startswith("test"):
            return Category.TEST
    return Category.DEFAULT


def _package_name_for(file_path: Path, root: Path) -> str | None:
    """Nearest ancestor holding a DESCRIPTION file, else the top directory."""
    directory = file_path.parent
    while True:
        if (directory / "DESCRIPTION").is_file():
            return directory.name
        if directory == root or directory == directory.parent:
            break
        directory = directory.parent
    try:
        relative = file_path.relative_to(root)
    except ValueError:
        return root.name
    return relative.parts[0] if len(relative.parts) > 1 else root.name


def _archive_package_name(members: set[str], member: str, default: str) -> str:
    parts = member.split("/")[:-1]
    while parts:
        if "/".join(parts + ["DESCRIPTION"]) in members:
            return parts[-1]
        parts.pop()
    return default


def _scan_zip(archive: Path, rel: str) -> Iterator[tuple[str, str, int]]:
    with zipfile.ZipFile(archive) as zf:
        names = set(zf.namelist())
        default_pkg = _strip_archive_suffix(archive.name)
        for info in zf.infolist():
            if info.is_dir() or not _is_r_file(info.filename):
                continue
            pkg = _archive_package_name(names, info.filename, default_pkg)
            inner = f"{rel}{ARCHIVE_SEP}{info.filename}"
            path = f"{archive}{ARCHIVE_SEP}{info.filename}"
            yield path, categorize_file(inner, pkg).value, info.file_size


def _scan_tar(archive: Path, rel: str) -> Iterator[tuple[str, str, int]]:
    with tarfile.open(archive, "r:*") as tf:
        members = [m for m in tf.getmembers() if m.isfile()]
        names = {m.name for m in members}
        default_pkg = _strip_archive_suffix(archive.name)
        for member in members:
            if not _is_r_file(member.name):
                continue
            pkg = _archive_package_name(names, member.name, default_pkg)
            inner = f"{rel}{ARCHIVE_SEP}{member.name}"
            path = f"{archive}{ARCHIVE_SEP}{member.name}"
            yield path, categorize_file(inner, pkg).value, member.size


def scan(
    roots: Iterable[str | Path],
    label: str,
    include_archives: bool = False,
) -> CorpusManifest:
    """Deterministic manifest of all R files under the given roots."""
    entries: list[tuple[str, str, int]] = []
    seen: set[str] = set()
    root_list: list[str] = []
    for root in roots:
        root = Path(root)
        root_list.append(str(root))
        if not root.is_dir():
            raise FileNotFoundError(f"corpus root is not a directory: {root}")
        for file_path in sorted(p for p in root.rglob("*") if p.is_file()):
            name = file_path.name
            # Categorize by the path inside the corpus so results do not
            # depend on where the corpus happens to live on disk.
            rel = str(file_path.relative_to(root))
            if _is_r_file(name):
                pkg = _package_name_for(file_path, root)
                try:
                    size = file_path.stat().st_size
                except OSError:
                    size = -1
                entry = (str(file_path), categorize_file(rel, pkg).value, size)
            elif include_archives and name.endswith(".zip"):
                entries.extend(
                    e for e in _scan_zip(file_path, rel) if e[0] not in seen
                )
                continue
            elif include_archives and name.endswith((".tar.gz", ".tgz")):
                entries.extend(
                    e for e in _scan_tar(file_path, rel) if e[0] not in seen
                )
                continue
            else:
                continue
            if entry[0] not in seen:
                entries.append(entry)
        seen.update(e[0] for e in entries)
    entries.sort(key=lambda e: e[0])
    return CorpusManifest(roots=root_list, files=entries, dataset_label=label)


def read_source(path: str) -> bytes:
    """Raw bytes of a corpus path, reaching into archives when addressed."""
    archive, sep, member = path.partition(ARCHIVE_SEP)
    if sep and Path(archive).is_file() and not Path(path).exists():
        if archive.endswith(".zip"):
            with zipfile.ZipFile(archive) as zf:
                return zf.read(member)
        with tarfile.open(archive, "r:*") as tf:
            extracted = tf.extractfile(member)
            if extracted is None:
                raise FileNotFoundError(path)
            return extracted.read()
    return Path(path).read_bytes()


# -- per-file pipeline --------------------------------------------------------


def process_file(
    path: str,
    category: str = Category.DEFAULT.value,
    time_budget: float = DEFAULT_TIME_BUDGET,
    node_cap: int = DEFAULT_NODE_CAP,
) -> FileRecord:
    """parse → classify-or-dataflow → census, failures captured as status."""
    timings: dict[str, float] = {}
    started = time.monotonic()
    try:
        source = read_source(path)
    except Exception as exc:  # unreadable file: contained, not fatal
        return FileRecord(
            path, category, Status.DATAFLOW_FAILED,
            reason=f"ReadError: {exc}", timings=timings,
        )
    try:
        outcome = parse(source)
        timings["parse"] = time.monotonic() - started
        if outcome.ok is None:
            failure = classify_parse_failure(source, outcome.failure)
            return FileRecord(
                path, category, Status.PARSE_FAILED,
                failure=failure, timings=timings,
            )
        ast = outcome.ok
        if node_count(ast) > node_cap:
            raise ResourceLimitError(
                f"syntax tree exceeds node cap of {node_cap}"
            )
        if time.monotonic() - started > time_budget:
            raise TimeoutError(f"time budget of {time_budget}s exceeded")
        graph = build_dataflow(ast, node_cap=node_cap)
        timings["dataflow"] = time.monotonic() - started - timings["parse"]
        if time.monotonic() - started > time_budget:
            raise TimeoutError(f"time budget of {time_budget}s exceeded")
        report = extract_features(ast, graph, source)
        timings["extract"] = (
            time.monotonic() - started - timings["parse"] - timings["dataflow"]
        )
        return FileRecord(
            path, category, Status.OK, report=report, timings=timings,
        )
    except ResourceLimitError as exc:
        return FileRecord(
            path, category, Status.DATAFLOW_FAILED,
            reason=f"ResourceLimit: {exc}", timings=timings,
        )
    except TimeoutError as exc:
        return FileRecord(
            path, category, Status.DATAFLOW_FAILED,
            reason=f"TimeBudget: {exc}", timings=timings,
        )
    except Exception as exc:  # crash containment: one file only
        return FileRecord(
            path, category, Status.DATAFLOW_FAILED,
            reason=f"InternalError: {type(exc).__name__}: {exc}",
            timings=timings,
        )


def record_filename(path: str) -> str:
    return hashlib.sha1(path.encode("utf-8")).hexdigest()[:16] + ".json"


def _worker(task: tuple[str, str, float, int]) -> dict:
    path, category, time_budget, node_cap = task
    return process_file(path, category, time_budget, node_cap).to_dict()


def _dump_json(payload: dict, target: Path) -> None:
    target.write_text(
        json.dumps(payload, ensure_ascii=False, indent=1) + "\n",
        encoding="utf-8",
    )


def _empty_counts(total: int) -> dict:
    return {
        "total": total,
        "ok": 0,
        "parse_failed": {c.value: 0 for c in FailureCategory},
        "dataflow_failed": 0,
    }


def run_corpus(
    manifest: CorpusManifest,
    out_dir: str | Path,
    jobs: int = 1,
    resume: bool = False,
    time_budget: float = DEFAULT_TIME_BUDGET,
    node_cap: int = DEFAULT_NODE_CAP,
) -> dict:
    """Process every manifest file and persist records, index, failures.

    Returns the index payload. Results are folded in manifest order whatever
    the worker count, so repeated runs produce byte-identical output.
    """
    out = Path(out_dir)
    records_dir = out / "records"
    records_dir.mkdir(parents=True, exist_ok=True)

    plan: list[tuple[str, str, Path]] = [
        (path, category, records_dir / record_filename(path))
        for path, category, _ in manifest.files
    ]
    reused: dict[str, dict] = {}
    pending: list[tuple[str, str, float, int]] = []
    for path, category, record_path in plan:
        if resume and record_path.is_file():
            try:
                existing = json.loads(record_path.read_text(encoding="utf-8"))
            except (OSError, ValueError):
                existing = None
            if existing and existing.get("schema_version") == SCHEMA_VERSION:
                reused[path] = existing
                continue
        pending.append((path, category, time_budget, node_cap))

    counts = _empty_counts(len(manifest.files))
    failures: list[tuple[str, str, str]] = []
    index = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "dataset_label": manifest.dataset_label,
        "complete": False,
        "counts": counts,
    }

    def fold(record: dict, record_path: Path, fresh: bool) -> None:
        if fresh:
            _dump_json(record, record_path)
        status = record["status"]
        if status == Status.OK.value:
            counts["ok"] += 1
        elif status == Status.PARSE_FAILED.value:
            failure = record["failure"] or {}
            category = failure.get(
                "category", FailureCategory.RAW_SYNTAX_ERROR.value
            )
            counts["parse_failed"][category] = (
                counts["parse_failed"].get(category, 0) + 1
            )
            failures.append((record["path"], category, failure.get("message", "")))
        else:
            counts["dataflow_failed"] += 1
            failures.append(
                (record["path"], status, record.get("reason") or "")
            )

    try:
        fresh_results = _run_pending(pending, jobs)
        for path, category, record_path in plan:
            if path in reused:
                fold(reused[path], record_path, fresh=False)
            else:
                fold(next(fresh_results), record_path, fresh=True)
        index["complete"] = True
    finally:
        _dump_json(index, out / "index.json")
        _write_failures(out / "failures.csv", failures)
    return index


def _run_pending(
    pending: list[tuple[str, str, float, int]], jobs: int
) -> Iterator[dict]:
    if jobs <= 1 or len(pending) <= 1:
        return (_worker(task) for task in pending)
    executor = ProcessPoolExecutor(max_workers=jobs)

    def stream() -> Iterator[dict]:
        with executor:
            chunk = max(1, len(pending) // (jobs * 8))
            yield from executor.map(_worker, pending, chunksize=chunk)

    return stream()


def _write_failures(target: Path, rows: list[tuple[str, str, str]]) -> None:
    with open(target, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["path", "category", "message"])
        writer.writerows(rows)


def load_records(out_dir: str | Path) -> Iterator[dict]:
    """Stream stored records of a finished run, ordered by record path."""
    records_dir = Path(out_dir) / "records"
    if not records_dir.is_dir():
        raise FileNotFoundError(f"no records directory under {out_dir}")
    for record_path in sorted(records_dir.glob("*.json")):
        yield json.loads(record_path.read_text(encoding="utf-8"))


def load_index(out_dir: str | Path) -> dict:
    index_path = Path(out_dir) / "index.json"
    return json.loads(index_path.read_text(encoding="utf-8"))
