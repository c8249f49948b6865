"""Pipeline orchestration and report shapes.

analyze_package runs ingest → metrics → classify (plus dependency
resolution and auditing when a registry / advisory database is given)
and returns a PackageReport.  scan_corpus fans that out over a corpus
directory, one package per subdirectory, and reduces to a CorpusSummary.

Reports serialize to a stable JSON shape; `summarize` consumes those
dicts, so a results.jsonl file round-trips into the identical summary.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .advisories import AdvisoryDatabase, VulnerabilityReport, audit, load_advisories
from .classify import Classification, Label, Thresholds, classify, load_thresholds
from .depgraph import DependencyGraph, DepNode, RegistryIndex, resolve_closure
from .errors import NoMeasurableSource, PkgTriageError
from .ingest import load_package
from .metrics import FileMetrics, MetricsConfig, PackageMetrics, analyze_source, package_metrics

SCHEMA_VERSION = 1


@dataclass(slots=True)
class PackageReport:
    name: str
    version: str
    metrics: PackageMetrics
    classification: Classification
    warnings: list[str]
    graph: DependencyGraph | None = None
    dependency_count: int | None = None
    count_mode: str = "name-version"
    vulnerabilities: VulnerabilityReport | None = None

    @property
    def label(self) -> Label:
        return self.classification.label


def _file_warnings(files: tuple[FileMetrics, ...]) -> list[str]:
    notes = []
    for fm in files:
        for err in fm.recovered_errors:
            notes.append(f"{fm.path}:{err.line}: {err.message}")
    return notes


def analyze_package(
    path: str | Path,
    thresholds: Thresholds = Thresholds(),
    config: MetricsConfig = MetricsConfig(),
    registry: RegistryIndex | None = None,
    advisories: AdvisoryDatabase | None = None,
    count_mode: str = "name-version",
) -> PackageReport:
    """Full single-package pipeline.

    Raises NoMeasurableSource when filtering leaves no file with any
    code in it; such packages cannot be classified meaningfully.
    """
    source = load_package(path)
    files = [analyze_source(sf.text, sf.relpath, config) for sf in source.files]
    pm = package_metrics(files)
    if pm.measurable_file_count == 0:
        raise NoMeasurableSource(
            f"{source.manifest.name}: no measurable source after filtering",
            name=source.manifest.name,
            version=source.manifest.version,
        )
    classification = classify(pm, thresholds, config)
    report = PackageReport(
        name=source.manifest.name,
        version=source.manifest.version,
        metrics=pm,
        classification=classification,
        warnings=list(source.warnings) + _file_warnings(pm.files),
    )
    if registry is not None:
        graph = resolve_closure(
            source.manifest.name, source.manifest.version, source.manifest.dependencies, registry
        )
        report.graph = graph
        report.count_mode = count_mode
        report.dependency_count = graph.transitive_count(count_mode)
        for miss in graph.unresolved:
            report.warnings.append(
                f"unresolved dependency {miss.name}@{miss.range_text}"
                f" (via {miss.required_by.spec}): {miss.reason}"
            )
        if advisories is not None:
            report.vulnerabilities = audit(graph, advisories)
    return report


def report_to_dict(report: PackageReport, config: MetricsConfig = MetricsConfig()) -> dict:
    """Stable JSON shape for one analyzed package."""
    pm = report.metrics
    data: dict = {
        "schema": SCHEMA_VERSION,
        "name": report.name,
        "version": report.version,
        "status": "ok",
        "label": report.label.value,
        "metrics": {
            "loc": pm.total_loc,
            "cyclomatic": pm.total_cyclomatic,
            "functions": pm.total_functions,
            "files": len(pm.files),
            "measurable_files": pm.measurable_file_count,
            "avg_cyclomatic_per_file": pm.avg_cyclomatic_per_file,
            "external_imports": pm.external_import_count(config),
            "external_packages": list(pm.external_packages(config)),
        },
        "trace": [
            {"check": c.check, "value": c.value, "limit": c.limit, "passed": c.passed}
            for c in report.classification.trace
        ],
        "files": [
            {"path": f.path, "loc": f.loc, "cyclomatic": f.cyclomatic, "functions": f.functions}
            for f in pm.files
        ],
        "warnings": list(report.warnings),
    }
    if report.dependency_count is not None and report.graph is not None:
        data["dependencies"] = {
            "transitive": report.dependency_count,
            "mode": report.count_mode,
            "unresolved": [
                {"name": u.name, "range": u.range_text, "via": u.required_by.spec, "reason": u.reason}
                for u in report.graph.unresolved
            ],
        }
    if report.vulnerabilities is not None:
        data["vulnerabilities"] = {
            "total": report.vulnerabilities.total,
            "by_severity": report.vulnerabilities.by_severity,
            "worst": report.vulnerabilities.worst,
        }
    return data


# -- corpus scanning -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ScanOptions:
    thresholds_file: str | None = None
    registry_dir: str | None = None
    advisories_file: str | None = None
    count_mode: str = "name-version"
    count_nullish: bool = True
    builtins_are_external: bool = True

    def thresholds(self) -> Thresholds:
        return load_thresholds(self.thresholds_file) if self.thresholds_file else Thresholds()

    def metrics_config(self) -> MetricsConfig:
        return MetricsConfig(
            count_nullish=self.count_nullish, builtins_are_external=self.builtins_are_external
        )


def _scan_one(job: tuple[str, str, ScanOptions]) -> dict:
    """Worker body: analyze one package directory into a JSON-ready dict.

    Never raises — scan keeps going whatever a single package does.
    """
    pkg_dir, rel_name, opts = job
    try:
        registry = RegistryIndex(opts.registry_dir) if opts.registry_dir else None
        advisories = load_advisories(opts.advisories_file) if opts.advisories_file else None
        report = analyze_package(
            pkg_dir,
            thresholds=opts.thresholds(),
            config=opts.metrics_config(),
            registry=registry,
            advisories=advisories,
            count_mode=opts.count_mode,
        )
        data = report_to_dict(report, opts.metrics_config())
        data["path"] = rel_name
        return data
    except NoMeasurableSource as exc:
        return {
            "schema": SCHEMA_VERSION,
            "name": exc.name or rel_name,
            "version": exc.version or "",
            "status": "no-measurable-source",
            "path": rel_name,
            "warnings": [str(exc)],
        }
    except PkgTriageError as exc:
        return {
            "schema": SCHEMA_VERSION,
            "name": rel_name,
            "version": "",
            "status": "failed",
            "path": rel_name,
            "error": f"{type(exc).__name__}: {exc}",
        }


def scan_corpus(root: str | Path, jobs: int = 1, options: ScanOptions = ScanOptions()) -> list[dict]:
    """Analyze every package subdirectory under root; order-independent.

    Results come back sorted by subdirectory name so that the output is
    identical whatever the worker count or completion order.
    """
    rootp = Path(root)
    subdirs = sorted(p for p in rootp.iterdir() if p.is_dir())
    jobs_args = [(str(p), p.name, options) for p in subdirs]
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_one, jobs_args))
    else:
        results = [_scan_one(job) for job in jobs_args]
    return sorted(results, key=lambda r: r["path"])


LABELS = tuple(label.value for label in Label)


@dataclass(frozen=True, slots=True)
class CorpusSummary:
    total: int
    analyzed: int
    label_counts: dict[str, int]
    label_percents: dict[str, float]
    no_source: tuple[str, ...]
    failed: tuple[tuple[str, str], ...]
    vulnerabilities_by_label: dict[str, dict[str, float]] | None

    def to_dict(self) -> dict:
        data = {
            "total": self.total,
            "analyzed": self.analyzed,
            "labels": {
                label: {"count": self.label_counts[label], "percent": self.label_percents[label]}
                for label in LABELS
            },
            "no_source": list(self.no_source),
            "failed": [{"package": name, "error": err} for name, err in self.failed],
        }
        if self.vulnerabilities_by_label is not None:
            data["vulnerabilities_by_label"] = self.vulnerabilities_by_label
        return data


def summarize(records: list[dict]) -> CorpusSummary:
    """Reduce per-package records (parsed results.jsonl lines) to a summary."""
    ok = [r for r in records if r.get("status") == "ok"]
    no_source = tuple(r.get("name") or r["path"] for r in records if r.get("status") == "no-measurable-source")
    failed = tuple(
        (r.get("name") or r["path"], r.get("error", "unknown error"))
        for r in records
        if r.get("status") == "failed"
    )
    label_counts = {label: 0 for label in LABELS}
    for r in ok:
        label_counts[r["label"]] += 1
    analyzed = len(ok)
    label_percents = {
        label: (100.0 * count / analyzed if analyzed else 0.0)
        for label, count in label_counts.items()
    }
    vuln_by_label: dict[str, dict[str, float]] | None = None
    if any("vulnerabilities" in r for r in ok):
        vuln_by_label = {}
        for label in LABELS:
            totals = [
                r["vulnerabilities"]["total"]
                for r in ok
                if r["label"] == label and "vulnerabilities" in r
            ]
            if totals:
                vuln_by_label[label] = {
                    "packages": len(totals),
                    "total": sum(totals),
                    "max": max(totals),
                    "mean": sum(totals) / len(totals),
                }
    return CorpusSummary(
        total=len(records),
        analyzed=analyzed,
        label_counts=label_counts,
        label_percents=label_percents,
        no_source=no_source,
        failed=failed,
        vulnerabilities_by_label=vuln_by_label,
    )


def render_summary_lines(summary: CorpusSummary) -> list[str]:
    """Human-readable lines for a corpus summary, one per printable fact."""
    lines = [f"packages: {summary.total} ({summary.analyzed} analyzed)"]
    for label in LABELS:
        count = summary.label_counts[label]
        pct = summary.label_percents[label]
        lines.append(f"  {label}: {count} ({pct:.1f}%)")
    if summary.no_source:
        lines.append(f"no measurable source: {', '.join(summary.no_source)}")
    for name, err in summary.failed:
        lines.append(f"failed: {name}: {err}")
    if summary.vulnerabilities_by_label:
        lines.append("vulnerabilities by label:")
        for label, row in summary.vulnerabilities_by_label.items():
            lines.append(
                f"  {label}: total {row['total']:g} across {row['packages']:g} packages"
                f" (max {row['max']:g}, mean {row['mean']:.2f})"
            )
    return lines


def write_results(records: list[dict], path: str | Path) -> None:
    lines = [json.dumps(r, sort_keys=True) for r in records]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_results(path: str | Path) -> list[dict]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


# -- tree rendering --------------------------------------------------------------

_SEVERITY_COLORS = {"low": "36", "moderate": "33", "high": "35", "critical": "31"}


def _paint(text: str, code: str, color: bool) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if color else text


def render_tree(
    graph: DependencyGraph,
    vulnerabilities: VulnerabilityReport | None = None,
    max_depth: int = 5,
    color: bool = False,
    root_label: str | None = None,
) -> list[str]:
    """Indented dependency tree with advisory and cycle annotations.

    Every (name, version) node expands once; later sightings render with
    a repeat marker (cycles are the self-referential case of that) so
    the output stays finite and scannable.
    """
    by_node: dict[DepNode, list[str]] = {}
    if vulnerabilities is not None:
        for match in vulnerabilities.matches:
            by_node.setdefault(match.node, []).append(
                _paint(f"{match.advisory.id}({match.advisory.severity})",
                       _SEVERITY_COLORS[match.advisory.severity], color)
            )

    def annotate(node: DepNode) -> str:
        notes = by_node.get(node, [])
        return " ⚠ " + ", ".join(notes) if notes else ""

    lines: list[str] = []
    root_suffix = f" [{root_label}]" if root_label else ""
    lines.append(_paint(graph.root.spec, "1", color) + root_suffix + annotate(graph.root))
    expanded: set[DepNode] = set()
    stack: set[DepNode] = set()

    def walk(node: DepNode, prefix: str, depth: int) -> None:
        expanded.add(node)
        stack.add(node)
        children = graph.children.get(node, ())
        for i, child in enumerate(children):
            last = i == len(children) - 1
            branch = "└── " if last else "├── "
            extension = "    " if last else "│   "
            if child in stack:
                marker = _paint("(cycle)", "2", color)
                lines.append(f"{prefix}{branch}{child.spec} {marker}")
                continue
            if child in expanded:
                marker = _paint("(repeat)", "2", color)
                lines.append(f"{prefix}{branch}{child.spec} {marker}{annotate(child)}")
                continue
            if depth >= max_depth:
                lines.append(f"{prefix}{branch}{child.spec} …")
                continue
            lines.append(f"{prefix}{branch}{child.spec}{annotate(child)}")
            walk(child, prefix + extension, depth + 1)
        stack.discard(node)

    walk(graph.root, "", 1)
    return lines
