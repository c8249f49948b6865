"""Command-line entry point.

Subcommands: analyze (one package), scan (a corpus directory), stats
(group comparison over scan results), evaluate (score against ground
truth), sample (survey sizing), convert-advisories (npm audit JSON to
the JSON-lines advisory format).

Exit codes: 0 success, 1 I/O and data-file failures, 2 package-shape
problems (missing/broken manifest, nothing measurable to classify).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .advisories import dump_advisories, from_npm_audit, load_advisories
from .classify import Thresholds, load_thresholds
from .depgraph import RegistryIndex
from .errors import (
    InvalidConfidence,
    IoFailure,
    MalformedAdvisory,
    MalformedManifest,
    MalformedRange,
    MissingManifest,
    MissingPackage,
    NoMeasurableSource,
)
from .metrics import MetricsConfig
from .report import (
    ScanOptions,
    analyze_package,
    read_results,
    render_tree,
    report_to_dict,
    scan_corpus,
    summarize,
    write_results,
    render_summary_lines,
)
from .stats import (
    bootstrap_significance,
    cochran_sample_size,
    compare_groups,
    evaluate,
    join_by_package,
)

STATS_METRICS = ("loc", "cyclomatic", "functions", "dependencies", "vulnerabilities")


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--thresholds", metavar="FILE", help="TOML/JSON threshold overrides")
    parser.add_argument("--registry", metavar="DIR", help="offline registry directory")
    parser.add_argument("--advisories", metavar="FILE", help="JSON-lines advisory database")
    parser.add_argument(
        "--count-mode",
        choices=("name-version", "name"),
        default="name-version",
        help="how transitive dependencies are counted",
    )
    parser.add_argument(
        "--ignore-builtins",
        action="store_true",
        help="treat Node core modules as non-external for the data-only rule",
    )
    parser.add_argument(
        "--no-count-nullish",
        action="store_true",
        help="do not count ?? as a branch point",
    )
    parser.add_argument("--json", action="store_true", help="emit machine-readable JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkgtriage",
        description="Classify npm packages as normal, trivial, or data-only from their source.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze one package directory or tarball")
    p_analyze.add_argument("path")
    _add_pipeline_flags(p_analyze)
    p_analyze.add_argument("--depth", type=int, default=5, help="dependency tree depth limit")
    p_analyze.add_argument("--no-color", action="store_true", help="disable ANSI colors")

    p_scan = sub.add_parser("scan", help="analyze every package subdirectory of a corpus")
    p_scan.add_argument("root")
    _add_pipeline_flags(p_scan)
    p_scan.add_argument("--output", default="results.jsonl", help="results JSON-lines path")
    p_scan.add_argument("--jobs", type=int, default=1, help="parallel worker count")

    p_stats = sub.add_parser("stats", help="compare a metric between label groups")
    p_stats.add_argument("results", help="results.jsonl from scan")
    p_stats.add_argument("--group", default="data-only", help="label forming the first group")
    p_stats.add_argument("--metric", choices=STATS_METRICS, default="dependencies")
    p_stats.add_argument("--method", choices=("auto", "exact", "asymptotic"), default="auto")
    p_stats.add_argument("--bootstrap", type=int, default=0, metavar="N", help="bootstrap iterations")
    p_stats.add_argument("--alpha", type=float, default=0.05)
    p_stats.add_argument("--seed", type=int, default=0)
    p_stats.add_argument("--json", action="store_true")

    p_eval = sub.add_parser("evaluate", help="score scan results against a truth CSV")
    p_eval.add_argument("results")
    p_eval.add_argument("truth", help="CSV with package,label columns")
    p_eval.add_argument("--json", action="store_true")

    p_sample = sub.add_parser("sample", help="Cochran sample size for a survey")
    p_sample.add_argument("--population", type=int, default=None)
    p_sample.add_argument("--confidence", type=float, default=0.90)
    p_sample.add_argument("--margin", type=float, default=0.05)
    p_sample.add_argument("--proportion", type=float, default=0.5)
    p_sample.add_argument("--json", action="store_true")

    p_conv = sub.add_parser("convert-advisories", help="convert npm audit JSON to advisory lines")
    p_conv.add_argument("audit_json")
    p_conv.add_argument("--output", help="write JSON-lines here instead of stdout")

    return parser


def _color_enabled(args: argparse.Namespace) -> bool:
    if getattr(args, "no_color", False) or "NO_COLOR" in os.environ:
        return False
    return sys.stdout.isatty()


def _metrics_config(args: argparse.Namespace) -> MetricsConfig:
    return MetricsConfig(
        count_nullish=not args.no_count_nullish,
        builtins_are_external=not args.ignore_builtins,
    )


def _thresholds(args: argparse.Namespace) -> Thresholds:
    return load_thresholds(args.thresholds) if args.thresholds else Thresholds()


def cmd_analyze(args: argparse.Namespace) -> int:
    registry = RegistryIndex(args.registry) if args.registry else None
    advisories = load_advisories(args.advisories) if args.advisories else None
    report = analyze_package(
        args.path,
        thresholds=_thresholds(args),
        config=_metrics_config(args),
        registry=registry,
        advisories=advisories,
        count_mode=args.count_mode,
    )
    data = report_to_dict(report, _metrics_config(args))
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
        return 0
    m = data["metrics"]
    print(f"{report.name}@{report.version}: {report.label.value}")
    print(
        f"  loc {m['loc']}  cyclomatic {m['cyclomatic']}  functions {m['functions']}"
        f"  files {m['measurable_files']}/{m['files']}  external imports {m['external_imports']}"
    )
    for entry in data["trace"]:
        mark = "pass" if entry["passed"] else "fail"
        print(f"  [{mark}] {entry['check']}: {entry['value']:g} (limit {entry['limit']:g})")
    if report.graph is not None:
        print(f"  transitive dependencies ({report.count_mode}): {report.dependency_count}")
        for line in render_tree(
            report.graph,
            report.vulnerabilities,
            max_depth=args.depth,
            color=_color_enabled(args),
            root_label=report.label.value,
        ):
            print("  " + line)
    if report.vulnerabilities is not None:
        v = data["vulnerabilities"]
        severities = ", ".join(f"{k} {c}" for k, c in v["by_severity"].items() if c)
        print(f"  vulnerabilities: {v['total']}" + (f" ({severities})" if severities else ""))
    for warning in report.warnings:
        print(f"  warning: {warning}")
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    options = ScanOptions(
        thresholds_file=args.thresholds,
        registry_dir=args.registry,
        advisories_file=args.advisories,
        count_mode=args.count_mode,
        count_nullish=not args.no_count_nullish,
        builtins_are_external=not args.ignore_builtins,
    )
    records = scan_corpus(args.root, jobs=args.jobs, options=options)
    write_results(records, args.output)
    summary = summarize(records)
    if args.json:
        print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
    else:
        for line in render_summary_lines(summary):
            print(line)
        print(f"results written to {args.output}")
    return 0


def _metric_values(records: list[dict], metric: str) -> list[tuple[str, float]]:
    pairs: list[tuple[str, float]] = []
    for rec in records:
        if rec.get("status") != "ok":
            continue
        if metric == "dependencies":
            section = rec.get("dependencies")
            if section is None:
                raise IoFailure("results lack dependency data; rerun scan with --registry")
            value = section["transitive"]
        elif metric == "vulnerabilities":
            section = rec.get("vulnerabilities")
            if section is None:
                raise IoFailure("results lack vulnerability data; rerun scan with --advisories")
            value = section["total"]
        else:
            value = rec["metrics"][metric]
        pairs.append((rec["label"], float(value)))
    return pairs


def cmd_stats(args: argparse.Namespace) -> int:
    records = read_results(args.results)
    labeled = _metric_values(records, args.metric)
    group = [v for label, v in labeled if label == args.group]
    rest = [v for label, v in labeled if label != args.group]
    if not group or not rest:
        raise IoFailure(
            f"need non-empty groups to compare; {args.group!r} has {len(group)}, rest has {len(rest)}"
        )
    comparison = compare_groups(group, rest, method=args.method)
    boot = None
    if args.bootstrap:
        small, large = (group, rest) if len(group) <= len(rest) else (rest, group)
        boot = bootstrap_significance(
            small, large, iterations=args.bootstrap, alpha=args.alpha, seed=args.seed
        )
    if args.json:
        data = {
            "metric": args.metric,
            "group": args.group,
            "n1": comparison.n1,
            "n2": comparison.n2,
            "u": comparison.u,
            "p_value": comparison.p_value,
            "method": comparison.method,
            "delta": comparison.delta,
            "magnitude": comparison.magnitude,
            "degenerate": comparison.degenerate,
        }
        if boot is not None:
            data["bootstrap"] = {
                "iterations": boot.iterations,
                "significant": boot.significant,
                "fraction": boot.fraction,
                "alpha": boot.alpha,
                "seed": boot.seed,
            }
        print(json.dumps(data, indent=2, sort_keys=True))
        return 0
    print(f"{args.metric}: {args.group} (n={comparison.n1}) vs rest (n={comparison.n2})")
    print(
        f"  U = {comparison.u:g}   p = {comparison.p_value:.6g} ({comparison.method})"
        f"   delta = {comparison.delta:.4f} ({comparison.magnitude})"
    )
    if comparison.degenerate:
        print("  note: all values identical in both groups; p pinned at 1.0")
    if boot is not None:
        print(
            f"  bootstrap: {boot.significant}/{boot.iterations} significant"
            f" at alpha={boot.alpha:g} → fraction {boot.fraction:.4f} (seed {boot.seed})"
        )
    return 0


def _read_truth(path: str) -> dict[str, str]:
    truth: dict[str, str] = {}
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "package" not in reader.fieldnames or "label" not in reader.fieldnames:
                raise IoFailure(f"{path}: truth file needs package,label columns")
            for row in reader:
                truth[row["package"]] = row["label"]
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if not truth:
        raise IoFailure(f"{path}: truth file is empty")
    return truth


def cmd_evaluate(args: argparse.Namespace) -> int:
    records = read_results(args.results)
    predicted = {r["name"]: r["label"] for r in records if r.get("status") == "ok"}
    truth = _read_truth(args.truth)
    pairs = join_by_package(truth, predicted)
    report = evaluate(pairs)
    if args.json:
        data = {
            "labels": list(report.labels),
            "matrix": [list(row) for row in report.matrix],
            "accuracy": report.accuracy,
            "per_class": {
                label: {
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                    "support": s.support,
                }
                for label, s in report.per_class.items()
            },
            "macro_f1": report.macro_f1,
            "weighted_f1": report.weighted_f1,
            "warnings": list(report.warnings),
        }
        print(json.dumps(data, indent=2, sort_keys=True))
        return 0
    width = max(len(label) for label in report.labels)
    header = " ".join(f"{label:>{width}}" for label in report.labels)
    corner = "truth \\ pred"
    print(f"{corner:>{width + 2}}  {header}")
    for label, row in zip(report.labels, report.matrix):
        cells = " ".join(f"{n:>{width}d}" for n in row)
        print(f"{label:>{width + 2}}  {cells}")
    print(f"accuracy: {report.accuracy:.4f}")
    for label, s in report.per_class.items():
        print(
            f"  {label}: precision {s.precision:.4f}  recall {s.recall:.4f}"
            f"  f1 {s.f1:.4f}  support {s.support}"
        )
    print(f"macro F1: {report.macro_f1:.4f}")
    print(f"weighted F1: {report.weighted_f1:.4f}")
    for warning in report.warnings:
        print(f"warning: {warning}")
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    n = cochran_sample_size(args.population, args.confidence, args.margin, args.proportion)
    if args.json:
        print(
            json.dumps(
                {
                    "population": args.population,
                    "confidence": args.confidence,
                    "margin": args.margin,
                    "proportion": args.proportion,
                    "sample_size": n,
                },
                sort_keys=True,
            )
        )
    else:
        pop = str(args.population) if args.population is not None else "unbounded"
        print(f"population {pop}, confidence {args.confidence:g}, margin {args.margin:g} → sample {n}")
    return 0


def cmd_convert_advisories(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.audit_json).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read {args.audit_json}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedAdvisory(f"{args.audit_json}: not valid JSON: {exc}") from exc
    advisories = from_npm_audit(data)
    if args.output:
        dump_advisories(advisories, args.output)
        print(f"wrote {len(advisories)} advisories to {args.output}")
    else:
        for adv in advisories:
            print(json.dumps(adv, sort_keys=True))
    return 0


_COMMANDS = {
    "analyze": cmd_analyze,
    "scan": cmd_scan,
    "stats": cmd_stats,
    "evaluate": cmd_evaluate,
    "sample": cmd_sample,
    "convert-advisories": cmd_convert_advisories,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (MissingManifest, MalformedManifest, NoMeasurableSource) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IoFailure, MalformedAdvisory, MalformedRange, MissingPackage, InvalidConfidence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
