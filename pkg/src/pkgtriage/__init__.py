"""Static triage for npm packages: metrics, classification, dependency audit.

The public surface mirrors the pipeline: lex/parse a source file, roll
file metrics up to a package, classify it, optionally resolve its
dependency closure against an offline registry and match advisories,
then compare or score whole corpora.
"""

from .advisories import Advisory, AdvisoryDatabase, VulnerabilityReport, audit, load_advisories
from .classify import Classification, Label, Thresholds, classify, load_thresholds
from .constructs import Construct, ConstructKind, parse_source
from .depgraph import DependencyGraph, DepNode, RegistryIndex, UnresolvedDep, resolve_closure
from .errors import (
    InvalidConfidence,
    IoFailure,
    MalformedAdvisory,
    MalformedManifest,
    MalformedRange,
    MalformedVersion,
    MissingManifest,
    MissingPackage,
    NoMeasurableSource,
    PkgTriageError,
)
from .ingest import Manifest, PackageSource, load_package
from .lexer import Token, TokenKind, lex, tokenize
from .metrics import (
    FileMetrics,
    ImportKind,
    MetricsConfig,
    PackageMetrics,
    analyze_source,
    classify_import,
    package_metrics,
)
from .report import PackageReport, analyze_package, render_tree, scan_corpus, summarize
from .semver import Range, Version, max_satisfying, parse_range, parse_version
from .stats import (
    BootstrapResult,
    EvalReport,
    GroupComparison,
    MannWhitneyResult,
    bootstrap_significance,
    cliffs_delta,
    cochran_sample_size,
    compare_groups,
    evaluate,
    join_by_package,
    mann_whitney_u,
)

__version__ = "0.1.0"

__all__ = [
    "Advisory",
    "AdvisoryDatabase",
    "BootstrapResult",
    "Classification",
    "Construct",
    "ConstructKind",
    "DependencyGraph",
    "DepNode",
    "EvalReport",
    "FileMetrics",
    "GroupComparison",
    "ImportKind",
    "InvalidConfidence",
    "IoFailure",
    "Label",
    "MalformedAdvisory",
    "MalformedManifest",
    "MalformedRange",
    "MalformedVersion",
    "Manifest",
    "MannWhitneyResult",
    "MetricsConfig",
    "MissingManifest",
    "MissingPackage",
    "NoMeasurableSource",
    "PackageMetrics",
    "PackageReport",
    "PackageSource",
    "PkgTriageError",
    "Range",
    "RegistryIndex",
    "Thresholds",
    "Token",
    "TokenKind",
    "UnresolvedDep",
    "Version",
    "VulnerabilityReport",
    "analyze_package",
    "analyze_source",
    "audit",
    "classify",
    "classify_import",
    "cliffs_delta",
    "cochran_sample_size",
    "compare_groups",
    "bootstrap_significance",
    "evaluate",
    "join_by_package",
    "lex",
    "load_advisories",
    "load_package",
    "load_thresholds",
    "mann_whitney_u",
    "max_satisfying",
    "package_metrics",
    "parse_range",
    "parse_source",
    "parse_version",
    "render_tree",
    "resolve_closure",
    "scan_corpus",
    "summarize",
    "tokenize",
]
