"""Per-file and per-package source metrics.

LOC here means lines bearing at least one significant token: comment-only
and blank lines do not count, and a single multi-line token (template
literal, continued string) contributes every line it spans.

Cyclomatic complexity is 1 + the number of branch constructs in the
file, except that a file with no measurable source has complexity 0, so
that empty files cannot drag a package's average below the floor that an
actual one-liner would set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .constructs import FUNCTION_KINDS, Construct, ConstructKind, parse_source
from .lexer import RecoveredError, Token, count_line_breaks


class ImportKind(str, Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"
    BUILTIN = "builtin"


# Node's bundled modules, which need no npm installation.
NODE_CORE_MODULES = frozenset(
    """assert assert/strict async_hooks buffer child_process cluster console
    constants crypto dgram diagnostics_channel dns dns/promises domain events
    fs fs/promises http http2 https inspector inspector/promises module net os
    path path/posix path/win32 perf_hooks process punycode querystring readline
    readline/promises repl stream stream/consumers stream/promises stream/web
    string_decoder sys timers timers/promises tls trace_events tty url util
    util/types v8 vm wasi worker_threads zlib""".split()
)

_DECISION_KINDS = frozenset(
    {
        ConstructKind.IF,
        ConstructKind.ELSE_IF,
        ConstructKind.FOR,
        ConstructKind.FOR_IN_OF,
        ConstructKind.WHILE,
        ConstructKind.DO_WHILE,
        ConstructKind.CASE_CLAUSE,
        ConstructKind.CATCH_CLAUSE,
        ConstructKind.CONDITIONAL_EXPR,
        ConstructKind.LOGICAL_AND,
        ConstructKind.LOGICAL_OR,
        ConstructKind.NULLISH_COALESCE,
    }
)


@dataclass(frozen=True, slots=True)
class MetricsConfig:
    count_nullish: bool = True  # whether ?? adds a branch point
    builtins_are_external: bool = True  # whether fs/path/... count as external


def decision_kinds(config: MetricsConfig = MetricsConfig()) -> frozenset[ConstructKind]:
    if config.count_nullish:
        return _DECISION_KINDS
    return _DECISION_KINDS - {ConstructKind.NULLISH_COALESCE}


def classify_import(specifier: str) -> ImportKind:
    """Sort an import/require specifier into internal, builtin, or external.

    A specifier is internal when it is a relative or absolute path; bare
    names resolve through node_modules and are external unless they name
    a Node core module (with or without the node: prefix).
    """
    if specifier.startswith(("./", "../", "/")) or specifier in (".", ".."):
        return ImportKind.INTERNAL
    if specifier.startswith("node:"):
        return ImportKind.BUILTIN
    if specifier in NODE_CORE_MODULES:
        return ImportKind.BUILTIN
    return ImportKind.EXTERNAL


def count_loc(tokens: list[Token]) -> int:
    """Distinct line numbers carrying at least one significant token."""
    lines: set[int] = set()
    for tok in tokens:
        if tok.is_trivia:
            continue
        span = count_line_breaks(tok.lexeme)
        lines.update(range(tok.line, tok.line + span + 1))
    return len(lines)


def count_functions(constructs: list[Construct]) -> int:
    return sum(1 for c in constructs if c.kind in FUNCTION_KINDS)


def cyclomatic_complexity(
    constructs: list[Construct], loc: int, config: MetricsConfig = MetricsConfig()
) -> int:
    if loc == 0:
        return 0
    decisions = decision_kinds(config)
    return 1 + sum(1 for c in constructs if c.kind in decisions)


@dataclass(frozen=True, slots=True)
class FileMetrics:
    path: str
    loc: int
    functions: int
    cyclomatic: int
    internal_imports: tuple[str, ...] = ()
    external_imports: tuple[str, ...] = ()
    builtin_imports: tuple[str, ...] = ()
    recovered_errors: tuple[RecoveredError, ...] = ()

    @property
    def measurable(self) -> bool:
        return self.loc >= 1


def analyze_source(text: str, path: str = "<memory>", config: MetricsConfig = MetricsConfig()) -> FileMetrics:
    """Run the full pipeline on one file's text."""
    outcome = parse_source(text)
    loc = count_loc(outcome.tokens)
    internal: list[str] = []
    external: list[str] = []
    builtin: list[str] = []
    for c in outcome.constructs:
        if c.specifier is None:
            continue
        kind = classify_import(c.specifier)
        if kind is ImportKind.INTERNAL:
            internal.append(c.specifier)
        elif kind is ImportKind.BUILTIN:
            builtin.append(c.specifier)
        else:
            external.append(c.specifier)
    return FileMetrics(
        path=path,
        loc=loc,
        functions=count_functions(outcome.constructs),
        cyclomatic=cyclomatic_complexity(outcome.constructs, loc, config),
        internal_imports=tuple(internal),
        external_imports=tuple(external),
        builtin_imports=tuple(builtin),
        recovered_errors=tuple(outcome.errors),
    )


@dataclass(frozen=True, slots=True)
class PackageMetrics:
    files: tuple[FileMetrics, ...] = ()

    @property
    def total_loc(self) -> int:
        return sum(f.loc for f in self.files)

    @property
    def total_cyclomatic(self) -> int:
        return sum(f.cyclomatic for f in self.files)

    @property
    def total_functions(self) -> int:
        return sum(f.functions for f in self.files)

    @property
    def measurable_file_count(self) -> int:
        return sum(1 for f in self.files if f.measurable)

    @property
    def avg_cyclomatic_per_file(self) -> float:
        """Mean complexity over files that actually contain source."""
        n = self.measurable_file_count
        if n == 0:
            return 0.0
        return self.total_cyclomatic / n

    def external_import_count(self, config: MetricsConfig = MetricsConfig()) -> int:
        count = sum(len(f.external_imports) for f in self.files)
        if config.builtins_are_external:
            count += sum(len(f.builtin_imports) for f in self.files)
        return count

    def external_packages(self, config: MetricsConfig = MetricsConfig()) -> tuple[str, ...]:
        """Distinct top-level package names this code pulls in, sorted."""
        names: set[str] = set()
        for f in self.files:
            specs = f.external_imports + (f.builtin_imports if config.builtins_are_external else ())
            for spec in specs:
                names.add(package_name_of(spec))
        return tuple(sorted(names))


def package_name_of(specifier: str) -> str:
    """Package name portion of a bare specifier (scoped names keep 2 parts)."""
    if specifier.startswith("node:"):
        return specifier
    parts = specifier.split("/")
    if specifier.startswith("@") and len(parts) >= 2:
        return "/".join(parts[:2])
    return parts[0]


def package_metrics(files: list[FileMetrics]) -> PackageMetrics:
    return PackageMetrics(files=tuple(files))
