"""Vulnerability advisories and offline auditing of a resolved closure.

An advisory database is a JSON-lines file, one advisory per line::

    {"id": "ADV-1", "name": "lodash", "range": "<4.17.21", "severity": "high"}

Auditing reports one match per (advisory, installed node) pair — if two
versions of the same package are installed and both fall in an
advisory's range, that advisory fires twice, because both copies are on
disk.  The root package itself is auditable like any node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .depgraph import DependencyGraph, DepNode
from .errors import MalformedAdvisory, MalformedRange
from .semver import Range, parse_range

SEVERITIES = ("low", "moderate", "high", "critical")


def severity_rank(severity: str) -> int:
    return SEVERITIES.index(severity)


@dataclass(frozen=True, slots=True)
class Advisory:
    id: str
    name: str
    range: Range
    severity: str


@dataclass(frozen=True, slots=True)
class AdvisoryMatch:
    advisory: Advisory
    node: DepNode


@dataclass(frozen=True, slots=True)
class VulnerabilityReport:
    matches: tuple[AdvisoryMatch, ...]

    @property
    def total(self) -> int:
        return len(self.matches)

    @property
    def by_severity(self) -> dict[str, int]:
        counts = {s: 0 for s in SEVERITIES}
        for m in self.matches:
            counts[m.advisory.severity] += 1
        return counts

    @property
    def worst(self) -> str | None:
        if not self.matches:
            return None
        return max((m.advisory.severity for m in self.matches), key=severity_rank)


class AdvisoryDatabase:
    def __init__(self, advisories: Iterable[Advisory] = ()):
        self.advisories: tuple[Advisory, ...] = tuple(advisories)
        self._by_name: dict[str, list[Advisory]] = {}
        seen: set[str] = set()
        for adv in self.advisories:
            if adv.id in seen:
                raise MalformedAdvisory(f"duplicate advisory id: {adv.id}")
            seen.add(adv.id)
            self._by_name.setdefault(adv.name, []).append(adv)

    def __len__(self) -> int:
        return len(self.advisories)

    def __iter__(self) -> Iterator[Advisory]:
        return iter(self.advisories)

    @classmethod
    def from_dicts(cls, rows: Iterable[dict]) -> "AdvisoryDatabase":
        return cls(_advisory_from_dict(row, f"row {i}") for i, row in enumerate(rows))

    def for_package(self, name: str) -> list[Advisory]:
        return self._by_name.get(name, [])


def _advisory_from_dict(data: dict, where: str) -> Advisory:
    for key in ("id", "name", "range", "severity"):
        if key not in data or not isinstance(data[key], str):
            raise MalformedAdvisory(f"{where}: advisory needs a string {key!r} field")
    severity = data["severity"]
    if severity not in SEVERITIES:
        raise MalformedAdvisory(f"{where}: unknown severity {severity!r}")
    try:
        rng = parse_range(data["range"])
    except MalformedRange as exc:
        raise MalformedAdvisory(f"{where}: bad range {data['range']!r}: {exc}") from exc
    return Advisory(id=data["id"], name=data["name"], range=rng, severity=severity)


def load_advisories(path: str | Path) -> AdvisoryDatabase:
    """Parse a JSON-lines advisory file; any bad line is a hard error."""
    advisories: list[Advisory] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        where = f"{path}:{lineno}"
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedAdvisory(f"{where}: not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise MalformedAdvisory(f"{where}: advisory line must be a JSON object")
        advisories.append(_advisory_from_dict(data, where))
    return AdvisoryDatabase(advisories)


def audit(graph: DependencyGraph, db: AdvisoryDatabase) -> VulnerabilityReport:
    """Match every installed node, root included, against the database."""
    matches: list[AdvisoryMatch] = []
    for node in graph.nodes:
        for adv in db.for_package(node.name):
            if adv.range.matches(node.version):
                matches.append(AdvisoryMatch(adv, node))
    return VulnerabilityReport(matches=tuple(matches))


def from_npm_audit(data: dict) -> list[dict]:
    """Convert an `npm audit --json` document to advisory dicts.

    Handles both the classic shape (top-level "advisories" keyed by
    numeric id) and the newer one (top-level "vulnerabilities" with
    per-package "via" lists).  The "info" severity is folded into "low";
    string entries in "via" lists are transitive references, not
    advisories, and are skipped.  Duplicate ids collapse to one entry.
    """
    out: dict[str, dict] = {}

    def add(adv_id: object, name: object, range_text: object, severity: object) -> None:
        if not all(isinstance(v, str) and v for v in (name, range_text, severity)):
            return
        severity = {"info": "low"}.get(severity, severity)
        if severity not in SEVERITIES:
            return
        key = str(adv_id)
        out.setdefault(key, {"id": key, "name": name, "range": range_text, "severity": severity})

    legacy = data.get("advisories")
    modern_present = isinstance(data.get("vulnerabilities"), dict)
    if not isinstance(legacy, dict) and not modern_present:
        raise MalformedAdvisory(
            "audit document has neither an 'advisories' nor a 'vulnerabilities' table"
        )
    if isinstance(legacy, dict):
        for adv_id, entry in legacy.items():
            if isinstance(entry, dict):
                add(adv_id, entry.get("module_name"), entry.get("vulnerable_versions"), entry.get("severity"))
    modern = data.get("vulnerabilities")
    if isinstance(modern, dict):
        for entry in modern.values():
            if not isinstance(entry, dict):
                continue
            for via in entry.get("via", []):
                if isinstance(via, dict):
                    add(via.get("source"), via.get("name"), via.get("range"), via.get("severity"))
    return sorted(out.values(), key=lambda d: d["id"])


def dump_advisories(advisories: list[dict], path: str | Path) -> None:
    """Write advisory dicts as JSON lines."""
    lines = [json.dumps(adv, sort_keys=True) for adv in advisories]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
