"""Offline dependency-closure resolution against a directory registry.

The registry is a directory of ``<name>.json`` files (scoped packages
nest naturally: ``@scope/pkg.json``), each shaped like::

    {"versions": {"1.0.0": {"dependencies": {"other": "^2.0.0"}}}}

Resolution walks breadth-first from the root manifest, picking the
highest version satisfying each range, the same choice a fresh
``npm install`` would make with this registry snapshot.  A (name,
version) pair is expanded once, which both deduplicates diamonds and
terminates dependency cycles.  Ranges that cannot be satisfied are
recorded, not fatal: an auditor wants to see the rest of the tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import IoFailure, MalformedRange
from .semver import Version, max_satisfying, parse_range, parse_version


@dataclass(frozen=True, slots=True)
class DepNode:
    name: str
    version: Version

    @property
    def spec(self) -> str:
        return f"{self.name}@{self.version}"


@dataclass(frozen=True, slots=True)
class UnresolvedDep:
    name: str
    range_text: str
    required_by: DepNode
    reason: str


class RegistryIndex:
    """Lazy, cached view over a registry directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._cache: dict[str, dict[Version, dict[str, str]] | None] = {}

    def versions(self, name: str) -> list[Version]:
        entry = self._load(name)
        if entry is None:
            return []
        return sorted(entry)

    def dependencies(self, name: str, version: Version) -> dict[str, str]:
        entry = self._load(name)
        if entry is None:
            return {}
        return entry.get(version, {})

    def __contains__(self, name: str) -> bool:
        return self._load(name) is not None

    def _load(self, name: str) -> dict[Version, dict[str, str]] | None:
        if name in self._cache:
            return self._cache[name]
        path = self.root / f"{name}.json"
        result: dict[Version, dict[str, str]] | None
        if not path.is_file():
            result = None
        else:
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise IoFailure(f"registry file for {name} is unreadable: {exc}") from exc
            versions = data.get("versions") if isinstance(data, dict) else None
            if not isinstance(versions, dict):
                raise IoFailure(f"registry file for {name} lacks a versions table")
            result = {}
            for ver_text, meta in versions.items():
                try:
                    version = parse_version(ver_text)
                except MalformedRange:
                    continue  # junk version keys are ignorable noise
                deps = meta.get("dependencies", {}) if isinstance(meta, dict) else {}
                if not isinstance(deps, dict):
                    deps = {}
                result[version] = {str(k): str(v) for k, v in deps.items()}
        self._cache[name] = result
        return result


@dataclass(slots=True)
class DependencyGraph:
    root: DepNode
    children: dict[DepNode, tuple[DepNode, ...]]
    unresolved: tuple[UnresolvedDep, ...]

    @property
    def nodes(self) -> tuple[DepNode, ...]:
        return tuple(self.children)

    def transitive_count(self, mode: str = "name-version") -> int:
        """Installed dependency count: nodes beyond the root itself.

        ``name-version`` counts every distinct installed (name, version)
        pair, matching what lands in node_modules; ``name`` collapses
        multi-version duplicates.
        """
        if mode == "name-version":
            return len(self.children) - 1
        if mode == "name":
            return len({node.name for node in self.children}) - 1
        raise ValueError(f"unknown count mode: {mode!r}")


def resolve_closure(
    name: str,
    version: str | Version,
    dependencies: dict[str, str],
    registry: RegistryIndex,
) -> DependencyGraph:
    """Resolve the full install closure of a root manifest."""
    root_version = version if isinstance(version, Version) else parse_version(version)
    root = DepNode(name, root_version)
    children: dict[DepNode, tuple[DepNode, ...]] = {}
    unresolved: list[UnresolvedDep] = []
    queue: list[tuple[DepNode, dict[str, str]]] = [(root, dependencies)]
    children[root] = ()

    while queue:
        node, deps = queue.pop(0)
        resolved: list[DepNode] = []
        for dep_name, range_text in deps.items():
            try:
                rng = parse_range(range_text)
            except MalformedRange:
                unresolved.append(UnresolvedDep(dep_name, range_text, node, "malformed range"))
                continue
            available = registry.versions(dep_name)
            if not available:
                unresolved.append(UnresolvedDep(dep_name, range_text, node, "not in registry"))
                continue
            best = max_satisfying(available, rng)
            if best is None:
                unresolved.append(UnresolvedDep(dep_name, range_text, node, "no matching version"))
                continue
            child = DepNode(dep_name, best)
            resolved.append(child)
            if child not in children:
                children[child] = ()
                queue.append((child, registry.dependencies(dep_name, best)))
        children[node] = tuple(resolved)

    return DependencyGraph(root=root, children=children, unresolved=tuple(unresolved))
