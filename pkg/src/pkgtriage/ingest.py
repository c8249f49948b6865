"""Package ingestion: manifests, source discovery, tarball handling.

Only a package's own shipped JavaScript is measured.  Test suites,
build output, vendored dependencies, and minified bundles say nothing
about how much code the package itself contributes, so those trees are
pruned before any tokenization happens.
"""

from __future__ import annotations

import json
import os
import tarfile
import tempfile
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath

from .errors import IoFailure, MalformedManifest, MissingManifest

SOURCE_EXTENSIONS = (".js", ".mjs", ".cjs")

EXCLUDED_DIR_SEGMENTS = frozenset(
    {
        "node_modules",
        ".git",
        "test",
        "tests",
        "__tests__",
        "spec",
        "dist",
        "build",
        "out",
        "coverage",
        "example",
        "examples",
    }
)

EXCLUDED_BASENAME_SUFFIXES = (".test.js", ".spec.js", ".min.js")

_TARBALL_SUFFIXES = (".tgz", ".tar.gz", ".tar")


@dataclass(frozen=True, slots=True)
class Manifest:
    name: str
    version: str
    dependencies: dict[str, str]
    raw: dict

    @classmethod
    def from_dict(cls, data: object, fallback_name: str = "unknown") -> "Manifest":
        if not isinstance(data, dict):
            raise MalformedManifest("package.json must contain a JSON object")
        name = data.get("name", fallback_name)
        version = data.get("version", "0.0.0")
        if not isinstance(name, str) or not isinstance(version, str):
            raise MalformedManifest("package name and version must be strings")
        deps = data.get("dependencies", {})
        if deps is None:
            deps = {}
        if not isinstance(deps, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in deps.items()
        ):
            raise MalformedManifest("dependencies must map package names to range strings")
        return cls(name=name, version=version, dependencies=dict(deps), raw=data)


@dataclass(frozen=True, slots=True)
class SourceFile:
    relpath: str  # posix-style, relative to the package root
    text: str


@dataclass(slots=True)
class PackageSource:
    root: Path
    manifest: Manifest
    files: list[SourceFile]
    warnings: list[str] = field(default_factory=list)
    _tempdir: tempfile.TemporaryDirectory | None = None  # keeps extractions alive


def load_manifest(root: Path) -> Manifest:
    manifest_path = root / "package.json"
    if not manifest_path.is_file():
        raise MissingManifest(f"no package.json under {root}")
    try:
        raw = manifest_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {manifest_path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise MalformedManifest(f"package.json is not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedManifest(f"package.json is not valid JSON: {exc}") from exc
    return Manifest.from_dict(data, fallback_name=root.name)


def _excluded_basename(name: str) -> bool:
    return any(name.endswith(suffix) for suffix in EXCLUDED_BASENAME_SUFFIXES)


def filter_files(root: Path) -> list[str]:
    """Relative posix paths of measurable source files, sorted.

    Prunes excluded directory segments, skips symlinks, and keeps only
    .js/.mjs/.cjs files that are not tests, specs, or minified bundles.
    """
    found: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames[:] = sorted(
            d
            for d in dirnames
            if d not in EXCLUDED_DIR_SEGMENTS and not (Path(dirpath) / d).is_symlink()
        )
        for name in filenames:
            if not name.endswith(SOURCE_EXTENSIONS) or _excluded_basename(name):
                continue
            full = Path(dirpath) / name
            if full.is_symlink():
                continue
            found.append(str(PurePosixPath(full.relative_to(root))))
    return sorted(found)


def _read_sources(root: Path, relpaths: list[str], warnings: list[str]) -> list[SourceFile]:
    files: list[SourceFile] = []
    for rel in relpaths:
        full = root / rel
        try:
            text = full.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            warnings.append(f"skipped non-UTF-8 file: {rel}")
            continue
        except OSError as exc:
            raise IoFailure(f"cannot read {full}: {exc}") from exc
        files.append(SourceFile(relpath=rel, text=text))
    return files


def _safe_extract(archive: tarfile.TarFile, dest: Path, warnings: list[str]) -> None:
    for member in archive.getmembers():
        if not member.isfile():
            if member.issym() or member.islnk():
                warnings.append(f"skipped link in archive: {member.name}")
            continue
        parts = PurePosixPath(member.name).parts
        if member.name.startswith("/") or ".." in parts:
            warnings.append(f"skipped unsafe archive path: {member.name}")
            continue
        target = dest.joinpath(*parts)
        target.parent.mkdir(parents=True, exist_ok=True)
        extracted = archive.extractfile(member)
        if extracted is None:
            continue
        with extracted, open(target, "wb") as out:
            out.write(extracted.read())


def _extract_tarball(path: Path, warnings: list[str]) -> tuple[Path, tempfile.TemporaryDirectory]:
    tempdir = tempfile.TemporaryDirectory(prefix="pkgtriage-")
    dest = Path(tempdir.name)
    try:
        with tarfile.open(path, mode="r:*") as archive:
            _safe_extract(archive, dest, warnings)
    except (tarfile.TarError, OSError, EOFError) as exc:
        tempdir.cleanup()
        raise IoFailure(f"cannot extract {path}: {exc}") from exc
    entries = sorted(dest.iterdir())
    if len(entries) == 1 and entries[0].is_dir():
        return entries[0], tempdir  # npm layout: everything under package/
    return dest, tempdir


def load_package(path: str | Path) -> PackageSource:
    """Load a package from a directory or an npm-style gzipped tarball."""
    p = Path(path)
    warnings: list[str] = []
    tempdir: tempfile.TemporaryDirectory | None = None
    if p.is_dir():
        root = p
    elif p.is_file() and p.name.endswith(_TARBALL_SUFFIXES):
        root, tempdir = _extract_tarball(p, warnings)
    elif p.exists():
        raise IoFailure(f"not a package directory or tarball: {p}")
    else:
        raise IoFailure(f"no such path: {p}")
    manifest = load_manifest(root)
    relpaths = filter_files(root)
    files = _read_sources(root, relpaths, warnings)
    return PackageSource(root=root, manifest=manifest, files=files, warnings=warnings, _tempdir=tempdir)
