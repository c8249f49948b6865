"""Semantic versions and npm-style version ranges.

Supports the range syntax found in registry manifests: exact versions,
caret and tilde shorthands, bare comparators (>=, <=, >, <, =), x/*
wildcards, hyphen ranges, and `||` unions. Everything is desugared into
comparator lists, so matching is a plain AND/OR evaluation.

Prerelease handling follows registry semantics: a version carrying a
prerelease tag only satisfies a comparator set when that set contains a
comparator with a prerelease on the same major.minor.patch triple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering

from .errors import MalformedRange, MalformedVersion

_VERSION_RE = re.compile(
    r"""^\s*v?
    (?P<major>0|[1-9]\d*)\.(?P<minor>0|[1-9]\d*)\.(?P<patch>0|[1-9]\d*)
    (?:-(?P<pre>[0-9A-Za-z.-]+))?
    (?:\+(?P<build>[0-9A-Za-z.-]+))?
    \s*$""",
    re.VERBOSE,
)

# A partial version as used inside ranges: "1", "1.2", "1.2.x", "1.2.3-beta.1"
_PARTIAL_RE = re.compile(
    r"""^v?
    (?P<major>\d+|[xX*])
    (?:\.(?P<minor>\d+|[xX*]))?
    (?:\.(?P<patch>\d+|[xX*]))?
    (?:-(?P<pre>[0-9A-Za-z.-]+))?
    (?:\+(?P<build>[0-9A-Za-z.-]+))?
    $""",
    re.VERBOSE,
)

_HYPHEN_RE = re.compile(r"\s+-\s+")
_OP_SPACE_RE = re.compile(r"(^|\s)(>=|<=|>|<|=|~|\^)\s+")


def _prerelease_key(ids: tuple[str, ...]) -> tuple:
    # Numeric identifiers sort below alphanumeric ones, numerically.
    return tuple((0, int(part), "") if part.isdigit() else (1, 0, part) for part in ids)


@total_ordering
@dataclass(frozen=True)
class Version:
    major: int
    minor: int
    patch: int
    prerelease: tuple[str, ...] = ()
    build: tuple[str, ...] = ()

    @property
    def release(self) -> tuple[int, int, int]:
        return (self.major, self.minor, self.patch)

    def _key(self) -> tuple:
        # A prerelease sorts below the plain release; build metadata is ignored.
        if self.prerelease:
            return (*self.release, 0, _prerelease_key(self.prerelease))
        return (*self.release, 1, ())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: "Version") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        s = f"{self.major}.{self.minor}.{self.patch}"
        if self.prerelease:
            s += "-" + ".".join(self.prerelease)
        if self.build:
            s += "+" + ".".join(self.build)
        return s


def parse_version(text: str) -> Version:
    m = _VERSION_RE.match(text)
    if not m:
        raise MalformedVersion(f"not a semantic version: {text!r}")
    pre = tuple(m.group("pre").split(".")) if m.group("pre") else ()
    build = tuple(m.group("build").split(".")) if m.group("build") else ()
    if "" in pre or "" in build:
        raise MalformedVersion(f"empty identifier in version: {text!r}")
    return Version(int(m.group("major")), int(m.group("minor")), int(m.group("patch")), pre, build)


@dataclass(frozen=True)
class _Comparator:
    op: str  # one of ==, >=, <=, >, <
    version: Version

    def satisfied_by(self, v: Version) -> bool:
        if self.op == "==":
            return v == self.version
        if self.op == ">=":
            return v >= self.version
        if self.op == "<=":
            return v <= self.version
        if self.op == ">":
            return v > self.version
        return v < self.version

    def __str__(self) -> str:
        return f"{self.op}{self.version}"


@dataclass(frozen=True)
class _Partial:
    major: int | None  # None means wildcard at that position
    minor: int | None
    patch: int | None
    has_minor: bool
    has_patch: bool
    prerelease: tuple[str, ...]

    def floor(self) -> Version:
        return Version(self.major or 0, self.minor or 0, self.patch or 0, self.prerelease)


def _parse_partial(text: str) -> _Partial:
    m = _PARTIAL_RE.match(text)
    if not m:
        raise MalformedRange(f"unparseable version fragment: {text!r}")

    def num(part: str | None) -> int | None:
        if part is None or part in ("x", "X", "*"):
            return None
        return int(part)

    pre = tuple(m.group("pre").split(".")) if m.group("pre") else ()
    if pre and (m.group("patch") is None or num(m.group("patch")) is None):
        raise MalformedRange(f"prerelease on wildcard version: {text!r}")
    return _Partial(
        major=num(m.group("major")),
        minor=num(m.group("minor")),
        patch=num(m.group("patch")),
        has_minor=m.group("minor") is not None and num(m.group("minor")) is not None,
        has_patch=m.group("patch") is not None and num(m.group("patch")) is not None,
        prerelease=pre,
    )


def _bare_comparators(p: _Partial) -> list[_Comparator]:
    """Expand a bare partial like 1.2 or 1.2.x into its comparator pair."""
    if p.major is None:
        return []  # *, x: matches anything
    if not p.has_minor or p.minor is None:
        return [
            _Comparator(">=", Version(p.major, 0, 0)),
            _Comparator("<", Version(p.major + 1, 0, 0)),
        ]
    if not p.has_patch or p.patch is None:
        return [
            _Comparator(">=", Version(p.major, p.minor, 0)),
            _Comparator("<", Version(p.major, p.minor + 1, 0)),
        ]
    return [_Comparator("==", p.floor())]


def _tilde_comparators(p: _Partial) -> list[_Comparator]:
    if p.major is None:
        return []
    if not p.has_minor or p.minor is None:
        return [
            _Comparator(">=", Version(p.major, 0, 0)),
            _Comparator("<", Version(p.major + 1, 0, 0)),
        ]
    return [
        _Comparator(">=", p.floor()),
        _Comparator("<", Version(p.major, p.minor + 1, 0)),
    ]


def _caret_comparators(p: _Partial) -> list[_Comparator]:
    if p.major is None:
        return []
    lower = _Comparator(">=", p.floor())
    if p.major > 0:
        upper = Version(p.major + 1, 0, 0)
    elif not p.has_minor or p.minor is None:
        upper = Version(1, 0, 0)
    elif p.minor > 0 or not p.has_patch or p.patch is None:
        upper = Version(0, p.minor + 1, 0)
    else:
        upper = Version(0, 0, p.patch + 1)
    return [lower, _Comparator("<", upper)]


def _primitive_comparators(op: str, p: _Partial) -> list[_Comparator]:
    if p.major is None:
        # e.g. ">=*": any version at all
        return [] if op in (">=", "<=") else [_Comparator("<", Version(0, 0, 0))]
    full = p.has_minor and p.has_patch
    if full:
        if op == "=":
            return [_Comparator("==", p.floor())]
        return [_Comparator(op, p.floor())]
    # Partial versions denote the whole block they name.
    if not p.has_minor or p.minor is None:
        block_start, block_end = Version(p.major, 0, 0), Version(p.major + 1, 0, 0)
    else:
        block_start, block_end = Version(p.major, p.minor, 0), Version(p.major, p.minor + 1, 0)
    if op == ">":
        return [_Comparator(">=", block_end)]
    if op == "<":
        return [_Comparator("<", block_start)]
    if op == ">=":
        return [_Comparator(">=", block_start)]
    if op == "<=":
        return [_Comparator("<", block_end)]
    return _bare_comparators(p)  # "=1.2" behaves like the bare partial


def _hyphen_comparators(low: _Partial, high: _Partial) -> list[_Comparator]:
    comps: list[_Comparator] = []
    if low.major is not None:
        comps.append(_Comparator(">=", low.floor()))
    if high.major is not None:
        if high.has_minor and high.has_patch:
            comps.append(_Comparator("<=", high.floor()))
        elif high.has_minor and high.minor is not None:
            comps.append(_Comparator("<", Version(high.major, high.minor + 1, 0)))
        else:
            comps.append(_Comparator("<", Version(high.major + 1, 0, 0)))
    return comps


@dataclass(frozen=True)
class Range:
    """A parsed version range: a union of comparator sets."""

    text: str
    sets: tuple[tuple[_Comparator, ...], ...] = field(repr=False)

    def matches(self, v: Version) -> bool:
        return any(self._set_matches(cs, v) for cs in self.sets)

    @staticmethod
    def _set_matches(comparators: tuple[_Comparator, ...], v: Version) -> bool:
        if not all(c.satisfied_by(v) for c in comparators):
            return False
        if v.prerelease:
            # Only opt into prereleases when the set names one on this triple.
            return any(c.version.prerelease and c.version.release == v.release for c in comparators)
        return True

    def __contains__(self, v: Version) -> bool:
        return self.matches(v)

    def __str__(self) -> str:
        return self.text


def parse_range(text: str) -> Range:
    if not isinstance(text, str):
        raise MalformedRange(f"range must be a string, got {type(text).__name__}")
    sets: list[tuple[_Comparator, ...]] = []
    for alternative in text.split("||"):
        normalized = _OP_SPACE_RE.sub(r"\1\2", alternative.strip())
        comps: list[_Comparator] = []
        hyphen_parts = _HYPHEN_RE.split(normalized)
        if len(hyphen_parts) == 2:
            comps.extend(_hyphen_comparators(*map(_parse_partial, hyphen_parts)))
        elif len(hyphen_parts) > 2:
            raise MalformedRange(f"chained hyphen range: {text!r}")
        else:
            for token in normalized.split():
                m = re.match(r"^(>=|<=|>|<|=|~|\^)(.*)$", token)
                if m:
                    op, rest = m.group(1), m.group(2)
                    if not rest:
                        raise MalformedRange(f"dangling operator in range: {text!r}")
                    partial = _parse_partial(rest)
                    if op == "~":
                        comps.extend(_tilde_comparators(partial))
                    elif op == "^":
                        comps.extend(_caret_comparators(partial))
                    else:
                        comps.extend(_primitive_comparators(op, partial))
                else:
                    comps.extend(_bare_comparators(_parse_partial(token)))
        sets.append(tuple(comps))
    if not sets:
        sets = [()]
    return Range(text=text, sets=tuple(sets))


def match(range_text: str | Range, version: str | Version) -> bool:
    """True iff the version satisfies the range."""
    rng = range_text if isinstance(range_text, Range) else parse_range(range_text)
    ver = version if isinstance(version, Version) else parse_version(version)
    return rng.matches(ver)


def max_satisfying(versions: list[Version], rng: Range) -> Version | None:
    """Highest version matching the range, or None."""
    best: Version | None = None
    for v in versions:
        if rng.matches(v) and (best is None or v > best):
            best = v
    return best
