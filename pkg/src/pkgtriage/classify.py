"""Three-way package triage: normal, trivial, or data-only.

A package is data-only when it defines no functions, averages at most
1.0 cyclomatic complexity per measurable file, and imports nothing
external.  Otherwise it is trivial when its total LOC and total
complexity sit at or under the size thresholds (35 / 10 by default).
Anything else is normal.  Data-only wins when both rules match: a
35-line lookup table is data, not code.  All comparisons are inclusive.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .metrics import MetricsConfig, PackageMetrics

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml


class Label(str, Enum):
    NORMAL = "normal"
    TRIVIAL = "trivial"
    DATA_ONLY = "data-only"


@dataclass(frozen=True, slots=True)
class Thresholds:
    trivial_max_loc: int = 35
    trivial_max_cyclomatic: int = 10
    data_only_max_avg_cyclomatic: float = 1.0

    def __post_init__(self) -> None:
        if self.trivial_max_loc < 0 or self.trivial_max_cyclomatic < 0:
            raise ValueError("thresholds must be non-negative")
        if self.data_only_max_avg_cyclomatic < 0:
            raise ValueError("thresholds must be non-negative")


@dataclass(frozen=True, slots=True)
class RuleCheck:
    check: str
    value: float
    limit: float
    passed: bool


@dataclass(frozen=True, slots=True)
class Classification:
    label: Label
    trace: tuple[RuleCheck, ...]

    def check(self, name: str) -> RuleCheck:
        for entry in self.trace:
            if entry.check == name:
                return entry
        raise KeyError(name)


def classify(
    pm: PackageMetrics,
    thresholds: Thresholds = Thresholds(),
    config: MetricsConfig = MetricsConfig(),
) -> Classification:
    """Apply both rules and label the package, data-only taking precedence.

    The trace always carries all five checks with their observed values,
    so a report can show how close a package sat to each boundary.
    """
    functions = pm.total_functions
    avg_cc = pm.avg_cyclomatic_per_file
    externals = pm.external_import_count(config)
    loc = pm.total_loc
    total_cc = pm.total_cyclomatic

    trace = (
        RuleCheck("functions", functions, 0, functions == 0),
        RuleCheck(
            "avg-cyclomatic-per-file",
            avg_cc,
            thresholds.data_only_max_avg_cyclomatic,
            avg_cc <= thresholds.data_only_max_avg_cyclomatic,
        ),
        RuleCheck("external-imports", externals, 0, externals == 0),
        RuleCheck("loc", loc, thresholds.trivial_max_loc, loc <= thresholds.trivial_max_loc),
        RuleCheck(
            "total-cyclomatic",
            total_cc,
            thresholds.trivial_max_cyclomatic,
            total_cc <= thresholds.trivial_max_cyclomatic,
        ),
    )
    if trace[0].passed and trace[1].passed and trace[2].passed:
        label = Label.DATA_ONLY
    elif trace[3].passed and trace[4].passed:
        label = Label.TRIVIAL
    else:
        label = Label.NORMAL
    return Classification(label, trace)


_THRESHOLD_FIELDS = {
    "trivial_max_loc": int,
    "trivial_max_cyclomatic": int,
    "data_only_max_avg_cyclomatic": float,
}


def load_thresholds(path: str | Path) -> Thresholds:
    """Read threshold overrides from a TOML or JSON file.

    Keys may sit at the top level or under a [thresholds] table; fields
    not mentioned keep their defaults.
    """
    p = Path(path)
    if p.suffix.lower() == ".json":
        data = json.loads(p.read_text(encoding="utf-8"))
    else:
        with open(p, "rb") as fh:
            data = _toml.load(fh)
    if isinstance(data.get("thresholds"), dict):
        data = data["thresholds"]
    unknown = sorted(set(data) - set(_THRESHOLD_FIELDS))
    if unknown:
        raise ValueError(f"unknown threshold keys: {', '.join(unknown)}")
    kwargs = {}
    for name, cast in _THRESHOLD_FIELDS.items():
        if name in data:
            value = data[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"threshold {name} must be a number, got {value!r}")
            kwargs[name] = cast(value)
    return Thresholds(**kwargs)
