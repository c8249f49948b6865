"""Statistics for comparing package groups and scoring the classifier.

Everything here is deliberately dependency-free: the rank test, effect
size, bootstrap, and sample-size math are small enough to own, and
owning them keeps results reproducible to the digit across machines.

The Mann-Whitney U test supports two p-value paths.  The exact path
enumerates the permutation distribution of U under the observed tie
structure (a subset-sum walk over doubled midranks, so all arithmetic
stays integral); the asymptotic path uses the normal approximation with
tie-corrected variance and a 0.5 continuity correction.  ``auto``
switches to exact when the combined sample is small, where the normal
approximation is at its worst.
"""

from __future__ import annotations

import hashlib
import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidConfidence, MissingPackage

EXACT_LIMIT = 12  # combined size at or below which `auto` enumerates exactly


# -- ranking ----------------------------------------------------------------


def midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _tie_term(values: Sequence[float]) -> float:
    """Sum of t^3 - t over tie groups."""
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values() if t > 1))


@dataclass(frozen=True, slots=True)
class MannWhitneyResult:
    u: float
    p_value: float
    method: str
    n1: int
    n2: int
    degenerate: bool = False  # every pooled value identical; p pinned at 1.0


def _normal_sf(z: float) -> float:
    return math.erfc(z / math.sqrt(2.0)) / 2.0


def _exact_p(doubled: list[int], n1: int, u_doubled: int) -> float:
    """Two-sided exact p by enumerating rank-sum assignments.

    doubled holds 2*midrank for every pooled observation, so subset sums
    are integers and the tail comparison below is exact.
    """
    n = len(doubled)
    # ways[k][s] = number of k-subsets of the pool with doubled rank sum s
    ways: list[dict[int, int]] = [dict() for _ in range(n1 + 1)]
    ways[0][0] = 1
    for value in doubled:
        for k in range(n1 - 1, -1, -1):
            level = ways[k]
            target = ways[k + 1]
            for s, c in level.items():
                target[s + value] = target.get(s + value, 0) + c
    total = math.comb(n, n1)
    mu_doubled = n1 * (n - n1)  # 2 * (n1*n2/2)
    offset = n1 * (n1 + 1)
    observed = abs(u_doubled - mu_doubled)
    extreme = 0
    for s, c in ways[n1].items():
        if abs((s - offset) - mu_doubled) >= observed:
            extreme += c
    return extreme / total


def mann_whitney_u(
    xs: Sequence[float],
    ys: Sequence[float],
    method: str = "auto",
    continuity: bool = True,
) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test; the statistic reported is U of xs."""
    n1, n2 = len(xs), len(ys)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples need at least one observation")
    if method not in ("auto", "exact", "asymptotic"):
        raise ValueError(f"unknown method: {method!r}")
    pooled = list(xs) + list(ys)
    ranks = midranks(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2

    if all(v == pooled[0] for v in pooled):
        # A constant pooled sample carries no ordering information.
        return MannWhitneyResult(u=u1, p_value=1.0, method="degenerate", n1=n1, n2=n2, degenerate=True)

    use_exact = method == "exact" or (method == "auto" and n1 + n2 <= EXACT_LIMIT)
    if use_exact:
        doubled = [int(round(2 * r)) for r in ranks]
        u_doubled = int(round(2 * r1)) - n1 * (n1 + 1)
        p = _exact_p(doubled, n1, u_doubled)
        return MannWhitneyResult(u=u1, p_value=p, method="exact", n1=n1, n2=n2)

    n = n1 + n2
    mu = n1 * n2 / 2
    variance = (n1 * n2 / 12) * ((n + 1) - _tie_term(pooled) / (n * (n - 1)))
    if variance <= 0:
        return MannWhitneyResult(u=u1, p_value=1.0, method="asymptotic", n1=n1, n2=n2)
    numerator = abs(u1 - mu)
    if continuity:
        numerator = max(numerator - 0.5, 0.0)
    z = numerator / math.sqrt(variance)
    p = min(1.0, 2 * _normal_sf(z))
    return MannWhitneyResult(u=u1, p_value=p, method="asymptotic", n1=n1, n2=n2)


# -- effect size --------------------------------------------------------------

_MAGNITUDE_CUTS = (0.147, 0.33, 0.474)
_MAGNITUDES = ("negligible", "small", "medium", "large")


def cliffs_delta(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Dominance statistic in [-1, 1]: P(x > y) - P(x < y).

    Sorting one sample turns the all-pairs comparison into two bisects
    per observation, so large groups stay cheap.
    """
    if not xs or not ys:
        raise ValueError("both samples need at least one observation")
    ys_sorted = sorted(ys)
    n2 = len(ys_sorted)
    greater = less = 0
    for x in xs:
        below = bisect_left(ys_sorted, x)
        above = n2 - bisect_right(ys_sorted, x)
        greater += below
        less += above
    return (greater - less) / (len(xs) * n2)


def delta_magnitude(delta: float) -> str:
    """Romano banding of |delta|; boundary values take the larger band."""
    return _MAGNITUDES[bisect_right(_MAGNITUDE_CUTS, abs(delta))]


@dataclass(frozen=True, slots=True)
class GroupComparison:
    n1: int
    n2: int
    u: float
    p_value: float
    method: str
    delta: float
    magnitude: str
    degenerate: bool = False


def compare_groups(xs: Sequence[float], ys: Sequence[float], method: str = "auto") -> GroupComparison:
    mw = mann_whitney_u(xs, ys, method=method)
    delta = cliffs_delta(xs, ys)
    return GroupComparison(
        n1=mw.n1, n2=mw.n2, u=mw.u, p_value=mw.p_value, method=mw.method,
        delta=delta, magnitude=delta_magnitude(delta), degenerate=mw.degenerate,
    )


# -- bootstrap ----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class BootstrapResult:
    iterations: int
    significant: int
    alpha: float
    seed: int

    @property
    def fraction(self) -> float:
        return self.significant / self.iterations if self.iterations else 0.0


def bootstrap_significance(
    small: Sequence[float],
    large: Sequence[float],
    iterations: int = 1000,
    alpha: float = 0.05,
    seed: int = 0,
) -> BootstrapResult:
    """How often a size-matched resample of `large` differs from `small`.

    Each iteration draws len(small) values from `large` with replacement
    and runs the rank test against `small`; the result counts iterations
    reaching significance at `alpha`.  A fraction near `alpha` means the
    small group is statistically unremarkable against the large one.
    Each iteration derives its own RNG from sha256("<seed>:<i>"), so any
    single iteration can be replayed without rerunning the loop.
    """
    if iterations <= 0:
        raise ValueError("iterations must be positive")
    if len(small) < 2:
        raise ValueError("the small group needs at least 2 observations")
    if len(large) < len(small):
        raise ValueError("the large group must be at least as big as the small one")
    significant = 0
    k = len(small)
    for i in range(iterations):
        digest = hashlib.sha256(f"{seed}:{i}".encode("ascii")).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        draw = rng.choices(large, k=k)
        result = mann_whitney_u(small, draw, method="asymptotic")
        if result.p_value < alpha:
            significant += 1
    return BootstrapResult(iterations=iterations, significant=significant, alpha=alpha, seed=seed)


# -- sample size --------------------------------------------------------------

Z_SCORES = {0.90: 1.645, 0.95: 1.960, 0.99: 2.576}


def cochran_sample_size(
    population: int | None,
    confidence: float,
    margin: float,
    proportion: float = 0.5,
) -> int:
    """Cochran sample size; population None means no finite-population correction."""
    if confidence not in Z_SCORES:
        raise InvalidConfidence(
            f"confidence must be one of {sorted(Z_SCORES)}, got {confidence!r}"
        )
    if not 0 < margin < 1:
        raise ValueError("margin of error must be in (0, 1)")
    if not 0 < proportion < 1:
        raise ValueError("proportion must be in (0, 1)")
    z = Z_SCORES[confidence]
    n0 = z * z * proportion * (1 - proportion) / (margin * margin)
    if population is None:
        return math.ceil(n0)
    if population <= 0:
        raise ValueError("population must be positive")
    n = n0 / (1 + (n0 - 1) / population)
    return math.ceil(n)


# -- classifier evaluation -----------------------------------------------------

DEFAULT_LABELS = ("normal", "trivial", "data-only")


@dataclass(frozen=True, slots=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True, slots=True)
class EvalReport:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]  # rows = truth, columns = predicted
    accuracy: float
    per_class: dict[str, ClassScores]
    macro_f1: float
    weighted_f1: float
    warnings: tuple[str, ...]


def evaluate(
    pairs: Iterable[tuple[str, str]],
    labels: tuple[str, ...] = DEFAULT_LABELS,
) -> EvalReport:
    """Score (true label, predicted label) pairs.

    Classes with no true members score zero rather than dividing by
    zero, and the macro average still spans all classes.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no labeled pairs to evaluate")
    index = {label: i for i, label in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for true_label, predicted_label in pairs:
        if true_label not in index:
            raise ValueError(f"unknown true label {true_label!r}")
        if predicted_label not in index:
            raise ValueError(f"unknown predicted label {predicted_label!r}")
        counts[index[true_label]][index[predicted_label]] += 1

    warnings: list[str] = []
    total = sum(map(sum, counts))
    correct = sum(counts[i][i] for i in range(len(labels)))
    per_class: dict[str, ClassScores] = {}
    for i, label in enumerate(labels):
        tp = counts[i][i]
        fn = sum(counts[i]) - tp
        fp = sum(counts[r][i] for r in range(len(labels))) - tp
        support = tp + fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        if support == 0:
            warnings.append(f"class {label!r} absent from the truth set; its scores are 0")
        per_class[label] = ClassScores(precision=precision, recall=recall, f1=f1, support=support)

    macro_f1 = sum(s.f1 for s in per_class.values()) / len(labels)
    weighted_f1 = sum(s.f1 * s.support for s in per_class.values()) / total
    return EvalReport(
        labels=labels,
        matrix=tuple(tuple(row) for row in counts),
        accuracy=correct / total,
        per_class=per_class,
        macro_f1=macro_f1,
        weighted_f1=weighted_f1,
        warnings=tuple(warnings),
    )


def join_by_package(
    truth: dict[str, str], predicted: dict[str, str]
) -> list[tuple[str, str]]:
    """Pair truth and prediction labels by package name.

    Every package in the truth set must have a prediction; extra
    predictions are simply not part of the evaluation.
    """
    missing = sorted(set(truth) - set(predicted))
    if missing:
        raise MissingPackage(missing)
    return [(label, predicted[name]) for name, label in sorted(truth.items())]
