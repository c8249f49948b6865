"""Calibrate the seeded bootstrap false-positive check.

The regression test draws a small sample and a large sample from the
same normal distribution, runs the seeded bootstrap, and asserts the
significant fraction lands in a plausible band around the nominal 5%
level. Both the data seed and the bootstrap seed are frozen in the
test; this script is the record of how they were chosen — it sweeps a
handful of candidates and prints each fraction so the frozen pair is
reproducible rather than magic.

Run from the repository root:

    python3 scripts/bootstrap_calibration.py
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pkgtriage.stats import bootstrap_significance

SMALL_N = 40
LARGE_N = 500
ITERATIONS = 1000
ALPHA = 0.05
BAND = (0.02, 0.08)


def gaussian_groups(data_seed: int) -> tuple[list[float], list[float]]:
    rng = random.Random(data_seed)
    small = [rng.gauss(10.0, 2.0) for _ in range(SMALL_N)]
    large = [rng.gauss(10.0, 2.0) for _ in range(LARGE_N)]
    return small, large


def main() -> None:
    print(f"same-distribution calibration: n={SMALL_N} vs {LARGE_N}, "
          f"{ITERATIONS} iterations, alpha={ALPHA}")
    for data_seed in (12345, 777, 2024):
        small, large = gaussian_groups(data_seed)
        for boot_seed in (0, 7, 42):
            start = time.perf_counter()
            result = bootstrap_significance(
                small, large, iterations=ITERATIONS, alpha=ALPHA, seed=boot_seed
            )
            elapsed = time.perf_counter() - start
            ok = BAND[0] <= result.fraction <= BAND[1]
            print(f"  data_seed={data_seed:<6} boot_seed={boot_seed:<3} "
                  f"fraction={result.fraction:.4f} ({result.significant}/{ITERATIONS}) "
                  f"{elapsed:.2f}s {'in band' if ok else 'OUT OF BAND'}")

    # Disjoint-range sanity: values that never overlap should light up
    # in almost every resample.
    small = [float(v) for v in range(1, SMALL_N + 1)]
    large = [1000.0 + v for v in range(LARGE_N)]
    result = bootstrap_significance(small, large, iterations=ITERATIONS, alpha=ALPHA, seed=0)
    print(f"disjoint ranges: fraction={result.fraction:.4f} ({result.significant}/{ITERATIONS})")


if __name__ == "__main__":
    main()
