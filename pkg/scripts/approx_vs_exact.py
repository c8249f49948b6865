"""Exhaustive comparison of the two rank-test p-value paths at small n.

Sweeps every pair of non-empty multisets over {0,1,2,3} with combined
size at most 10 and reports how far the normal-approximation p strays
from the exact enumeration p, plus whether the two paths ever disagree
about significance at the 0.05 level.

The worst divergences come from heavily tied pools, where U's exact
distribution collapses onto a few atoms that no continuous
approximation can track.  Run this to see the actual envelope rather
than trusting folklore about "small-sample agreement".
"""

from __future__ import annotations

import argparse
import sys
from itertools import combinations_with_replacement
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pkgtriage.stats import mann_whitney_u  # noqa: E402


def multisets(size: int, values: tuple[int, ...]) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(values, size))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=10, help="max combined sample size")
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--top", type=int, default=10, help="how many worst cases to print")
    args = parser.parse_args()

    values = (0, 1, 2, 3)
    rows: list[tuple[float, tuple, tuple, float, float]] = []
    disagreements = []
    checked = 0
    for n1 in range(1, args.max_n):
        for n2 in range(1, args.max_n - n1 + 1):
            for xs in multisets(n1, values):
                for ys in multisets(n2, values):
                    exact = mann_whitney_u(xs, ys, method="exact").p_value
                    approx = mann_whitney_u(xs, ys, method="asymptotic").p_value
                    diff = abs(exact - approx)
                    rows.append((diff, xs, ys, exact, approx))
                    if (exact < args.alpha) != (approx < args.alpha):
                        disagreements.append((xs, ys, exact, approx))
                    checked += 1

    rows.sort(reverse=True)
    within = sum(1 for r in rows if r[0] <= 0.05)
    print(f"pairs checked: {checked}")
    print(f"|p_exact - p_approx| <= 0.05: {within} ({within / checked:.2%})")
    print(f"max divergence: {rows[0][0]:.4f}")
    print(f"significance disagreements at alpha={args.alpha}: {len(disagreements)}")
    print(f"\nworst {args.top} cases (diff, xs, ys, exact, approx):")
    for diff, xs, ys, exact, approx in rows[: args.top]:
        print(f"  {diff:.4f}  {list(xs)} vs {list(ys)}  exact={exact:.4f} approx={approx:.4f}")
    if disagreements:
        print(f"\nfirst significance disagreements:")
        for xs, ys, exact, approx in disagreements[:10]:
            print(f"  {list(xs)} vs {list(ys)}  exact={exact:.4f} approx={approx:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
