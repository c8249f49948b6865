#!/usr/bin/env python3
"""Scan the fixture corpus and score the labels against the truth CSV.

A smoke-test-sized version of the full pipeline: scan -> summary ->
evaluation. Useful when touching the classifier or the scanner to see
the corpus-level effect immediately.

    python3 scripts/run_fixture_study.py
"""

import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pkgtriage.report import render_summary_lines, scan_corpus, summarize
from pkgtriage.stats import evaluate, join_by_package

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> int:
    records = scan_corpus(FIXTURES / "corpus")
    for line in render_summary_lines(summarize(records)):
        print(line)

    with open(FIXTURES / "corpus_truth.csv", newline="") as fh:
        truth = {row["package"]: row["label"] for row in csv.DictReader(fh)}
    predicted = {r["name"]: r["label"] for r in records if r["status"] == "ok"}
    report = evaluate(join_by_package(truth, predicted))

    print()
    print(f"accuracy: {report.accuracy:.4f}")
    print(f"macro f1: {report.macro_f1:.4f}")
    for label, m in report.per_class.items():
        print(f"  {label}: precision {m.precision:.3f}  recall {m.recall:.3f}  f1 {m.f1:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
