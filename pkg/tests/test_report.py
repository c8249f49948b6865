import json

import pytest

from pkgtriage.advisories import load_advisories
from pkgtriage.classify import Label
from pkgtriage.depgraph import RegistryIndex
from pkgtriage.errors import NoMeasurableSource
from pkgtriage.metrics import MetricsConfig
from pkgtriage.report import (
    ScanOptions,
    analyze_package,
    read_results,
    render_summary_lines,
    render_tree,
    report_to_dict,
    scan_corpus,
    summarize,
    write_results,
)


def make_pkg(tmp_path, name, js, deps=None, version="1.0.0"):
    d = tmp_path / name
    d.mkdir()
    manifest = {"name": name, "version": version}
    if deps:
        manifest["dependencies"] = deps
    (d / "package.json").write_text(json.dumps(manifest))
    (d / "index.js").write_text(js)
    return d


def test_analyze_package_basic(tmp_path):
    p = make_pkg(tmp_path, "tiny", "module.exports = { a: 1 };\n")
    report = analyze_package(p)
    assert report.name == "tiny"
    assert report.label is Label.DATA_ONLY
    assert report.graph is None
    assert report.vulnerabilities is None


def test_analyze_package_no_source_raises(tmp_path):
    p = make_pkg(tmp_path, "hollow", "// nothing\n")
    with pytest.raises(NoMeasurableSource) as exc:
        analyze_package(p)
    assert exc.value.name == "hollow"


def test_analyze_package_with_registry_and_advisories(tmp_path, registry_dir, advisories_path):
    p = make_pkg(
        tmp_path, "app", "function f(x) { return x; }\nmodule.exports = f;\n",
        deps={"b": "^1.0.0", "ghost": "^9.0.0"},
    )
    report = analyze_package(
        p,
        registry=RegistryIndex(registry_dir),
        advisories=load_advisories(advisories_path),
    )
    assert report.dependency_count == 3  # b@1.2.0 -> d@1.5.0 -> f@3.3.3
    assert any("ghost" in w for w in report.warnings)
    assert report.vulnerabilities is not None
    assert report.vulnerabilities.total > 0


def test_report_to_dict_shape(tmp_path):
    p = make_pkg(tmp_path, "shaped", "const x = a ? 1 : 2;\n")
    data = report_to_dict(analyze_package(p), MetricsConfig())
    assert data["schema"] == 1
    assert data["status"] == "ok"
    assert data["label"] == "trivial"
    assert set(data["metrics"]) >= {
        "loc", "cyclomatic", "functions", "files", "measurable_files",
        "avg_cyclomatic_per_file", "external_imports",
    }
    assert [t["check"] for t in data["trace"]] == [
        "functions", "avg-cyclomatic-per-file", "external-imports", "loc", "total-cyclomatic",
    ]
    assert data["files"][0]["path"] == "index.js"
    assert json.loads(json.dumps(data)) == data


def test_scan_corpus_statuses(corpus_dir):
    records = scan_corpus(corpus_dir)
    by_path = {r["path"]: r for r in records}
    assert by_path["assets-only"]["status"] == "no-measurable-source"
    assert by_path["broken-manifest"]["status"] == "failed"
    assert by_path["const-e"]["status"] == "ok"
    assert len(records) == len(list(corpus_dir.iterdir()))


def test_scan_corpus_matches_truth(corpus_dir, corpus_truth):
    records = scan_corpus(corpus_dir)
    got = {r["path"]: r["label"] for r in records if r["status"] == "ok"}
    assert got == corpus_truth


def test_scan_corpus_parallel_identical(corpus_dir):
    assert scan_corpus(corpus_dir, jobs=1) == scan_corpus(corpus_dir, jobs=3)


def test_scan_options_are_applied(corpus_dir, tmp_path):
    # A loc ceiling of zero forces everything classifiable out of "trivial".
    tf = tmp_path / "t.json"
    tf.write_text(json.dumps({"trivial_max_loc": 0, "trivial_max_cyclomatic": 0}))
    records = scan_corpus(corpus_dir, options=ScanOptions(thresholds_file=str(tf)))
    labels = {r["label"] for r in records if r["status"] == "ok"}
    assert "trivial" not in labels


def test_results_jsonl_round_trip(corpus_dir, tmp_path):
    records = scan_corpus(corpus_dir)
    out = tmp_path / "r.jsonl"
    write_results(records, out)
    assert read_results(out) == records


def test_summarize_counts(corpus_dir, corpus_truth):
    records = scan_corpus(corpus_dir)
    s = summarize(records)
    assert s.total == len(records)
    assert s.analyzed == len(corpus_truth)
    want = {"normal": 0, "trivial": 0, "data-only": 0}
    for label in corpus_truth.values():
        want[label] += 1
    assert s.label_counts == want
    assert sum(s.label_percents.values()) == pytest.approx(100.0)
    assert s.no_source == ("assets-only",)
    assert [name for name, _ in s.failed] == ["broken-manifest"]
    lines = render_summary_lines(s)
    assert any("packages:" in line for line in lines)
    assert s.to_dict()["labels"]["trivial"]["count"] == want["trivial"]


def test_render_tree_markers(registry_dir, advisories_path, tmp_path):
    p = make_pkg(
        tmp_path, "app", "let x = 1;\n",
        deps={"b": "^1.0.0", "c": "~2.0.0", "d": "1.x"},
    )
    report = analyze_package(
        p,
        registry=RegistryIndex(registry_dir),
        advisories=load_advisories(advisories_path),
    )
    lines = render_tree(report.graph, report.vulnerabilities, max_depth=10)
    text = "\n".join(lines)
    assert lines[0].startswith("app@1.0.0")
    assert "(cycle)" in text       # e -> c loops back
    assert "(repeat)" in text      # diamond on d@1.5.0
    assert "⚠" in text
    assert "ADV-003(critical)" in text
    assert not any("\x1b[" in line for line in lines)  # color off by default


def test_render_tree_depth_limit(registry_dir, tmp_path):
    p = make_pkg(tmp_path, "app", "let x = 1;\n", deps={"g": "~0.1.0"})
    report = analyze_package(p, registry=RegistryIndex(registry_dir))
    lines = render_tree(report.graph, None, max_depth=2)
    text = "\n".join(lines)
    assert "g@0.1.5" in text
    assert "h@2.0.0" in text
    assert "i@1.9.9" not in text
    assert "…" in text


def test_render_tree_color_toggle(registry_dir, advisories_path, tmp_path):
    p = make_pkg(tmp_path, "app", "let x = 1;\n", deps={"c": "~2.0.0"})
    report = analyze_package(
        p, registry=RegistryIndex(registry_dir), advisories=load_advisories(advisories_path)
    )
    colored = render_tree(report.graph, report.vulnerabilities, color=True)
    assert any("\x1b[31m" in line for line in colored)  # critical severity paints red
