import json
import tarfile

import pytest

from pkgtriage.errors import IoFailure, MalformedManifest, MissingManifest
from pkgtriage.ingest import Manifest, filter_files, load_manifest, load_package


def write_pkg(root, manifest=None, files=()):
    root.mkdir(parents=True, exist_ok=True)
    if manifest is not None:
        (root / "package.json").write_text(json.dumps(manifest), encoding="utf-8")
    for rel, text in files:
        p = root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return root


def test_manifest_from_dict_defaults():
    m = Manifest.from_dict({"name": "x"}, fallback_name="ignored")
    assert (m.name, m.version) == ("x", "0.0.0")
    m = Manifest.from_dict({}, fallback_name="dirname")
    assert m.name == "dirname"


def test_manifest_dependencies_parsed():
    m = Manifest.from_dict({"name": "x", "dependencies": {"a": "^1.0.0"}})
    assert m.dependencies == {"a": "^1.0.0"}


@pytest.mark.parametrize(
    "payload",
    [
        [],
        {"name": 42},
        {"version": 1.5},
        {"dependencies": ["not", "a", "map"]},
        {"dependencies": {"a": 7}},
    ],
)
def test_manifest_rejects_bad_shapes(payload):
    with pytest.raises(MalformedManifest):
        Manifest.from_dict(payload)


def test_load_manifest_missing(tmp_path):
    with pytest.raises(MissingManifest):
        load_manifest(tmp_path)


def test_load_manifest_invalid_json(tmp_path):
    (tmp_path / "package.json").write_text("{oops")
    with pytest.raises(MalformedManifest):
        load_manifest(tmp_path)


def test_load_package_reads_sources(tmp_path):
    write_pkg(tmp_path / "p", {"name": "p", "version": "1.0.0"},
              [("index.js", "let a;\n"), ("lib/util.js", "let b;\n")])
    pkg = load_package(tmp_path / "p")
    assert pkg.manifest.name == "p"
    assert [f.relpath for f in pkg.files] == ["index.js", "lib/util.js"]


def test_filter_skips_non_source_extensions(tmp_path):
    write_pkg(tmp_path, {"name": "p"},
              [("a.js", ""), ("b.mjs", ""), ("c.cjs", ""), ("d.ts", ""),
               ("e.json", ""), ("README.md", "")])
    assert filter_files(tmp_path) == ["a.js", "b.mjs", "c.cjs"]


def test_filter_prunes_vendored_and_test_dirs(tmp_path):
    write_pkg(tmp_path, {"name": "p"},
              [("index.js", ""),
               ("node_modules/dep/index.js", ""),
               ("test/index.test.js", ""),
               ("tests/x.js", ""),
               ("__tests__/y.js", ""),
               ("dist/bundle.js", ""),
               ("examples/demo.js", ""),
               ("coverage/cov.js", "")])
    assert filter_files(tmp_path) == ["index.js"]


def test_filter_skips_test_and_minified_basenames(tmp_path):
    write_pkg(tmp_path, {"name": "p"},
              [("index.js", ""), ("index.test.js", ""), ("index.spec.js", ""),
               ("bundle.min.js", "")])
    assert filter_files(tmp_path) == ["index.js"]


def test_load_package_skips_undecodable_file_with_warning(tmp_path):
    write_pkg(tmp_path / "p", {"name": "p"}, [("good.js", "let a;\n")])
    (tmp_path / "p" / "bad.js").write_bytes(b"\xff\xfe\x00broken")
    pkg = load_package(tmp_path / "p")
    assert [f.relpath for f in pkg.files] == ["good.js"]
    assert any("bad.js" in w for w in pkg.warnings)


def test_load_package_missing_path(tmp_path):
    with pytest.raises(IoFailure):
        load_package(tmp_path / "absent")


def test_load_package_regular_file_is_io_failure(tmp_path):
    p = tmp_path / "stray.txt"
    p.write_text("hello")
    with pytest.raises(IoFailure):
        load_package(p)


def make_tarball(tmp_path, name, entries, top="package"):
    tar_path = tmp_path / name
    staging = tmp_path / "staging" / top
    for rel, text in entries:
        p = staging / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    with tarfile.open(tar_path, "w:gz") as tf:
        tf.add(staging, arcname=top)
    return tar_path


def test_load_package_from_tarball(tmp_path):
    tar = make_tarball(
        tmp_path, "pkg-1.0.0.tgz",
        [("package.json", json.dumps({"name": "tarred", "version": "1.0.0"})),
         ("index.js", "module.exports = 1;\n")],
    )
    pkg = load_package(tar)
    assert pkg.manifest.name == "tarred"
    assert [f.relpath for f in pkg.files] == ["index.js"]


def test_tarball_without_wrapper_dir(tmp_path):
    tar_path = tmp_path / "flat.tgz"
    staging = tmp_path / "flat"
    write_pkg(staging, {"name": "flat", "version": "0.1.0"}, [("main.js", "let z;\n")])
    with tarfile.open(tar_path, "w:gz") as tf:
        for child in sorted(staging.iterdir()):
            tf.add(child, arcname=child.name)
    pkg = load_package(tar_path)
    assert pkg.manifest.name == "flat"
    assert [f.relpath for f in pkg.files] == ["main.js"]


def test_tarball_hostile_paths_skipped(tmp_path):
    tar_path = tmp_path / "evil.tgz"
    inner = tmp_path / "inner.js"
    inner.write_text("let x;\n")
    with tarfile.open(tar_path, "w:gz") as tf:
        tf.add(inner, arcname="package/../../escape.js")
        info = tarfile.TarInfo("package/package.json")
        body = json.dumps({"name": "evil", "version": "1.0.0"}).encode()
        info.size = len(body)
        import io
        tf.addfile(info, io.BytesIO(body))
    pkg = load_package(tar_path)
    assert pkg.manifest.name == "evil"
    assert pkg.files == []
    assert not (tmp_path / "escape.js").exists()
    assert any("escape.js" in w or "skipped" in w.lower() for w in pkg.warnings)


def test_corrupt_tarball_is_io_failure(tmp_path):
    p = tmp_path / "junk.tgz"
    p.write_bytes(b"definitely not gzip")
    with pytest.raises(IoFailure):
        load_package(p)
