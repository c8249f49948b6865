import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def metrics_dir() -> Path:
    return FIXTURES / "metrics"


@pytest.fixture(scope="session")
def metrics_oracle() -> list[dict]:
    return json.loads((FIXTURES / "metrics" / "oracle.json").read_text())


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def corpus_truth() -> dict[str, str]:
    lines = (FIXTURES / "corpus_truth.csv").read_text().splitlines()
    return dict(line.split(",") for line in lines[1:] if line)


@pytest.fixture(scope="session")
def registry_dir() -> Path:
    return FIXTURES / "registry"


@pytest.fixture(scope="session")
def advisories_path() -> Path:
    return FIXTURES / "advisories.jsonl"
