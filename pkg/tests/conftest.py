from __future__ import annotations

import json
from pathlib import Path

import pytest

from seaview.cli import _parse_benchmark_file
from seaview.fixtures import generate_corpus
from seaview.ingest import run_poll_cycle
from seaview.rules import default_rules
from seaview.store import Store


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("corpus")
    generate_corpus(out, seed=7, experiments=3, instances=12)
    return out


@pytest.fixture(scope="session")
def expected(corpus_dir: Path) -> dict:
    return json.loads((corpus_dir / "expected.json").read_text())


@pytest.fixture(scope="session")
def expected_steps(corpus_dir: Path) -> dict:
    return json.loads((corpus_dir / "expected_steps.json").read_text())


def seed_store(store_root: Path, corpus: Path) -> Store:
    store = Store(store_root)
    store.put_benchmark(_parse_benchmark_file(corpus / "fixture-lite.jsonl"))
    run_poll_cycle(corpus / "experiments", store, default_rules())
    return store


@pytest.fixture(scope="session")
def fixture_store(tmp_path_factory, corpus_dir: Path) -> Store:
    """Fixture corpus ingested once; tests using this must not write to it."""
    return seed_store(tmp_path_factory.mktemp("store"), corpus_dir)


@pytest.fixture()
def fresh_store(tmp_path) -> Store:
    return Store(tmp_path / "store")
