"""Shared fixtures: fixture paths and a cached census-corpus run."""

from pathlib import Path

import pytest

from ranatomy.corpus import run_corpus, scan

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def census_dir() -> Path:
    return FIXTURES / "census"


@pytest.fixture(scope="session")
def census_run(census_dir, tmp_path_factory) -> Path:
    """One extract run over the census corpus, shared across tests."""
    out = tmp_path_factory.mktemp("census_run")
    manifest = scan([census_dir], "census")
    run_corpus(manifest, out, jobs=1)
    return out
