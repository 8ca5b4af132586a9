from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    assert FIXTURES.is_dir(), (
        "fixture CSVs missing; run `python scripts/generate_fixtures.py` in the repository root"
    )
    return FIXTURES
