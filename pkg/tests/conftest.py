from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def fixture_csv() -> Path:
    return DATA_DIR / "indicator_fixture.csv"
