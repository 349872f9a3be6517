import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "tableinsights" / "data"

CHEESE_CSV = (DATA_DIR / "cheese.csv").read_text(encoding="utf-8")
CHEESE_PROFIT_CSV = (DATA_DIR / "cheese_profit.csv").read_text(encoding="utf-8")
CHEESE_TITLE = "Worldwide cheese market cap"


@pytest.fixture
def cheese_csv() -> str:
    return CHEESE_CSV


@pytest.fixture
def cheese_profit_csv() -> str:
    return CHEESE_PROFIT_CSV


@pytest.fixture
def cheese_title() -> str:
    return CHEESE_TITLE
