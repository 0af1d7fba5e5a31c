from __future__ import annotations

import json
from pathlib import Path

import pytest

from unitfacets.ucum import UnitRegistry, load_seed_registry

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def registry() -> UnitRegistry:
    return load_seed_registry()


@pytest.fixture(scope="session")
def factor_table() -> list[dict]:
    return json.loads((FIXTURES / "conversion_factors.json").read_text())["entries"]
