from pathlib import Path

import pytest

from phonefront import load_schema, load_symbol_table
from phonefront.resources import (default_diacritic_rules_path,
                                  default_features_path,
                                  default_inventories_path,
                                  default_symbol_table_path)

DATA = Path(__file__).parent / "data"
TOY = DATA / "toy"


@pytest.fixture(scope="session")
def table():
    return load_symbol_table(default_symbol_table_path())


@pytest.fixture(scope="session")
def schema():
    return load_schema(default_features_path(), default_diacritic_rules_path())


@pytest.fixture(scope="session")
def inventories_path():
    return default_inventories_path()


@pytest.fixture(scope="session")
def toy_dir():
    return TOY
