"""Default data-file resolution.

Lookup order for each bundled table: an explicit path argument, then the
directory named by the PHONEFRONT_DATA environment variable, then the data
files shipped inside the package.
"""

from __future__ import annotations

import os
from importlib.resources import files
from pathlib import Path

SYMBOLS_FILENAME = "symbols.txt"
FEATURES_FILENAME = "features.csv"
DIACRITIC_RULES_FILENAME = "diacritic_rules.csv"
SAMPLE_INVENTORIES_FILENAME = "sample_inventories.csv"

_ENV_VAR = "PHONEFRONT_DATA"


def data_path(filename: str, explicit: str | Path | None = None) -> Path:
    """Resolve a bundled data file, honoring overrides."""
    if explicit is not None:
        return Path(explicit)
    env_dir = os.environ.get(_ENV_VAR)
    if env_dir:
        candidate = Path(env_dir) / filename
        if candidate.exists():
            return candidate
    return Path(str(files("phonefront").joinpath("data", filename)))


def default_symbol_table_path() -> Path:
    return data_path(SYMBOLS_FILENAME)


def default_features_path() -> Path:
    return data_path(FEATURES_FILENAME)


def default_diacritic_rules_path() -> Path:
    return data_path(DIACRITIC_RULES_FILENAME)


def default_inventories_path() -> Path:
    return data_path(SAMPLE_INVENTORIES_FILENAME)
