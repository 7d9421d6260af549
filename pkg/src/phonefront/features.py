"""Binary articulatory-feature encoding of segments.

The feature schema is data, not code: a CSV maps each base symbol to 62
binary feature values, and a second CSV gives per-diacritic overrides
(diacritic, feature, value). Encoding a segment takes the base row and
applies the overrides of its diacritics in order. Distances between encoded
segments are weighted Hamming (an L1 metric on binary vectors).
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EncodeError, SchemaError
from .ipa import Segment

FEATURE_COUNT = 62


@dataclass(frozen=True)
class FeatureVector:
    """62 binary values, aligned with the schema's feature names."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != FEATURE_COUNT:
            raise SchemaError(
                f"feature vector has {len(self.values)} values, expected {FEATURE_COUNT}")
        if any(v not in (0, 1) for v in self.values):
            raise SchemaError("feature vector values must be 0 or 1")

    def __len__(self) -> int:
        return FEATURE_COUNT

    def __getitem__(self, index: int) -> int:
        return self.values[index]


@dataclass
class FeatureSchema:
    """Feature names, base-symbol rows, and diacritic override rules."""

    feature_names: tuple[str, ...]
    base_table: dict[str, FeatureVector]            # NFD base symbol -> vector
    diacritic_rules: dict[str, tuple[tuple[int, int], ...]]  # NFD diacritic -> ((idx, val), ...)
    source: str = ""
    _index: dict[str, int] = field(init=False, repr=False)
    _cache: dict[str, FeatureVector] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._index = {name: i for i, name in enumerate(self.feature_names)}

    def feature_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown feature name {name!r}") from None

    def base_symbols(self) -> list[str]:
        return sorted(self.base_table)


def _nfd(text: str) -> str:
    return unicodedata.normalize("NFD", text)


def load_schema(table_path: str | Path, rules_path: str | Path) -> FeatureSchema:
    """Load and validate a feature table plus diacritic rules.

    The table CSV must have a ``segment`` column followed by exactly 62
    feature-name columns; every cell is 0 or 1. Each rule row names a
    diacritic, an existing feature, and the value it forces.
    """
    table_path = Path(table_path)
    rules_path = Path(rules_path)

    with open(table_path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{table_path}: empty feature table") from None
        if len(header) != FEATURE_COUNT + 1:
            raise SchemaError(
                f"{table_path}: expected {FEATURE_COUNT + 1} columns "
                f"(segment + {FEATURE_COUNT} features), found {len(header)}")
        if header[0] != "segment":
            raise SchemaError(f"{table_path}: first column must be 'segment', got {header[0]!r}")
        feature_names = tuple(header[1:])
        if len(set(feature_names)) != FEATURE_COUNT:
            raise SchemaError(f"{table_path}: duplicate feature names in header")

        base_table: dict[str, FeatureVector] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != FEATURE_COUNT + 1:
                raise SchemaError(
                    f"{table_path}:{lineno}: expected {FEATURE_COUNT + 1} cells, "
                    f"found {len(row)}")
            symbol = _nfd(row[0])
            if symbol in base_table:
                raise SchemaError(f"{table_path}:{lineno}: duplicate segment row {row[0]!r}")
            try:
                values = tuple(int(cell) for cell in row[1:])
            except ValueError:
                raise SchemaError(f"{table_path}:{lineno}: non-integer feature cell") from None
            if any(v not in (0, 1) for v in values):
                raise SchemaError(f"{table_path}:{lineno}: feature cells must be 0 or 1")
            base_table[symbol] = FeatureVector(values)

    index = {name: i for i, name in enumerate(feature_names)}
    rules: dict[str, list[tuple[int, int]]] = {}
    with open(rules_path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{rules_path}: empty rules file") from None
        if [h.strip() for h in header] != ["diacritic", "feature", "value"]:
            raise SchemaError(
                f"{rules_path}: expected header 'diacritic,feature,value', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise SchemaError(f"{rules_path}:{lineno}: expected 3 cells, found {len(row)}")
            diacritic, feature, value_text = row
            if feature not in index:
                raise SchemaError(
                    f"{rules_path}:{lineno}: rule references unknown feature {feature!r}")
            try:
                value = int(value_text)
            except ValueError:
                raise SchemaError(f"{rules_path}:{lineno}: non-integer rule value") from None
            if value not in (0, 1):
                raise SchemaError(f"{rules_path}:{lineno}: rule value must be 0 or 1")
            rules.setdefault(_nfd(diacritic), []).append((index[feature], value))

    return FeatureSchema(
        feature_names=feature_names,
        base_table=base_table,
        diacritic_rules={d: tuple(rs) for d, rs in rules.items()},
        source=str(table_path),
    )


def encode(seg: Segment, schema: FeatureSchema) -> FeatureVector:
    """Encode a segment: base row, then diacritic overrides in segment order."""
    cached = schema._cache.get(seg.canonical)
    if cached is not None:
        return cached
    base = schema.base_table.get(_nfd(seg.base))
    if base is None:
        raise EncodeError(f"segment base {seg.base!r} not in feature table")
    values = list(base.values)
    for diacritic in seg.diacritics:
        overrides = schema.diacritic_rules.get(_nfd(diacritic))
        if overrides is None:
            raise EncodeError(f"no feature rule for diacritic {diacritic!r} "
                              f"(segment {seg.canonical!r})")
        for idx, val in overrides:
            values[idx] = val
    vector = FeatureVector(tuple(values))
    schema._cache[seg.canonical] = vector
    return vector


def feature_distance(a: FeatureVector, b: FeatureVector,
                     weights: Sequence[float] | None = None) -> float:
    """Weighted Hamming distance between two feature vectors.

    Default weights are all 1, making the distance the count of differing
    coordinates. Weights must be non-negative and of length 62.
    """
    if weights is None:
        return float(sum(x != y for x, y in zip(a.values, b.values)))
    if len(weights) != FEATURE_COUNT:
        raise SchemaError(f"weight vector has {len(weights)} entries, expected {FEATURE_COUNT}")
    if any(w < 0 for w in weights):
        raise SchemaError("feature weights must be non-negative")
    return float(sum(w for x, y, w in zip(a.values, b.values, weights) if x != y))


def nearest_segment(target: Segment, candidates: Iterable[Segment],
                    schema: FeatureSchema,
                    weights: Sequence[float] | None = None) -> tuple[Segment, float]:
    """Closest candidate by feature distance.

    Ties break toward fewer diacritics, then canonical string in codepoint
    order, so the result is deterministic for any candidate iteration order.
    """
    target_vec = encode(target, schema)
    best: tuple[float, int, str, Segment] | None = None
    seen_any = False
    for cand in candidates:
        seen_any = True
        d = feature_distance(target_vec, encode(cand, schema), weights)
        key = (d, len(cand.diacritics), cand.canonical)
        if best is None or key < (best[0], best[1], best[2]):
            best = (d, len(cand.diacritics), cand.canonical, cand)
    if not seen_any or best is None:
        raise EncodeError("nearest_segment requires a nonempty candidate set")
    return best[3], best[0]
