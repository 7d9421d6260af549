"""Per-language phone inventories: loading, filtering, and similarity ranking.

Inventories come from a PHOIBLE-style CSV extract (``language,phoneme`` with
a header row) or from a plain one-phone-per-line file. Sequences can be
restricted to an inventory by replacing out-of-inventory segments with their
feature-nearest member, and languages can be ranked by inventory similarity
as a stand-in for an external language-relatedness resource.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

from .errors import InventoryError, PhoneParseError
from .features import FeatureSchema, encode, feature_distance, nearest_segment
from .ipa import PhoneSequence, Segment, SymbolTable

log = logging.getLogger(__name__)

DistanceMode = Literal["jaccard", "feature"]


@dataclass(frozen=True)
class PhoneInventory:
    """The set of phones a language uses."""

    language: str
    phones: frozenset[Segment]
    _canonical: frozenset[str] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.phones:
            raise InventoryError(f"inventory for {self.language!r} is empty")
        object.__setattr__(self, "_canonical",
                           frozenset(p.canonical for p in self.phones))

    def __len__(self) -> int:
        return len(self.phones)

    def __contains__(self, seg: Segment) -> bool:
        return seg.canonical in self._canonical

    def sorted_phones(self) -> list[Segment]:
        """Deterministic iteration order (canonical codepoint order)."""
        return sorted(self.phones, key=lambda s: s.canonical)


def make_inventory(language: str, phones: Iterable[Segment]) -> PhoneInventory:
    return PhoneInventory(language=language, phones=frozenset(phones))


def _parse_phone_cell(cell: str, table: SymbolTable, path: Path, lineno: int) -> Segment:
    try:
        segments = table.parse_token(cell.strip())
    except PhoneParseError as exc:
        raise InventoryError(f"{path}:{lineno}: unparseable phone {cell!r}: {exc}") from exc
    if len(segments) != 1:
        raise InventoryError(
            f"{path}:{lineno}: phone cell {cell!r} parsed to {len(segments)} segments, "
            "expected exactly 1")
    return segments[0]


def load_inventory(path: str | Path, language: str, table: SymbolTable) -> PhoneInventory:
    """Load one language's inventory from a CSV extract or plain phone list.

    A file whose first non-comment line is the header ``language,phoneme``
    is treated as a multi-language extract and filtered to ``language``;
    anything else is read as one phone per line for that language.
    Duplicate phones collapse to one entry with a logged warning.
    """
    path = Path(path)
    phones: list[Segment] = []
    duplicates = 0
    seen: set[str] = set()

    with open(path, encoding="utf-8", newline="") as f:
        first = f.readline()
        is_extract = [c.strip().lower() for c in first.split(",")][:2] == ["language", "phoneme"]
        f.seek(0)
        if is_extract:
            reader = csv.reader(f)
            next(reader)  # header
            found_language = False
            for lineno, row in enumerate(reader, start=2):
                if not row or (row[0].startswith("#")):
                    continue
                if len(row) < 2:
                    raise InventoryError(f"{path}:{lineno}: expected language,phoneme row")
                if row[0] != language:
                    continue
                found_language = True
                seg = _parse_phone_cell(row[1], table, path, lineno)
                if seg.canonical in seen:
                    duplicates += 1
                    continue
                seen.add(seg.canonical)
                phones.append(seg)
            if not found_language:
                raise InventoryError(f"{path}: no rows for language {language!r}")
        else:
            for lineno, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                seg = _parse_phone_cell(line, table, path, lineno)
                if seg.canonical in seen:
                    duplicates += 1
                    continue
                seen.add(seg.canonical)
                phones.append(seg)

    if duplicates:
        log.warning("%s: %d duplicate phone rows collapsed for %s", path, duplicates, language)
    if not phones:
        raise InventoryError(f"{path}: empty inventory for language {language!r}")
    return make_inventory(language, phones)


def load_all_inventories(path: str | Path, table: SymbolTable) -> dict[str, PhoneInventory]:
    """Load every language in a PHOIBLE-style extract."""
    path = Path(path)
    by_language: dict[str, list[Segment]] = {}
    seen: dict[str, set[str]] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header[:2]] != ["language", "phoneme"]:
            raise InventoryError(f"{path}: expected a 'language,phoneme' CSV extract")
        for lineno, row in enumerate(reader, start=2):
            if not row or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise InventoryError(f"{path}:{lineno}: expected language,phoneme row")
            language = row[0]
            seg = _parse_phone_cell(row[1], table, path, lineno)
            if seg.canonical in seen.setdefault(language, set()):
                continue
            seen[language].add(seg.canonical)
            by_language.setdefault(language, []).append(seg)
    return {lang: make_inventory(lang, phones) for lang, phones in by_language.items()}


def restrict_sequence(seq: PhoneSequence, inv: PhoneInventory,
                      schema: FeatureSchema) -> PhoneSequence:
    """Replace out-of-inventory segments with their feature-nearest member.

    Segments already in the inventory pass through unchanged, so the
    operation is idempotent and length-preserving.
    """
    members = inv.sorted_phones()
    out: list[Segment] = []
    for seg in seq:
        if seg in inv:
            out.append(seg)
        else:
            replacement, _ = nearest_segment(seg, members, schema)
            out.append(replacement)
    return PhoneSequence(out)


def _directed_mean(a: PhoneInventory, b: PhoneInventory, schema: FeatureSchema) -> float:
    b_vecs = [encode(p, schema) for p in b.sorted_phones()]
    total = 0.0
    for p in a.sorted_phones():
        v = encode(p, schema)
        total += min(feature_distance(v, w) for w in b_vecs)
    return total / len(a)


def inventory_distance(a: PhoneInventory, b: PhoneInventory,
                       schema: FeatureSchema | None = None,
                       mode: DistanceMode = "jaccard") -> float:
    """Distance between two inventories.

    ``jaccard``: 1 - |A∩B| / |A∪B| over canonical forms. ``feature``: the
    symmetrized mean over each inventory's phones of the minimum feature
    distance to the other inventory.
    """
    if mode == "jaccard":
        a_set = {p.canonical for p in a.phones}
        b_set = {p.canonical for p in b.phones}
        return 1.0 - len(a_set & b_set) / len(a_set | b_set)
    if mode == "feature":
        if schema is None:
            raise InventoryError("feature-mode inventory distance requires a schema")
        return 0.5 * (_directed_mean(a, b, schema) + _directed_mean(b, a, schema))
    raise InventoryError(f"unknown inventory distance mode {mode!r}")


def nearest_languages(target: PhoneInventory, pool: list[PhoneInventory], k: int,
                      schema: FeatureSchema | None = None,
                      mode: DistanceMode = "jaccard") -> list[tuple[str, float]]:
    """The k pool languages closest to the target inventory.

    Ties break by language identifier so the ranking is stable and
    deterministic.
    """
    if not pool:
        raise InventoryError("nearest_languages requires a nonempty pool")
    if k <= 0:
        raise InventoryError(f"k must be positive, got {k}")
    if k > len(pool):
        raise InventoryError(f"k={k} exceeds pool size {len(pool)}")
    ranked = sorted(
        ((inventory_distance(target, inv, schema, mode), inv.language) for inv in pool),
        key=lambda pair: (pair[0], pair[1]))
    return [(language, distance) for distance, language in ranked[:k]]
