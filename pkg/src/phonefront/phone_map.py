"""Deterministic target-to-source phone maps for cross-lingual transfer prep.

Every phone of a target-language inventory is assigned its feature-nearest
phone in a source-language inventory. Maps serialize to a sorted TSV so two
builds over the same inventories are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import PhoneMapError
from .features import FeatureSchema, nearest_segment
from .inventory import PhoneInventory
from .ipa import PhoneSequence, Segment, SymbolTable


@dataclass(frozen=True)
class PhoneMap:
    """Mapping from target canonical form to (source segment, distance)."""

    target_language: str
    source_language: str
    entries: dict[str, tuple[Segment, float]]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, seg: Segment) -> bool:
        return seg.canonical in self.entries

    def map_segment(self, seg: Segment) -> Segment:
        try:
            return self.entries[seg.canonical][0]
        except KeyError:
            raise PhoneMapError(
                f"segment {seg.canonical!r} has no entry in the "
                f"{self.target_language}->{self.source_language} phone map") from None


def build_phone_map(target: PhoneInventory, source: PhoneInventory,
                    schema: FeatureSchema,
                    weights: Sequence[float] | None = None) -> PhoneMap:
    """Map each target phone to its nearest source phone.

    A phone present in both inventories maps to itself at distance 0; the
    nearest-segment tie-breaks make the whole map deterministic.
    """
    source_phones = source.sorted_phones()
    entries: dict[str, tuple[Segment, float]] = {}
    for phone in target.sorted_phones():
        best, distance = nearest_segment(phone, source_phones, schema, weights)
        entries[phone.canonical] = (best, distance)
    return PhoneMap(target_language=target.language, source_language=source.language,
                    entries=entries)


def apply_phone_map(seq: PhoneSequence, phone_map: PhoneMap) -> PhoneSequence:
    """Element-wise substitution through the map; length is preserved."""
    return PhoneSequence(phone_map.map_segment(seg) for seg in seq)


def unmapped_source_phones(phone_map: PhoneMap, source: PhoneInventory) -> set[Segment]:
    """Source phones that no target phone maps to."""
    image = {seg.canonical for seg, _ in phone_map.entries.values()}
    return {p for p in source.phones if p.canonical not in image}


def save_phone_map(phone_map: PhoneMap, path: str | Path) -> None:
    """Write ``target<TAB>source<TAB>distance`` rows sorted by target form."""
    path = Path(path)
    lines = [f"# target_language={phone_map.target_language}",
             f"# source_language={phone_map.source_language}"]
    for target in sorted(phone_map.entries):
        source, distance = phone_map.entries[target]
        lines.append(f"{target}\t{source.canonical}\t{distance!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_phone_map(path: str | Path, table: SymbolTable) -> PhoneMap:
    """Read a phone map written by save_phone_map."""
    path = Path(path)
    target_language = source_language = ""
    entries: dict[str, tuple[Segment, float]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                meta = line[1:].strip()
                if meta.startswith("target_language="):
                    target_language = meta.split("=", 1)[1]
                elif meta.startswith("source_language="):
                    source_language = meta.split("=", 1)[1]
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise PhoneMapError(f"{path}:{lineno}: expected 3 tab-separated fields")
            target_text, source_text, distance_text = parts
            target_segs = table.parse_token(target_text)
            source_segs = table.parse_token(source_text)
            if len(target_segs) != 1 or len(source_segs) != 1:
                raise PhoneMapError(f"{path}:{lineno}: map fields must be single segments")
            try:
                distance = float(distance_text)
            except ValueError:
                raise PhoneMapError(f"{path}:{lineno}: bad distance {distance_text!r}") from None
            entries[target_segs[0].canonical] = (source_segs[0], distance)
    if not entries:
        raise PhoneMapError(f"{path}: empty phone map")
    return PhoneMap(target_language=target_language, source_language=source_language,
                    entries=entries)
