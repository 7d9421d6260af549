"""Unicode IPA phone-string parsing.

A phone string is segmented by NFD-normalizing the input and running a
greedy longest-match against the symbol table's base symbols. Combining
marks and modifier letters listed as diacritics attach to the preceding
base; whitespace separates tokens and produces no segments. Segments render
back to a canonical NFC form with diacritics in symbol-table order, so
parsing a canonical rendering always round-trips.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import PhoneParseError, SymbolTableError


def _nfd(text: str) -> str:
    return unicodedata.normalize("NFD", text)


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class Segment:
    """One parsed phone: a base symbol plus ordered diacritics.

    ``canonical`` is the NFC rendering of base followed by diacritics in
    symbol-table order. Segments constructed through ``SymbolTable.segment``
    or the parser always have table-normalized diacritic order; equality and
    hashing use the canonical form.
    """

    base: str
    diacritics: tuple[str, ...]
    canonical: str

    def __str__(self) -> str:
        return self.canonical

    def __repr__(self) -> str:
        return f"Segment({self.canonical!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Segment):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)


def make_segment(base: str, diacritics: Iterable[str] = ()) -> Segment:
    """Build a Segment without table validation (diacritic order kept as given).

    Prefer ``SymbolTable.segment`` when a table is at hand; this constructor
    exists for tests and for deserialization of already-normalized data.
    """
    diacritics = tuple(diacritics)
    return Segment(base, diacritics, _nfc(base + "".join(diacritics)))


@dataclass(frozen=True)
class PhoneSequence:
    """An ordered sequence of segments, possibly empty."""

    segments: tuple[Segment, ...] = ()

    def __init__(self, segments: Iterable[Segment] = ()):
        object.__setattr__(self, "segments", tuple(segments))

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __getitem__(self, index):
        return self.segments[index]

    def __add__(self, other: "PhoneSequence") -> "PhoneSequence":
        return PhoneSequence(self.segments + other.segments)

    def __repr__(self) -> str:
        return f"PhoneSequence({self.render()!r})"

    def tokens(self) -> list[str]:
        """Canonical string of each segment, in order."""
        return [seg.canonical for seg in self.segments]

    def render(self) -> str:
        """Space-joined canonical rendering."""
        return " ".join(self.tokens())


@dataclass
class SymbolTable:
    """Base-symbol and diacritic alphabet, immutable after load.

    Matching happens over NFD forms; the diacritic order from the source
    file defines the canonical diacritic order inside a segment.
    """

    bases: dict[str, str]        # NFD form -> canonical NFC form
    diacritics: dict[str, int]   # NFD form -> table rank
    source: str = ""
    _max_entry_len: int = field(init=False, repr=False, default=0)
    _token_cache: dict[str, tuple[Segment, ...]] = field(
        init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        entries = list(self.bases) + list(self.diacritics)
        self._max_entry_len = max((len(e) for e in entries), default=0)

    def __contains__(self, symbol: str) -> bool:
        return _nfd(symbol) in self.bases

    def is_diacritic(self, symbol: str) -> bool:
        return _nfd(symbol) in self.diacritics

    def segment(self, base: str, diacritics: Iterable[str] = ()) -> Segment:
        """Validated Segment with diacritics normalized to table order."""
        base_nfd = _nfd(base)
        if base_nfd not in self.bases:
            raise PhoneParseError(f"unknown base symbol {base!r}")
        marks = []
        for d in diacritics:
            d_nfd = _nfd(d)
            if d_nfd not in self.diacritics:
                raise PhoneParseError(f"unknown diacritic {d!r}")
            marks.append(d_nfd)
        marks.sort(key=self.diacritics.__getitem__)
        return make_segment(base_nfd, marks)

    def parse_token(self, token: str) -> tuple[Segment, ...]:
        """Segment one whitespace-free token (cached; tokens repeat heavily)."""
        cached = self._token_cache.get(token)
        if cached is None:
            cached = tuple(_parse_token(token, self))
            self._token_cache[token] = cached
        return cached


def load_symbol_table(path: str | Path) -> SymbolTable:
    """Load a symbol table from a ``<kind> <symbol>`` per-line text file.

    Kind is ``base`` or ``diacritic``; ``#`` starts a comment line. Duplicate
    entries (same codepoints, either kind) are an error reported with the
    line number.
    """
    path = Path(path)
    bases: dict[str, str] = {}
    diacritics: dict[str, int] = {}
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise SymbolTableError(
                    f"{path}:{lineno}: expected '<kind> <symbol>', got {line!r}")
            kind, symbol = parts
            symbol_nfd = _nfd(symbol)
            if symbol_nfd in seen:
                raise SymbolTableError(
                    f"{path}:{lineno}: duplicate entry {symbol!r} "
                    f"(first seen on line {seen[symbol_nfd]})")
            seen[symbol_nfd] = lineno
            if kind == "base":
                bases[symbol_nfd] = _nfc(symbol)
            elif kind == "diacritic":
                diacritics[symbol_nfd] = len(diacritics)
            else:
                raise SymbolTableError(
                    f"{path}:{lineno}: unknown kind {kind!r} (expected base or diacritic)")
    return SymbolTable(bases=bases, diacritics=diacritics, source=str(path))


def _parse_token(token: str, table: SymbolTable) -> list[Segment]:
    """Greedy longest-match of one token; raises on unknown symbols."""
    text = _nfd(token)
    segments: list[Segment] = []
    cur_base: str | None = None
    cur_marks: list[str] = []

    def flush() -> None:
        nonlocal cur_base, cur_marks
        if cur_base is not None:
            cur_marks.sort(key=table.diacritics.__getitem__)
            segments.append(make_segment(cur_base, cur_marks))
            cur_base, cur_marks = None, []

    i = 0
    n = len(text)
    while i < n:
        matched = None
        limit = min(table._max_entry_len, n - i)
        for width in range(limit, 0, -1):
            chunk = text[i:i + width]
            if chunk in table.bases:
                matched = ("base", chunk)
                break
            if chunk in table.diacritics:
                matched = ("diacritic", chunk)
                break
        if matched is None:
            byte_offset = len(text[:i].encode("utf-8"))
            seg_index = len(segments) + (1 if cur_base is not None else 0)
            raise PhoneParseError(
                f"unknown codepoint {text[i]!r} (U+{ord(text[i]):04X}) at "
                f"character {i} (byte {byte_offset}, segment index {seg_index})",
                char_index=i, byte_offset=byte_offset, segment_index=seg_index)
        kind, chunk = matched
        if kind == "base":
            flush()
            cur_base = chunk
        else:
            if cur_base is None:
                raise PhoneParseError(
                    f"diacritic {chunk!r} at character {i} has no preceding base symbol",
                    char_index=i, segment_index=len(segments))
            cur_marks.append(chunk)
        i += len(chunk)
    flush()
    return segments


def parse_phone_string(s: str, table: SymbolTable) -> PhoneSequence:
    """Parse a whitespace-separated phone string into a PhoneSequence.

    Deterministic: NFD normalization followed by greedy longest-match per
    token, with diacritics binding to the preceding base.
    """
    segments: list[Segment] = []
    for token in s.split():
        segments.extend(table.parse_token(token))
    return PhoneSequence(segments)


def canonicalize(seg: Segment) -> str:
    """Canonical NFC rendering of a segment."""
    return seg.canonical
