"""Pronunciation dictionaries in a forced-aligner-compatible text format.

Each line is ``word<TAB or spaces>space-separated phone tokens``; ``#``
starts a comment. Words are case-folded; repeated identical lines increment
a pronunciation's count, and distinct lines for the same word become
alternative pronunciations. Saving writes one line per observation so that
load(save(x)) reproduces counts exactly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal

from .errors import LexiconError, PhoneParseError
from .ipa import PhoneSequence, SymbolTable

log = logging.getLogger(__name__)

Provenance = Literal["ground_truth", "g2p", "recognized"]
PROVENANCE_VALUES = ("ground_truth", "g2p", "recognized")


@dataclass
class PronEntry:
    phones: PhoneSequence
    count: int
    provenance: Provenance
    seq: int = 0  # arrival index within the word, breaks count ties

    def key(self) -> tuple[str, int, str]:
        return (self.phones.render(), self.count, self.provenance)


@dataclass
class Lexicon:
    """Word -> ordered pronunciations, highest count first."""

    _entries: dict[str, list[PronEntry]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return word.casefold() in self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        if self._entries.keys() != other._entries.keys():
            return False
        return all(
            [e.key() for e in self._entries[w]] == [e.key() for e in other._entries[w]]
            for w in self._entries)

    def words(self) -> list[str]:
        """All words in Unicode codepoint order."""
        return sorted(self._entries)

    def items(self) -> Iterator[tuple[str, list[PronEntry]]]:
        """Entries in insertion order (load/build order)."""
        return iter(self._entries.items())

    def add(self, word: str, phones: PhoneSequence,
            provenance: Provenance, count: int = 1) -> None:
        """Record one or more observations of a pronunciation."""
        word = word.casefold()
        if not word or any(ch.isspace() for ch in word):
            raise LexiconError(f"invalid lexicon word {word!r}")
        if count <= 0:
            raise LexiconError(f"count must be positive, got {count}")
        prons = self._entries.setdefault(word, [])
        rendered = phones.render()
        for entry in prons:
            if entry.phones.render() == rendered and entry.provenance == provenance:
                entry.count += count
                break
        else:
            prons.append(PronEntry(phones=phones, count=count,
                                   provenance=provenance, seq=len(prons)))
        prons.sort(key=lambda e: (-e.count, e.seq))

    def pronunciations(self, word: str) -> list[PronEntry]:
        return list(self._entries.get(word.casefold(), []))

    def total_count(self) -> int:
        return sum(e.count for prons in self._entries.values() for e in prons)


def lookup(lex: Lexicon, word: str) -> list[PhoneSequence]:
    """Pronunciations in count order; empty list for OOV words."""
    return [entry.phones for entry in lex.pronunciations(word)]


def load_lexicon(path: str | Path, table: SymbolTable,
                 provenance: Provenance = "ground_truth") -> Lexicon:
    """Load a dictionary file, assigning every entry the given provenance."""
    if provenance not in PROVENANCE_VALUES:
        raise LexiconError(f"unknown provenance {provenance!r}")
    path = Path(path)
    lex = Lexicon()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" in line:
                word, _, pron_text = line.partition("\t")
            else:
                parts = line.split(None, 1)
                if len(parts) < 2:
                    raise LexiconError(f"{path}:{lineno}: empty pronunciation field")
                word, pron_text = parts
            word = word.strip()
            pron_text = pron_text.strip()
            if not word:
                raise LexiconError(f"{path}:{lineno}: empty word field")
            if not pron_text:
                raise LexiconError(f"{path}:{lineno}: empty pronunciation field")
            try:
                phones = PhoneSequence(
                    seg for token in pron_text.split() for seg in table.parse_token(token))
            except PhoneParseError as exc:
                raise LexiconError(f"{path}:{lineno}: {exc}") from exc
            lex.add(word, phones, provenance)
    return lex


def save_lexicon(lex: Lexicon, path: str | Path) -> None:
    """Write the lexicon deterministically.

    Words appear in codepoint order; each pronunciation is written once per
    observation (count) in stored order, so counts survive a round-trip.
    """
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        for word in lex.words():
            for entry in lex.pronunciations(word):
                line = f"{word}\t{entry.phones.render()}\n"
                f.write(line * entry.count)


def export_json(lex: Lexicon, path: str | Path) -> None:
    """Debugging export with explicit counts and provenance."""
    payload = {
        word: [{"phones": e.phones.render(), "count": e.count,
                "provenance": e.provenance}
               for e in lex.pronunciations(word)]
        for word in lex.words()
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


def oov_words(text_corpus: Iterable[Iterable[str]], lex: Lexicon) -> list[str]:
    """Distinct out-of-vocabulary words in first-occurrence order."""
    seen: set[str] = set()
    out: list[str] = []
    for text in text_corpus:
        for word in text:
            folded = word.casefold()
            if folded in seen:
                continue
            seen.add(folded)
            if folded not in lex:
                out.append(folded)
    return out
