#!/usr/bin/env python3
"""Regenerate the default data tables under src/phonefront/data/.

The feature table, symbol table, diacritic rules, and the sample inventory
extract are all derived from the phone definitions below, so they stay
mutually consistent (every inventory phone parses against the symbol table
and encodes against the feature table). Run from the repository root:

    python tools/build_data_tables.py
"""

from __future__ import annotations

import csv
import unicodedata
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "phonefront" / "data"

# 62 binary feature dimensions, fixed order. The first 49 are the
# class/laryngeal/place/manner/vowel-quality core; the rest add length and
# finer articulation detail.
FEATURE_NAMES = [
    # major class
    "consonant", "vowel", "sonorant", "syllabic", "continuant",
    "approximant", "lateral", "rhotic",
    # laryngeal
    "voice", "aspirated", "breathy", "creaky", "ejective",
    # place (consonants)
    "place_bilabial", "place_labiodental", "place_dental", "place_alveolar",
    "place_postalveolar", "place_retroflex", "place_palatal", "place_velar",
    "place_uvular", "place_pharyngeal", "place_glottal", "place_labial_velar",
    # manner (consonants)
    "manner_plosive", "manner_nasal", "manner_trill", "manner_tap",
    "manner_fricative", "manner_affricate", "manner_approximant",
    "manner_implosive", "manner_click",
    "sibilant",
    # secondary articulation
    "labialized", "palatalized", "velarized", "pharyngealized", "nasalized",
    # vowel quality
    "height_close", "height_near_close", "height_close_mid", "height_mid",
    "height_open_mid", "height_near_open", "height_open",
    "frontness_front", "frontness_near_front", "frontness_central",
    "frontness_near_back", "frontness_back",
    "rounded", "rhotacized", "tense", "reduced",
    # articulation adjustments (diacritic targets)
    "advanced", "retracted", "raised", "lowered",
    # length
    "long", "half_long",
]

SONORANT_MANNERS = {"nasal", "trill", "tap", "approximant"}
CONTINUANT_MANNERS = {"trill", "fricative", "approximant"}

# symbol: (voice, place, manner, extra feature flags)
CONSONANTS = {
    "p": (0, "bilabial", "plosive", ()),
    "b": (1, "bilabial", "plosive", ()),
    "t": (0, "alveolar", "plosive", ()),
    "d": (1, "alveolar", "plosive", ()),
    "ʈ": (0, "retroflex", "plosive", ()),
    "ɖ": (1, "retroflex", "plosive", ()),
    "c": (0, "palatal", "plosive", ()),
    "ɟ": (1, "palatal", "plosive", ()),
    "k": (0, "velar", "plosive", ()),
    "ɡ": (1, "velar", "plosive", ()),
    "q": (0, "uvular", "plosive", ()),
    "ɢ": (1, "uvular", "plosive", ()),
    "ʔ": (0, "glottal", "plosive", ()),
    "ɓ": (1, "bilabial", "implosive", ()),
    "ɗ": (1, "alveolar", "implosive", ()),
    "m": (1, "bilabial", "nasal", ()),
    "ɱ": (1, "labiodental", "nasal", ()),
    "n": (1, "alveolar", "nasal", ()),
    "ɳ": (1, "retroflex", "nasal", ()),
    "ɲ": (1, "palatal", "nasal", ()),
    "ŋ": (1, "velar", "nasal", ()),
    "ɴ": (1, "uvular", "nasal", ()),
    "ʙ": (1, "bilabial", "trill", ()),
    "r": (1, "alveolar", "trill", ("rhotic",)),
    "ʀ": (1, "uvular", "trill", ("rhotic",)),
    "ɾ": (1, "alveolar", "tap", ("rhotic",)),
    "ɽ": (1, "retroflex", "tap", ("rhotic",)),
    "ɸ": (0, "bilabial", "fricative", ()),
    "β": (1, "bilabial", "fricative", ()),
    "f": (0, "labiodental", "fricative", ()),
    "v": (1, "labiodental", "fricative", ()),
    "θ": (0, "dental", "fricative", ()),
    "ð": (1, "dental", "fricative", ()),
    "s": (0, "alveolar", "fricative", ("sibilant",)),
    "z": (1, "alveolar", "fricative", ("sibilant",)),
    "ʃ": (0, "postalveolar", "fricative", ("sibilant",)),
    "ʒ": (1, "postalveolar", "fricative", ("sibilant",)),
    "ʂ": (0, "retroflex", "fricative", ("sibilant",)),
    "ʐ": (1, "retroflex", "fricative", ("sibilant",)),
    "ɕ": (0, "palatal", "fricative", ("sibilant",)),
    "ʑ": (1, "palatal", "fricative", ("sibilant",)),
    "ç": (0, "palatal", "fricative", ()),
    "ʝ": (1, "palatal", "fricative", ()),
    "x": (0, "velar", "fricative", ()),
    "ɣ": (1, "velar", "fricative", ()),
    "χ": (0, "uvular", "fricative", ()),
    "ʁ": (1, "uvular", "fricative", ()),
    "ħ": (0, "pharyngeal", "fricative", ()),
    "ʕ": (1, "pharyngeal", "fricative", ()),
    "h": (0, "glottal", "fricative", ()),
    "ɦ": (1, "glottal", "fricative", ("breathy",)),
    "ɬ": (0, "alveolar", "fricative", ("lateral",)),
    "ɮ": (1, "alveolar", "fricative", ("lateral",)),
    "ʋ": (1, "labiodental", "approximant", ()),
    "ɹ": (1, "alveolar", "approximant", ("rhotic",)),
    "ɻ": (1, "retroflex", "approximant", ("rhotic",)),
    "j": (1, "palatal", "approximant", ()),
    "ɰ": (1, "velar", "approximant", ()),
    "w": (1, "labial_velar", "approximant", ()),
    "ʍ": (0, "labial_velar", "fricative", ()),
    "l": (1, "alveolar", "approximant", ("lateral",)),
    "ɭ": (1, "retroflex", "approximant", ("lateral",)),
    "ʎ": (1, "palatal", "approximant", ("lateral",)),
    "ʟ": (1, "velar", "approximant", ("lateral",)),
    "ɫ": (1, "alveolar", "approximant", ("lateral", "velarized")),
    "t͡s": (0, "alveolar", "affricate", ("sibilant",)),
    "d͡z": (1, "alveolar", "affricate", ("sibilant",)),
    "t͡ʃ": (0, "postalveolar", "affricate", ("sibilant",)),
    "d͡ʒ": (1, "postalveolar", "affricate", ("sibilant",)),
    "t͡ɕ": (0, "palatal", "affricate", ("sibilant",)),
    "d͡ʑ": (1, "palatal", "affricate", ("sibilant",)),
    "t͡ɬ": (0, "alveolar", "affricate", ("lateral",)),
    "p͡f": (0, "labiodental", "affricate", ()),
}

# symbol: (height, frontness, rounded, extra feature flags)
VOWELS = {
    "i": ("close", "front", 0, ("tense",)),
    "y": ("close", "front", 1, ("tense",)),
    "ɨ": ("close", "central", 0, ("tense",)),
    "ʉ": ("close", "central", 1, ("tense",)),
    "ɯ": ("close", "back", 0, ("tense",)),
    "u": ("close", "back", 1, ("tense",)),
    "ɪ": ("near_close", "near_front", 0, ()),
    "ʏ": ("near_close", "near_front", 1, ()),
    "ʊ": ("near_close", "near_back", 1, ()),
    "e": ("close_mid", "front", 0, ("tense",)),
    "ø": ("close_mid", "front", 1, ("tense",)),
    "ɘ": ("close_mid", "central", 0, ()),
    "ɵ": ("close_mid", "central", 1, ()),
    "ɤ": ("close_mid", "back", 0, ("tense",)),
    "o": ("close_mid", "back", 1, ("tense",)),
    "ə": ("mid", "central", 0, ("reduced",)),
    "ɛ": ("open_mid", "front", 0, ()),
    "œ": ("open_mid", "front", 1, ()),
    "ɜ": ("open_mid", "central", 0, ()),
    "ɞ": ("open_mid", "central", 1, ()),
    "ʌ": ("open_mid", "back", 0, ()),
    "ɔ": ("open_mid", "back", 1, ()),
    "æ": ("near_open", "front", 0, ()),
    "ɐ": ("near_open", "central", 0, ("reduced",)),
    "a": ("open", "front", 0, ()),
    "ɶ": ("open", "front", 1, ()),
    "ɑ": ("open", "back", 0, ()),
    "ɒ": ("open", "back", 1, ()),
}

# Combining diacritics must stay in ascending canonical-combining-class order
# so that NFC never reorders a canonical rendering; modifier letters (class 0)
# go last. Each diacritic carries exactly the feature overrides listed here.
DIACRITICS = [
    ("̥", "voice", 0),          # U+0325 ring below (voiceless)
    ("̬", "voice", 1),          # U+032C caron below (voiced)
    ("̤", "breathy", 1),        # U+0324 diaeresis below
    ("̰", "creaky", 1),         # U+0330 tilde below
    ("̩", "syllabic", 1),       # U+0329 vertical line below
    ("̯", "syllabic", 0),       # U+032F inverted breve below (non-syllabic)
    ("̟", "advanced", 1),       # U+031F plus sign below
    ("̠", "retracted", 1),      # U+0320 minus sign below
    ("̝", "raised", 1),         # U+031D up tack below
    ("̞", "lowered", 1),        # U+031E down tack below
    ("̃", "nasalized", 1),      # U+0303 tilde (class 230, after all 220s)
    ("ʰ", "aspirated", 1),      # U+02B0
    ("ʷ", "labialized", 1),     # U+02B7
    ("ʲ", "palatalized", 1),    # U+02B2
    ("ˠ", "velarized", 1),      # U+02E0
    ("ˤ", "pharyngealized", 1),  # U+02E4
    ("ʼ", "ejective", 1),       # U+02BC
    ("˞", "rhotacized", 1),     # U+02DE
    ("ː", "long", 1),           # U+02D0
    ("ˑ", "half_long", 1),      # U+02D1
]

# Sample PHOIBLE-style extract. Inventories are illustrative, not exhaustive;
# Frisian is pinned at 40 phones (20 consonants, 20 vowels).
INVENTORIES = {
    "fry": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z",
        "x", "ɣ", "h", "m", "n", "ŋ", "l", "r", "j", "w",
        "i", "iː", "y", "yː", "u", "uː", "ɪ", "ʏ", "ʊ", "ɛ",
        "ɛː", "ɔ", "ɔː", "a", "aː", "ə", "eː", "øː", "oː", "œ",
    ],
    "eng": [
        "p", "b", "t", "d", "k", "ɡ", "t͡ʃ", "d͡ʒ", "f", "v",
        "θ", "ð", "s", "z", "ʃ", "ʒ", "h", "m", "n", "ŋ",
        "l", "ɹ", "j", "w",
        "iː", "ɪ", "ɛ", "æ", "ɑː", "ɔː", "ʊ", "uː", "ʌ", "ɜː", "ə",
    ],
    "nld": [
        "p", "b", "t", "d", "k", "f", "v", "s", "z", "x",
        "ɣ", "ɦ", "m", "n", "ŋ", "l", "r", "ʋ", "j",
        "i", "y", "u", "ɪ", "ʏ", "ɛ", "ɔ", "ɑ", "ə", "aː", "eː", "oː", "øː",
    ],
    "deu": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z",
        "ʃ", "ç", "x", "h", "m", "n", "ŋ", "l", "ʁ", "j",
        "t͡s", "t͡ʃ", "p͡f",
        "iː", "ɪ", "yː", "ʏ", "uː", "ʊ", "eː", "ɛ", "ɛː", "øː",
        "œ", "oː", "ɔ", "aː", "a", "ə", "ɐ",
    ],
    "spa": [
        "p", "b", "t", "d", "k", "ɡ", "f", "θ", "s", "x",
        "t͡ʃ", "m", "n", "ɲ", "l", "ʎ", "r", "ɾ", "j", "w",
        "β", "ð", "ɣ",
        "i", "e", "a", "o", "u",
    ],
    "fra": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z",
        "ʃ", "ʒ", "m", "n", "ɲ", "ŋ", "l", "ʁ", "j", "w",
        "i", "y", "u", "e", "ø", "o", "ɛ", "œ", "ɔ", "a",
        "ɑ", "ə", "ɛ̃", "ɔ̃", "ɑ̃", "œ̃",
    ],
    "ita": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z",
        "ʃ", "t͡s", "d͡z", "t͡ʃ", "d͡ʒ", "m", "n", "ɲ", "l", "ʎ",
        "r", "j", "w",
        "i", "e", "ɛ", "a", "ɔ", "o", "u",
    ],
    "fin": [
        "p", "t", "d", "k", "s", "h", "m", "n", "ŋ", "l",
        "r", "ʋ", "j",
        "i", "y", "u", "e", "ø", "o", "æ", "ɑ",
        "iː", "yː", "uː", "eː", "øː", "oː", "æː", "ɑː",
    ],
    "tur": [
        "p", "b", "t", "d", "k", "ɡ", "c", "ɟ", "f", "v",
        "s", "z", "ʃ", "ʒ", "h", "m", "n", "l", "ɾ", "j", "ɣ",
        "i", "y", "ɯ", "u", "e", "ø", "o", "a",
    ],
    "pol": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z",
        "ʂ", "ʐ", "ɕ", "ʑ", "x", "m", "n", "ɲ", "l", "r",
        "j", "w", "t͡s", "d͡z", "t͡ɕ", "d͡ʑ",
        "i", "ɨ", "u", "ɛ", "ɔ", "a", "ɛ̃", "ɔ̃",
    ],
    "swe": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "ɕ",
        "ʂ", "h", "m", "n", "ŋ", "l", "r", "j",
        "i", "iː", "y", "yː", "ʉ", "ʉː", "u", "uː", "e", "eː",
        "ɛ", "ɛː", "ø", "øː", "o", "oː",
    ],
    "dan": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "h",
        "m", "n", "ŋ", "l", "ʁ", "j", "w", "ð",
        "i", "iː", "y", "yː", "u", "uː", "e", "eː", "ø", "øː",
        "o", "oː", "ɛ", "ɛː", "ɔ", "ɑ", "a", "ə",
    ],
    "por": [
        "p", "b", "t", "d", "k", "ɡ", "f", "v", "s", "z",
        "ʃ", "ʒ", "m", "n", "ɲ", "l", "ʎ", "ʁ", "ɾ", "j", "w",
        "i", "e", "ɛ", "a", "ɔ", "o", "u", "ɐ",
        "ĩ", "ẽ", "ɐ̃", "õ", "ũ",
    ],
    "hun": [
        "p", "b", "t", "d", "k", "ɡ", "c", "ɟ", "f", "v",
        "s", "z", "ʃ", "ʒ", "h", "m", "n", "ɲ", "l", "r",
        "j", "t͡s", "t͡ʃ", "d͡ʒ",
        "i", "iː", "y", "yː", "u", "uː", "e", "eː", "ø", "øː",
        "o", "oː", "ɛ", "aː", "ɒ",
    ],
    "ces": [
        "p", "b", "t", "d", "c", "ɟ", "k", "ɡ", "f", "v",
        "s", "z", "ʃ", "ʒ", "x", "ɦ", "m", "n", "ɲ", "l",
        "r", "j", "t͡s", "t͡ʃ",
        "i", "iː", "u", "uː", "e", "eː", "o", "oː", "a", "aː",
    ],
}


def consonant_row(symbol: str, spec) -> dict[str, int]:
    voice, place, manner, extras = spec
    row = dict.fromkeys(FEATURE_NAMES, 0)
    row["consonant"] = 1
    row["voice"] = voice
    row[f"place_{place}"] = 1
    row[f"manner_{manner}"] = 1
    if manner in SONORANT_MANNERS:
        row["sonorant"] = 1
    if manner in CONTINUANT_MANNERS:
        row["continuant"] = 1
    if manner == "approximant":
        row["approximant"] = 1
    for extra in extras:
        row[extra] = 1
    return row


def vowel_row(symbol: str, spec) -> dict[str, int]:
    height, frontness, rounded, extras = spec
    row = dict.fromkeys(FEATURE_NAMES, 0)
    row["vowel"] = 1
    row["sonorant"] = 1
    row["syllabic"] = 1
    row["continuant"] = 1
    row["voice"] = 1
    row[f"height_{height}"] = 1
    row[f"frontness_{frontness}"] = 1
    row["rounded"] = rounded
    for extra in extras:
        row[extra] = 1
    return row


def validate_inventory_phone(phone: str, bases: set[str], diacritics: set[str]) -> None:
    text = unicodedata.normalize("NFD", phone)
    max_len = max(len(b) for b in bases)
    i = 0
    saw_base = False
    while i < len(text):
        for width in range(min(max_len, len(text) - i), 0, -1):
            chunk = text[i:i + width]
            if chunk in bases:
                saw_base = True
                i += width
                break
            if chunk in diacritics and saw_base:
                i += width
                break
        else:
            raise SystemExit(f"inventory phone {phone!r} has unknown symbol at offset {i}")


def main() -> None:
    assert len(FEATURE_NAMES) == 62, len(FEATURE_NAMES)
    assert len(set(FEATURE_NAMES)) == 62

    rows: dict[str, dict[str, int]] = {}
    for symbol, spec in CONSONANTS.items():
        rows[unicodedata.normalize("NFC", symbol)] = consonant_row(symbol, spec)
    for symbol, spec in VOWELS.items():
        rows[unicodedata.normalize("NFC", symbol)] = vowel_row(symbol, spec)
    assert len(rows) == len(CONSONANTS) + len(VOWELS)

    for diacritic, feature, value in DIACRITICS:
        assert feature in FEATURE_NAMES, feature
        assert value in (0, 1)

    DATA_DIR.mkdir(parents=True, exist_ok=True)

    with open(DATA_DIR / "features.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["segment"] + FEATURE_NAMES)
        for symbol in sorted(rows):
            writer.writerow([symbol] + [rows[symbol][name] for name in FEATURE_NAMES])

    with open(DATA_DIR / "diacritic_rules.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["diacritic", "feature", "value"])
        for diacritic, feature, value in DIACRITICS:
            writer.writerow([unicodedata.normalize("NFC", diacritic), feature, value])

    with open(DATA_DIR / "symbols.txt", "w", encoding="utf-8") as f:
        f.write("# Default symbol table: `base <symbol>` or `diacritic <symbol>` per line.\n")
        f.write("# Combining diacritics are listed in ascending combining-class order.\n")
        for symbol in sorted(rows):
            f.write(f"base {symbol}\n")
        for diacritic, _, _ in DIACRITICS:
            f.write(f"diacritic {unicodedata.normalize('NFC', diacritic)}\n")

    base_set = {unicodedata.normalize("NFD", s) for s in rows}
    diacritic_set = {unicodedata.normalize("NFD", d) for d, _, _ in DIACRITICS}
    with open(DATA_DIR / "sample_inventories.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["language", "phoneme"])
        for language in sorted(INVENTORIES):
            phones = INVENTORIES[language]
            assert len(set(phones)) == len(phones), f"duplicate phone in {language}"
            for phone in phones:
                validate_inventory_phone(phone, base_set, diacritic_set)
                writer.writerow([language, unicodedata.normalize("NFC", phone)])

    assert len(INVENTORIES["fry"]) == 40, len(INVENTORIES["fry"])
    print(f"wrote {len(rows)} feature rows, {len(DIACRITICS)} diacritic rules, "
          f"{len(INVENTORIES)} sample inventories -> {DATA_DIR}")


if __name__ == "__main__":
    main()
