#!/usr/bin/env python3
"""Regenerate the bundled toy corpus and golden files under tests/data/toy/.

The toy language maps each of 14 letters to the identically named IPA phone,
so expected pronunciations are computable by rule. The g2p and build-dict
golden lexicons are derived here from that rule (and from direct span
aggregation over the boundary-marked corpus), independently of the pipeline
code; the serialized model golden is a determinism regression artifact
produced by running the pipeline once.

    python tools/make_toy_data.py
"""

from __future__ import annotations

import random
import subprocess
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
TOY = ROOT / "tests" / "data" / "toy"

LETTERS = "abdefiklmnopst"  # each letter is pronounced as the same-named phone
SEED = 20240517

N_TRAIN_WORDS = 40
N_EXTRA_WORDS = 20          # corpus-only words, OOV for the g2p pipeline
N_UTTERANCES = 150


def pronounce(word: str) -> list[str]:
    return list(word)


def main() -> None:
    rng = random.Random(SEED)

    words: list[str] = []
    seen: set[str] = set()
    while len(words) < N_TRAIN_WORDS + N_EXTRA_WORDS:
        w = "".join(rng.choice(LETTERS) for _ in range(rng.randint(2, 6)))
        if w not in seen:
            seen.add(w)
            words.append(w)
    train_words = sorted(words[:N_TRAIN_WORDS])
    extra_words = sorted(words[N_TRAIN_WORDS:])
    all_words = train_words + extra_words

    TOY.mkdir(parents=True, exist_ok=True)
    golden = TOY / "golden"
    golden.mkdir(exist_ok=True)

    with open(TOY / "train.dict", "w", encoding="utf-8") as f:
        for w in train_words:
            f.write(f"{w}\t{' '.join(pronounce(w))}\n")

    # texts for the g2p pipeline: mix of in-lexicon and OOV words
    text_lines = []
    for _ in range(10):
        n = rng.randint(3, 7)
        text_lines.append(" ".join(rng.choice(all_words) for _ in range(n)))
    (TOY / "texts.txt").write_text("\n".join(text_lines) + "\n", encoding="utf-8")

    # golden for the g2p pipeline: every distinct text word, by rule
    distinct = sorted({w for line in text_lines for w in line.split()})
    with open(golden / "g2p_out.dict", "w", encoding="utf-8") as f:
        for w in distinct:
            f.write(f"{w}\t{' '.join(pronounce(w))}\n")

    # transcribed corpus with explicit boundary markers, zero noise
    utt_lines = []
    span_counts: dict[str, Counter] = {}
    for i in range(N_UTTERANCES):
        n = rng.randint(2, 6)
        utt_words = [rng.choice(all_words) for _ in range(n)]
        phone_field = " | ".join(" ".join(pronounce(w)) for w in utt_words)
        utt_lines.append(f"toy{i:04d}\t{' '.join(utt_words)}\t{phone_field}")
        for w in utt_words:
            span_counts.setdefault(w, Counter())[" ".join(pronounce(w))] += 1
    (TOY / "utts.tsv").write_text("\n".join(utt_lines) + "\n", encoding="utf-8")

    # golden makeshift lexicon: direct span aggregation, one line per observation
    with open(golden / "rec_out.dict", "w", encoding="utf-8") as f:
        for w in sorted(span_counts):
            for pron, count in span_counts[w].most_common():
                f.write(f"{w}\t{pron}\n" * count)

    # regression golden for the serialized model: produced by one pipeline run
    subprocess.run(
        [sys.executable, "-m", "phonefront.cli", "build-dict",
         "--corpus", str(TOY / "utts.tsv"),
         "--out", str(golden / "_rec_out_check.dict"),
         "--model-out", str(golden / "rec_model.json")],
        check=True, cwd=ROOT)
    check = (golden / "_rec_out_check.dict").read_bytes()
    expected = (golden / "rec_out.dict").read_bytes()
    (golden / "_rec_out_check.dict").unlink()
    if check != expected:
        raise SystemExit("pipeline output does not match the oracle-derived golden")

    print(f"wrote toy corpus ({N_UTTERANCES} utterances, {len(all_words)} words) "
          f"and goldens -> {TOY}")


if __name__ == "__main__":
    main()
