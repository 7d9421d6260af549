"""Makeshift pronunciation dictionaries from recognizer output.

Given utterances that pair a word-tokenized text with a predicted phone
sequence, split the phones into one contiguous nonempty span per word and
aggregate the spans into a lexicon, choosing the most common pronunciation
per word. Manual word boundaries (the ``|`` marker in corpus files) are
honored verbatim; otherwise a dynamic program picks the split that best
matches expected span lengths, optionally blended with agreement against a
seed G2P model.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TYPE_CHECKING

from .errors import CorpusError, PhoneParseError, SegmentationError
from .ipa import PhoneSequence, Segment, SymbolTable
from .lexicon import Lexicon
from .metrics import levenshtein

if TYPE_CHECKING:
    from .g2p import G2PModel

BOUNDARY_MARKER = "|"


@dataclass(frozen=True)
class TranscribedUtterance:
    """One (text, predicted phones) pair, with optional manual boundaries.

    ``boundaries`` are split indices into the phone sequence; index i means
    a word boundary before phone i. There are exactly len(words) - 1 of
    them, strictly increasing, and every resulting span is nonempty.
    """

    id: str
    words: tuple[str, ...]
    phones: PhoneSequence
    boundaries: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not self.words:
            raise SegmentationError(f"utterance {self.id!r}: no words")
        if self.boundaries is not None:
            self.validate_boundaries(self.boundaries)

    def validate_boundaries(self, boundaries: Sequence[int]) -> None:
        if len(boundaries) != len(self.words) - 1:
            raise SegmentationError(
                f"utterance {self.id!r}: {len(boundaries)} boundaries for "
                f"{len(self.words)} words (need {len(self.words) - 1})")
        cuts = [0, *boundaries, len(self.phones)]
        for a, b in zip(cuts, cuts[1:]):
            if b <= a:
                raise SegmentationError(
                    f"utterance {self.id!r}: malformed boundaries {list(boundaries)} "
                    "(spans must be nonempty and strictly increasing)")


@dataclass
class SegmentationConfig:
    """Settings for automatic phone-span segmentation.

    ``alpha`` is the expected number of phones per grapheme; ``lam`` weights
    agreement with an optional seed G2P model's predictions.
    """

    alpha: float = 1.0
    lam: float = 0.0
    seed_g2p: "G2PModel | None" = None

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise SegmentationError(f"alpha must be positive, got {self.alpha}")
        if self.lam < 0:
            raise SegmentationError(f"lambda must be non-negative, got {self.lam}")


def estimate_alpha(corpus: Iterable[TranscribedUtterance]) -> float:
    """Corpus-level phones-per-grapheme ratio."""
    phones = 0
    graphemes = 0
    for utt in corpus:
        phones += len(utt.phones)
        graphemes += sum(len(word) for word in utt.words)
    if graphemes == 0:
        raise SegmentationError("cannot estimate alpha: corpus has no graphemes")
    return phones / graphemes


def _seed_predictions(words: Sequence[str],
                      cfg: SegmentationConfig) -> list[list[str] | None]:
    """1-best seed-G2P phone tokens per word, None where prediction fails."""
    from .errors import PredictionError
    from .g2p import predict

    out: list[list[str] | None] = []
    for word in words:
        if cfg.seed_g2p is None:
            out.append(None)
            continue
        try:
            best = predict(cfg.seed_g2p, word, nbest=1)[0]
            out.append(best.phones.tokens())
        except PredictionError:
            out.append(None)
    return out


def segment_phones(utt: TranscribedUtterance,
                   cfg: SegmentationConfig) -> list[tuple[str, PhoneSequence]]:
    """Split an utterance's phones into one nonempty span per word.

    Manual boundaries are used verbatim when present. Otherwise a dynamic
    program maximizes, over all ways to cut the phones into len(words)
    contiguous nonempty spans, the sum per word of
    ``-(span_len - alpha * len(word))**2`` plus, when a seed G2P model is
    configured, ``lam * (-edit_distance(span, seed prediction))``. Score
    ties resolve to the lexicographically earliest boundary vector.
    """
    words = utt.words
    phones = utt.phones
    if utt.boundaries is not None:
        cuts = [0, *utt.boundaries, len(phones)]
        return [(word, PhoneSequence(phones[a:b]))
                for word, a, b in zip(words, cuts, cuts[1:])]

    n_words = len(words)
    n_phones = len(phones)
    if n_words == 1:
        return [(words[0], phones)]
    if n_phones < n_words:
        raise SegmentationError(
            f"utterance {utt.id!r}: {n_phones} phones cannot cover {n_words} words")

    seeds = _seed_predictions(words, cfg)
    tokens = phones.tokens()

    def span_score(word_idx: int, start: int, end: int) -> float:
        expected = cfg.alpha * len(words[word_idx])
        score = -((end - start) - expected) ** 2
        seed = seeds[word_idx]
        if seed is not None and cfg.lam > 0:
            score -= cfg.lam * levenshtein(seed, tokens[start:end]).distance
        return score

    NEG = float("-inf")
    # best[k][j]: best score covering words k.. starting at phone j
    best = [[NEG] * (n_phones + 1) for _ in range(n_words + 1)]
    best[n_words][n_phones] = 0.0
    for k in range(n_words - 1, -1, -1):
        remaining = n_words - k - 1  # words after this one, each needs >= 1 phone
        for j in range(n_phones + 1):
            hi = n_phones - remaining
            acc = NEG
            for end in range(j + 1, hi + 1):
                tail = best[k + 1][end]
                if tail == NEG:
                    continue
                s = span_score(k, j, end) + tail
                if s > acc:
                    acc = s
            best[k][j] = acc
    if best[0][0] == NEG:
        raise SegmentationError(f"utterance {utt.id!r}: no valid segmentation")

    # walk forward, taking the earliest cut that stays on an optimal path
    spans: list[tuple[str, PhoneSequence]] = []
    j = 0
    for k in range(n_words):
        remaining = n_words - k - 1
        hi = n_phones - remaining
        chosen = None
        for end in range(j + 1, hi + 1):
            if best[k + 1][end] == NEG:
                continue
            if span_score(k, j, end) + best[k + 1][end] == best[k][j]:
                chosen = end
                break
        if chosen is None:
            raise SegmentationError(f"utterance {utt.id!r}: segmentation backtrace failed")
        spans.append((words[k], PhoneSequence(phones[j:chosen])))
        j = chosen
    return spans


def majority_vote(prons: Sequence[PhoneSequence]) -> PhoneSequence:
    """Most common pronunciation; ties go to the shorter, then lexicographically
    smaller canonical rendering. The result is always a member of the input."""
    if not prons:
        raise SegmentationError("majority_vote over an empty collection")
    counts: dict[str, tuple[int, PhoneSequence]] = {}
    for pron in prons:
        key = pron.render()
        count, _ = counts.get(key, (0, pron))
        counts[key] = (count + 1, pron)
    best_key = min(counts,
                   key=lambda key: (-counts[key][0], len(counts[key][1]), key))
    return counts[best_key][1]


_PARALLEL_THRESHOLD = 500


def build_makeshift_lexicon(corpus: Iterable[TranscribedUtterance],
                            cfg: SegmentationConfig, jobs: int = 1) -> Lexicon:
    """Segment every utterance and aggregate spans into a lexicon.

    All observed spans are kept with counts; the first stored pronunciation
    of each word is the majority-vote winner. Provenance is ``recognized``.
    ``jobs`` caps worker parallelism for the per-utterance segmentation; the
    aggregation is a single deterministic reduction in corpus order, so the
    result does not depend on the worker count.
    """
    utterances = list(corpus)
    if jobs > 1 and len(utterances) >= _PARALLEL_THRESHOLD:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            all_spans = list(pool.map(partial(segment_phones, cfg=cfg),
                                      utterances, chunksize=64))
    else:
        all_spans = [segment_phones(utt, cfg) for utt in utterances]

    observed: dict[str, list[PhoneSequence]] = {}
    for spans in all_spans:
        for word, span in spans:
            observed.setdefault(word.casefold(), []).append(span)

    lex = Lexicon()
    for word, spans in observed.items():
        counts: dict[str, tuple[int, PhoneSequence]] = {}
        for span in spans:
            key = span.render()
            count, _ = counts.get(key, (0, span))
            counts[key] = (count + 1, span)
        ordered = sorted(counts,
                         key=lambda key: (-counts[key][0], len(counts[key][1]), key))
        for key in ordered:
            count, span = counts[key]
            lex.add(word, span, "recognized", count)
    return lex


def load_corpus(path: str | Path, table: SymbolTable) -> list[TranscribedUtterance]:
    """Read a corpus TSV: ``utt_id<TAB>text<TAB>phones`` with optional ``|``
    word-boundary markers inside the phone field; ``#`` starts a comment."""
    path = Path(path)
    corpus: list[TranscribedUtterance] = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusError(
                    f"{path}:{lineno}: expected 'utt_id<TAB>text<TAB>phones', "
                    f"found {len(parts)} fields")
            utt_id, text, phone_field = parts
            words = tuple(text.split())
            if not words:
                raise CorpusError(f"{path}:{lineno}: empty text field")
            segments: list[Segment] = []
            boundaries: list[int] = []
            saw_marker = False
            for token in phone_field.split():
                if token == BOUNDARY_MARKER:
                    saw_marker = True
                    boundaries.append(len(segments))
                    continue
                try:
                    segments.extend(table.parse_token(token))
                except PhoneParseError as exc:
                    raise CorpusError(f"{path}:{lineno}: {exc}") from exc
            try:
                utt = TranscribedUtterance(
                    id=utt_id, words=words, phones=PhoneSequence(segments),
                    boundaries=tuple(boundaries) if saw_marker else None)
            except SegmentationError as exc:
                raise CorpusError(f"{path}:{lineno}: {exc}") from exc
            corpus.append(utt)
    return corpus
