"""Joint-sequence grapheme-to-phone conversion for small lexicons.

Words are modeled as sequences of graphones: paired chunks of 1-2 graphemes
and 0-2 phones. Training runs expectation-maximization over all chunkings of
each lexicon entry to estimate graphone probabilities, Viterbi-aligns each
entry under the converged model, and fits a Witten-Bell smoothed n-gram over
the aligned graphone sequences. Prediction is a beam search over chunkings
of the input word scored by the n-gram. Multiple candidate pronunciations
(for example one per source language) can be combined by picking the
edit-distance medoid.

The expectation step is vectorized with numpy over all entry lattices at
once, which keeps training on a few thousand entries interactive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import AlignmentError, ModelFormatError, PredictionError
from .ipa import PhoneSequence, Segment, make_segment
from .lexicon import Lexicon, lookup
from .metrics import levenshtein

BOS = -1
EOS = -2

MODEL_FORMAT = "phonefront-g2p"
MODEL_VERSION = 1


@dataclass(frozen=True)
class Graphone:
    """A paired chunk of 1-2 graphemes and 0-2 phones."""

    graphemes: str
    phones: tuple[Segment, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.graphemes) <= 2:
            raise AlignmentError(f"graphone grapheme chunk {self.graphemes!r} "
                                 "must have 1 or 2 characters")
        if len(self.phones) > 2:
            raise AlignmentError("graphone phone chunk longer than 2")

    def sort_key(self) -> tuple:
        return (self.graphemes, tuple(p.canonical for p in self.phones))

    def __repr__(self) -> str:
        phones = " ".join(p.canonical for p in self.phones)
        return f"Graphone({self.graphemes!r} : {phones!r})"


@dataclass
class AlignmentResult:
    """EM output: per-entry Viterbi alignments plus the graphone model."""

    alignments: list[tuple[str, PhoneSequence, tuple[Graphone, ...], int]]
    graphone_probs: dict[Graphone, float]
    skipped: list[tuple[str, PhoneSequence]]
    loglik_history: list[float]


@dataclass(frozen=True)
class Prediction:
    phones: PhoneSequence
    log_score: float


def _entry_list(lex: Lexicon) -> list[tuple[str, PhoneSequence, int]]:
    return [(word, entry.phones, entry.count)
            for word, prons in lex.items() for entry in prons]


def _arcs_for(word: str, phones: list[Segment], max_g: int, max_p: int):
    """All lattice arcs on complete-path states: (i, j, dg, dp), 1 <= dg.

    Both arc endpoints must be reachable from the start and able to reach
    the end, so every emitted arc lies on at least one complete chunking and
    the graphone vocabulary matches exhaustive enumeration.
    """
    n_g, n_p = len(word), len(phones)
    for i in range(n_g):
        for j in range(n_p + 1):
            if j > max_p * i or (n_p - j) > max_p * (n_g - i):
                continue  # unreachable from start or unable to finish
            for dg in range(1, min(max_g, n_g - i) + 1):
                for dp in range(0, min(max_p, n_p - j) + 1):
                    if (n_p - j - dp) > max_p * (n_g - i - dg):
                        continue  # would strand the remaining phones
                    yield i, j, dg, dp


class _Lattices:
    """Flattened alignment lattices for every entry, shared across EM steps."""

    def __init__(self, entries: list[tuple[str, PhoneSequence, int]],
                 max_g: int, max_p: int):
        self.max_g = max_g
        self.max_p = max_p
        self.entries = []
        self.skipped: list[tuple[str, PhoneSequence]] = []
        graphone_ids: dict[tuple, int] = {}
        graphones: list[Graphone] = []

        arc_from: list[int] = []
        arc_to: list[int] = []
        arc_gid: list[int] = []
        arc_entry: list[int] = []
        arc_layer: list[int] = []
        start_idx: list[int] = []
        end_idx: list[int] = []
        offset = 0

        for word, pron, count in entries:
            phones = list(pron)
            if len(phones) > max_p * len(word):
                self.skipped.append((word, pron))
                continue
            entry_id = len(self.entries)
            self.entries.append((word, pron, count))
            n_g, n_p = len(word), len(phones)
            width = n_p + 1

            def state(i: int, j: int) -> int:
                return offset + i * width + j

            for i, j, dg, dp in _arcs_for(word, phones, max_g, max_p):
                chunk_g = word[i:i + dg]
                chunk_p = tuple(phones[j:j + dp])
                key = (chunk_g, tuple(p.canonical for p in chunk_p))
                gid = graphone_ids.get(key)
                if gid is None:
                    gid = len(graphones)
                    graphone_ids[key] = gid
                    graphones.append(Graphone(chunk_g, chunk_p))
                arc_from.append(state(i, j))
                arc_to.append(state(i + dg, j + dp))
                arc_gid.append(gid)
                arc_entry.append(entry_id)
                arc_layer.append(i)
            start_idx.append(state(0, 0))
            end_idx.append(state(n_g, n_p))
            offset += (n_g + 1) * width

        if not self.entries:
            raise AlignmentError("no alignable lexicon entries "
                                 "(every pronunciation exceeds the phone chunk limit)")

        # reindex graphones in a canonical order so results do not depend on
        # lexicon iteration order for identity assignment
        order = sorted(range(len(graphones)), key=lambda g: graphones[g].sort_key())
        remap = {old: new for new, old in enumerate(order)}
        self.graphones = [graphones[old] for old in order]
        gids = np.fromiter((remap[g] for g in arc_gid), dtype=np.int64, count=len(arc_gid))

        layer_order = np.lexsort((np.asarray(arc_entry), np.asarray(arc_layer)))
        self.arc_from = np.asarray(arc_from, dtype=np.int64)[layer_order]
        self.arc_to = np.asarray(arc_to, dtype=np.int64)[layer_order]
        self.arc_gid = gids[layer_order]
        self.arc_entry = np.asarray(arc_entry, dtype=np.int64)[layer_order]
        layers = np.asarray(arc_layer, dtype=np.int64)[layer_order]
        boundaries = np.flatnonzero(np.diff(layers)) + 1
        self.layer_slices = [slice(a, b) for a, b in
                             zip([0, *boundaries], [*boundaries, len(layers)])]
        self.n_states = offset
        self.start_idx = np.asarray(start_idx, dtype=np.int64)
        self.end_idx = np.asarray(end_idx, dtype=np.int64)
        self.weights = np.asarray([c for _, _, c in self.entries], dtype=np.float64)
        self.gid_index = {g.sort_key(): i for i, g in enumerate(self.graphones)}

    def em_iteration(self, probs: np.ndarray) -> tuple[np.ndarray, float]:
        """One E-step: expected graphone counts and the corpus log-likelihood."""
        alpha = np.zeros(self.n_states)
        alpha[self.start_idx] = 1.0
        arc_p = probs[self.arc_gid]
        for sl in self.layer_slices:
            np.add.at(alpha, self.arc_to[sl], alpha[self.arc_from[sl]] * arc_p[sl])
        z = alpha[self.end_idx]
        if np.any(z <= 0):
            bad = int(np.argmax(z <= 0))
            word = self.entries[bad][0]
            raise AlignmentError(f"entry {word!r} has no probable alignment path")
        beta = np.zeros(self.n_states)
        beta[self.end_idx] = 1.0
        for sl in reversed(self.layer_slices):
            np.add.at(beta, self.arc_from[sl], beta[self.arc_to[sl]] * arc_p[sl])
        scale = (self.weights / z)[self.arc_entry]
        posterior = alpha[self.arc_from] * arc_p * beta[self.arc_to] * scale
        counts = np.zeros(len(self.graphones))
        np.add.at(counts, self.arc_gid, posterior)
        loglik = float(np.dot(self.weights, np.log(z)))
        return counts, loglik

    def viterbi(self, entry_id: int, log_probs: np.ndarray) -> tuple[Graphone, ...]:
        """Best alignment of one entry; ties prefer smaller (dg, dp)."""
        word, pron, _ = self.entries[entry_id]
        phones = list(pron)
        n_g, n_p = len(word), len(phones)
        width = n_p + 1
        best = np.full((n_g + 1) * width, -np.inf)
        back: dict[int, tuple[int, int]] = {}
        best[0] = 0.0
        for i, j, dg, dp in sorted(_arcs_for(word, phones, self.max_g, self.max_p),
                                   key=lambda a: (a[0], a[1], a[2], a[3])):
            src = i * width + j
            if best[src] == -np.inf:
                continue
            key = (word[i:i + dg], tuple(p.canonical for p in phones[j:j + dp]))
            gid = self.gid_index[key]
            score = best[src] + log_probs[gid]
            dst = (i + dg) * width + (j + dp)
            if score > best[dst]:
                best[dst] = score
                back[dst] = (src, gid)
        end = n_g * width + n_p
        if best[end] == -np.inf:
            raise AlignmentError(f"entry {word!r} has no Viterbi alignment")
        path: list[int] = []
        state = end
        while state != 0:
            state, gid = back[state]
            path.append(gid)
        path.reverse()
        return tuple(self.graphones[g] for g in path)


def align_lexicon_em(lex: Lexicon, max_iters: int = 50, tol: float = 1e-6,
                     max_graphemes: int = 2, max_phones: int = 2) -> AlignmentResult:
    """EM over all chunkings of every lexicon entry.

    Starts from a uniform graphone distribution and stops when the corpus
    log-likelihood improves by less than ``tol`` or after ``max_iters``
    iterations. Entries whose pronunciations cannot fit the chunk limits
    (more than ``max_phones`` phones per grapheme) are skipped and reported.
    Entry counts act as observation weights.
    """
    entries = _entry_list(lex)
    if not entries:
        raise AlignmentError("cannot align an empty lexicon")
    lattices = _Lattices(entries, max_graphemes, max_phones)

    n = len(lattices.graphones)
    probs = np.full(n, 1.0 / n)
    history: list[float] = []
    for _ in range(max_iters):
        counts, loglik = lattices.em_iteration(probs)
        history.append(loglik)
        total = counts.sum()
        if total <= 0:
            raise AlignmentError("EM produced no expected counts")
        probs = counts / total
        if len(history) >= 2 and history[-1] - history[-2] < tol:
            break

    with np.errstate(divide="ignore"):
        log_probs = np.log(probs)
    alignments = []
    for entry_id, (word, pron, count) in enumerate(lattices.entries):
        alignments.append((word, pron, lattices.viterbi(entry_id, log_probs), count))

    graphone_probs = {g: float(p) for g, p in zip(lattices.graphones, probs) if p > 0}
    return AlignmentResult(alignments=alignments, graphone_probs=graphone_probs,
                           skipped=lattices.skipped, loglik_history=history)


class _WittenBell:
    """Interpolated Witten-Bell n-gram over graphone-id sequences."""

    def __init__(self, order: int, vocab_size: int):
        if order < 1:
            raise AlignmentError(f"n-gram order must be >= 1, got {order}")
        self.order = order
        self.vocab_size = vocab_size  # graphones + EOS
        self.counts: list[dict[tuple[int, ...], dict[int, int]]] = [
            {} for _ in range(order)]
        self._memo: dict[tuple, float] = {}
        self._totals: dict[tuple[int, ...], tuple[int, int]] = {}

    def add_sequence(self, ids: Sequence[int], weight: int = 1) -> None:
        seq = [BOS] * (self.order - 1) + list(ids) + [EOS]
        for t in range(self.order - 1, len(seq)):
            token = seq[t]
            for k in range(self.order):
                if k > t:
                    break
                context = tuple(seq[t - k:t])
                successors = self.counts[k].setdefault(context, {})
                successors[token] = successors.get(token, 0) + weight
        self._memo.clear()
        self._totals.clear()

    def _context_totals(self, context: tuple[int, ...],
                        successors: dict[int, int]) -> tuple[int, int]:
        cached = self._totals.get(context)
        if cached is None:
            cached = (sum(successors.values()), len(successors))
            self._totals[context] = cached
        return cached

    def prob(self, token: int, context: tuple[int, ...]) -> float:
        context = context[-(self.order - 1):] if self.order > 1 else ()
        return self._prob(token, context)

    def _prob(self, token: int, context: tuple[int, ...]) -> float:
        key = (context, token)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if not context:
            successors = self.counts[0].get((), {})
            total, distinct = self._context_totals((), successors)
            p = ((successors.get(token, 0) + distinct / self.vocab_size)
                 / (total + distinct)) if total else 1.0 / self.vocab_size
        else:
            successors = self.counts[len(context)].get(context)
            if not successors:
                p = self._prob(token, context[1:])
            else:
                total, distinct = self._context_totals(context, successors)
                backoff = self._prob(token, context[1:])
                p = (successors.get(token, 0) + distinct * backoff) / (total + distinct)
        self._memo[key] = p
        return p

    def contexts(self) -> Iterable[tuple[int, ...]]:
        for by_len in self.counts:
            yield from by_len.keys()


@dataclass
class G2PModel:
    """Trained graphone model: EM probabilities plus a smoothed n-gram."""

    order: int
    graphones: tuple[Graphone, ...]
    graphone_probs: tuple[float, ...]
    ngram: _WittenBell
    loglik_history: tuple[float, ...]
    skipped: tuple[tuple[str, str], ...] = ()
    _chunk_index: dict[str, tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        index: dict[str, list[int]] = {}
        for gid, graphone in enumerate(self.graphones):
            index.setdefault(graphone.graphemes, []).append(gid)
        self._chunk_index = {chunk: tuple(gids) for chunk, gids in index.items()}

    def known_characters(self) -> set[str]:
        return {ch for chunk in self._chunk_index for ch in chunk}

    def vocabulary_size(self) -> int:
        return len(self.graphones) + 1  # graphones + end marker


def train_g2p(lex: Lexicon, order: int = 3, max_iters: int = 50,
              tol: float = 1e-6) -> G2PModel:
    """Align the lexicon with EM and fit the graphone n-gram."""
    result = align_lexicon_em(lex, max_iters=max_iters, tol=tol)
    graphones = tuple(sorted(result.graphone_probs, key=Graphone.sort_key))
    gid = {g: i for i, g in enumerate(graphones)}
    ngram = _WittenBell(order, len(graphones) + 1)
    for _, _, alignment, count in result.alignments:
        ngram.add_sequence([gid[g] for g in alignment], weight=count)
    return G2PModel(
        order=order,
        graphones=graphones,
        graphone_probs=tuple(result.graphone_probs[g] for g in graphones),
        ngram=ngram,
        loglik_history=tuple(result.loglik_history),
        skipped=tuple((word, pron.render()) for word, pron in result.skipped),
    )


def predict(model: G2PModel, word: str, beam: int = 8,
            nbest: int = 1) -> list[Prediction]:
    """Beam-search pronunciations for a word.

    Hypotheses are pruned per consumed-grapheme position; pruning and result
    ties break on the canonical phone rendering so output is deterministic.
    With a beam at least as large as the number of reachable hypotheses the
    search is exhaustive.
    """
    if not word:
        raise PredictionError("cannot predict an empty word")
    if beam < 1 or nbest < 1:
        raise PredictionError("beam and nbest must be >= 1")
    unknown = sorted(set(word) - model.known_characters())
    if unknown:
        raise PredictionError(
            f"word {word!r} contains characters never seen in training: "
            + ", ".join(repr(c) for c in unknown))

    history_len = model.order - 1
    start = (BOS,) * history_len
    # beams[i]: hypotheses that have consumed i characters,
    # each (logp, phone tokens, phones, n-gram history)
    beams: list[list[tuple[float, tuple[str, ...], tuple[Segment, ...], tuple[int, ...]]]] = [
        [] for _ in range(len(word) + 1)]
    beams[0].append((0.0, (), (), start))

    def prune(hyps):
        merged: dict[tuple, tuple] = {}
        for logp, tokens, phones, history in hyps:
            key = (tokens, history)
            kept = merged.get(key)
            if kept is None or logp > kept[0]:
                merged[key] = (logp, tokens, phones, history)
        ranked = sorted(merged.values(), key=lambda h: (-h[0], h[1]))
        return ranked[:beam]

    for pos in range(len(word)):
        hyps = beams[pos]
        if not hyps:
            continue
        for dg in (1, 2):
            if pos + dg > len(word):
                break
            chunk = word[pos:pos + dg]
            gids = model._chunk_index.get(chunk, ())
            if not gids:
                continue
            target = beams[pos + dg]
            for logp, tokens, phones, history in hyps:
                for gid in gids:
                    p = model.ngram.prob(gid, history)
                    if p <= 0:
                        continue
                    graphone = model.graphones[gid]
                    new_history = ((history + (gid,))[-history_len:]
                                   if history_len else ())
                    target.append((
                        logp + math.log(p),
                        tokens + tuple(s.canonical for s in graphone.phones),
                        phones + graphone.phones,
                        new_history))
        if pos + 1 <= len(word):
            beams[pos + 1] = prune(beams[pos + 1])
        if pos + 2 <= len(word):
            beams[pos + 2] = prune(beams[pos + 2])

    completed: dict[tuple[str, ...], tuple[float, tuple[Segment, ...]]] = {}
    for logp, tokens, phones, history in beams[len(word)]:
        p = model.ngram.prob(EOS, history)
        if p <= 0:
            continue
        final = logp + math.log(p)
        kept = completed.get(tokens)
        if kept is None or final > kept[0]:
            completed[tokens] = (final, phones)
    if not completed:
        raise PredictionError(
            f"word {word!r} has no segmentation into known grapheme chunks")
    ranked = sorted(completed.items(), key=lambda item: (-item[1][0], item[0]))
    return [Prediction(phones=PhoneSequence(phones), log_score=logp)
            for tokens, (logp, phones) in ranked[:nbest]]


def ensemble_predictions(candidates: Sequence[PhoneSequence]) -> PhoneSequence:
    """Edit-distance medoid of the candidates.

    Returns the candidate minimizing the summed phone-level Levenshtein
    distance to all candidates; ties go to the earliest list position, so
    the result is always one of the inputs.
    """
    if not candidates:
        raise PredictionError("cannot ensemble an empty candidate list")
    token_lists = [c.tokens() for c in candidates]
    best_idx = 0
    best_cost = None
    for i, tokens in enumerate(token_lists):
        cost = sum(levenshtein(tokens, other).distance for other in token_lists)
        if best_cost is None or cost < best_cost:
            best_idx, best_cost = i, cost
    return candidates[best_idx]


def g2p_corpus(texts: Iterable[Iterable[str]], model: G2PModel | None = None,
               lexicon: Lexicon | None = None, beam: int = 8) -> dict[str, PhoneSequence]:
    """One pronunciation per distinct corpus word.

    Words found in the lexicon take their majority pronunciation; the rest
    fall back to model prediction. At least one of ``model`` and ``lexicon``
    must be provided.
    """
    if model is None and lexicon is None:
        raise PredictionError("g2p_corpus needs a model, a lexicon, or both")
    out: dict[str, PhoneSequence] = {}
    for text in texts:
        for word in text:
            folded = word.casefold()
            if folded in out:
                continue
            prons = lookup(lexicon, folded) if lexicon is not None else []
            if prons:
                out[folded] = prons[0]
            elif model is not None:
                try:
                    out[folded] = predict(model, folded, beam=beam, nbest=1)[0].phones
                except PredictionError as exc:
                    raise PredictionError(f"word {folded!r}: {exc}") from exc
            else:
                raise PredictionError(
                    f"word {folded!r} not in lexicon and no model given")
    return out


def _segment_to_json(seg: Segment) -> list:
    return [seg.base, list(seg.diacritics)]


def _segment_from_json(data) -> Segment:
    base, diacritics = data
    return make_segment(base, diacritics)


def save_model(model: G2PModel, path: str | Path) -> None:
    """Serialize a model to versioned JSON (UTF-8, deterministic layout)."""
    ngram_counts = []
    for k, by_context in enumerate(model.ngram.counts):
        contexts = []
        for context in sorted(by_context):
            successors = sorted(by_context[context].items())
            contexts.append([list(context), [[t, c] for t, c in successors]])
        ngram_counts.append(contexts)
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "order": model.order,
        "graphones": [[g.graphemes, [_segment_to_json(p) for p in g.phones]]
                      for g in model.graphones],
        "graphone_probs": list(model.graphone_probs),
        "ngram_counts": ngram_counts,
        "loglik_history": list(model.loglik_history),
        "skipped": [list(pair) for pair in model.skipped],
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8")


def load_model(path: str | Path) -> G2PModel:
    """Load a model written by save_model."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not a valid model file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"{path}: missing {MODEL_FORMAT!r} header")
    if payload.get("version") != MODEL_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported model version {payload.get('version')!r}")
    graphones = tuple(
        Graphone(graphemes, tuple(_segment_from_json(p) for p in phones))
        for graphemes, phones in payload["graphones"])
    order = payload["order"]
    ngram = _WittenBell(order, len(graphones) + 1)
    for k, contexts in enumerate(payload["ngram_counts"]):
        for context, successors in contexts:
            ngram.counts[k][tuple(context)] = {t: c for t, c in successors}
    return G2PModel(
        order=order,
        graphones=graphones,
        graphone_probs=tuple(payload["graphone_probs"]),
        ngram=ngram,
        loglik_history=tuple(payload["loglik_history"]),
        skipped=tuple(tuple(pair) for pair in payload.get("skipped", ())),
    )
