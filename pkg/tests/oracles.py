"""Independent brute-force reference implementations used to pin expected
values. These stay deliberately naive and separate from the library code."""

from __future__ import annotations

import itertools
import math
import unicodedata


def brute_levenshtein(ref, hyp) -> int:
    """Plain full-table DP, distance only."""
    n, m = len(ref), len(hyp)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][0] = i
    for j in range(m + 1):
        table[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if ref[i - 1] == hyp[j - 1] else 1
            table[i][j] = min(table[i - 1][j - 1] + cost,
                              table[i - 1][j] + 1,
                              table[i][j - 1] + 1)
    return table[n][m]


def greedy_tokenize(text: str, bases: set[str], diacritics: set[str]) -> list[tuple[str, list[str]]]:
    """Reference greedy longest-match tokenizer over NFD text.

    Returns (base, diacritic list) pairs; raises ValueError on unknown input.
    Diacritic order within a segment is not normalized here; callers compare
    sets or rely on already-ordered input.
    """
    out: list[tuple[str, list[str]]] = []
    for token in text.split():
        chunk_text = unicodedata.normalize("NFD", token)
        entries = sorted(bases | diacritics, key=len, reverse=True)
        i = 0
        while i < len(chunk_text):
            for entry in entries:
                if chunk_text.startswith(entry, i):
                    if entry in bases:
                        out.append((entry, []))
                    else:
                        if not out:
                            raise ValueError("leading diacritic")
                        out[-1][1].append(entry)
                    i += len(entry)
                    break
            else:
                raise ValueError(f"unknown symbol at {i}")
    return out


def all_chunkings(word: str, phone_tokens: list[str], max_g: int = 2, max_p: int = 2):
    """Every segmentation of (word, phones) into graphone chunks."""
    def rec(i: int, j: int):
        if i == len(word) and j == len(phone_tokens):
            yield []
            return
        if i == len(word):
            return
        for dg in range(1, max_g + 1):
            if i + dg > len(word):
                break
            for dp in range(0, max_p + 1):
                if j + dp > len(phone_tokens):
                    break
                pair = (word[i:i + dg], tuple(phone_tokens[j:j + dp]))
                for rest in rec(i + dg, j + dp):
                    yield [pair, *rest]
    return list(rec(0, 0))


def reference_em(entries: list[tuple[str, list[str], int]], iterations: int):
    """Enumeration-based EM over graphone chunkings.

    ``entries`` are (word, phone tokens, count). Returns (probs, ll_history)
    where probs maps (graphemes, phone token tuple) to probability.
    """
    vocab: dict[tuple, int] = {}
    compiled = []
    for word, phones, count in entries:
        chunkings = all_chunkings(word, phones)
        compiled.append((chunkings, count))
        for chunking in chunkings:
            for pair in chunking:
                vocab.setdefault(pair, len(vocab))
    probs = {pair: 1.0 / len(vocab) for pair in vocab}
    history = []
    for _ in range(iterations):
        counts = {pair: 0.0 for pair in vocab}
        loglik = 0.0
        for chunkings, count in compiled:
            likes = []
            for chunking in chunkings:
                p = 1.0
                for pair in chunking:
                    p *= probs[pair]
                likes.append(p)
            z = sum(likes)
            loglik += count * math.log(z)
            for chunking, like in zip(chunkings, likes):
                for pair in chunking:
                    counts[pair] += count * like / z
        total = sum(counts.values())
        probs = {pair: c / total for pair, c in counts.items()}
        history.append(loglik)
    return probs, history


def enumerate_predictions(model, word: str):
    """Score every segmentation of a word under a trained n-gram model.

    Returns a dict mapping phone-token tuples to the best (max over
    segmentations) log score, mirroring Viterbi recombination.
    """
    from phonefront.g2p import BOS, EOS

    history_len = model.order - 1
    results: dict[tuple, float] = {}

    def rec(pos: int, history: tuple, tokens: tuple, logp: float):
        if pos == len(word):
            p = model.ngram.prob(EOS, history)
            if p <= 0:
                return
            total = logp + math.log(p)
            if tokens not in results or total > results[tokens]:
                results[tokens] = total
            return
        for dg in (1, 2):
            if pos + dg > len(word):
                break
            chunk = word[pos:pos + dg]
            for gid in model._chunk_index.get(chunk, ()):
                p = model.ngram.prob(gid, history)
                if p <= 0:
                    continue
                graphone = model.graphones[gid]
                new_history = ((history + (gid,))[-history_len:]
                               if history_len else ())
                rec(pos + dg, new_history,
                    tokens + tuple(s.canonical for s in graphone.phones),
                    logp + math.log(p))

    rec(0, (BOS,) * history_len, (), 0.0)
    return results


def brute_segment(words, phone_tokens, alpha: float):
    """Best segmentation by exhaustive enumeration of all cut vectors.

    Maximizes the squared-length score; ties prefer the lexicographically
    earliest cut vector.
    """
    n_w, n_p = len(words), len(phone_tokens)
    best = None
    for cuts in itertools.combinations(range(1, n_p), n_w - 1):
        full = [0, *cuts, n_p]
        score = sum(-((b - a) - alpha * len(w)) ** 2
                    for w, a, b in zip(words, full, full[1:]))
        key = (-score, cuts)
        if best is None or key < best[0]:
            best = (key, full)
    assert best is not None
    full = best[1]
    return [(w, phone_tokens[a:b]) for w, a, b in zip(words, full, full[1:])]
