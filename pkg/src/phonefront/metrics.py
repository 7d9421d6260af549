"""Edit-distance evaluation: PER, CER, WER, corpus rates, and paired bootstrap.

All rates are Levenshtein edits divided by reference length, with the
denominator clamped to 1 for empty references. Corpus aggregation reports
both the micro rate (total edits over total reference length) and the macro
rate (mean of per-utterance rates), with an optional bootstrap confidence
interval on the micro rate. System comparison uses a paired bootstrap over
shared utterances. All resampling uses numpy's seeded default generator
(PCG64), so results are bit-reproducible for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EvalError
from .ipa import PhoneSequence

METRICS = ("per", "cer", "wer")

_MATCH, _SUB, _DEL, _INS = "match", "substitute", "delete", "insert"


@dataclass(frozen=True)
class EditAlignment:
    """Minimal-cost alignment between a reference and a hypothesis.

    ``distance`` equals the number of non-match operations. Each op is
    (kind, ref_index, hyp_index); replaying the ops transforms the reference
    into the hypothesis.
    """

    distance: int
    ops: tuple[tuple[str, int, int], ...]


def levenshtein(ref: Sequence, hyp: Sequence) -> EditAlignment:
    """Unit-cost edit distance with one deterministic optimal alignment.

    Backtrace ties prefer match over substitute over delete over insert.
    """
    n, m = len(ref), len(hyp)
    # dist[i][j]: edits between ref[:i] and hyp[:j]
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row = dist[i]
        prev = dist[i - 1]
        ref_tok = ref[i - 1]
        for j in range(1, m + 1):
            same = ref_tok == hyp[j - 1]
            row[j] = min(prev[j - 1] + (0 if same else 1),
                         prev[j] + 1,
                         row[j - 1] + 1)

    ops: list[tuple[str, int, int]] = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dist[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and here == dist[i - 1][j - 1]:
            ops.append((_MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == dist[i - 1][j - 1] + 1:
            ops.append((_SUB, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and here == dist[i - 1][j] + 1:
            ops.append((_DEL, i - 1, j))
            i -= 1
        else:
            ops.append((_INS, i, j - 1))
            j -= 1
    ops.reverse()
    return EditAlignment(distance=dist[n][m], ops=tuple(ops))


def _normalize_text(text: str) -> str:
    return " ".join(text.split())


def _phone_tokens(value) -> list[str]:
    if isinstance(value, PhoneSequence):
        return value.tokens()
    if isinstance(value, str):
        return value.split()
    return list(value)


def per(ref, hyp) -> float:
    """Phone error rate over canonical phone tokens."""
    ref_tokens = _phone_tokens(ref)
    hyp_tokens = _phone_tokens(hyp)
    return levenshtein(ref_tokens, hyp_tokens).distance / max(1, len(ref_tokens))


def cer(ref: str, hyp: str) -> float:
    """Character error rate after whitespace normalization.

    Runs of whitespace collapse to single spaces and the ends are stripped;
    the remaining spaces count as characters.
    """
    ref_chars = list(_normalize_text(ref))
    hyp_chars = list(_normalize_text(hyp))
    return levenshtein(ref_chars, hyp_chars).distance / max(1, len(ref_chars))


def wer(ref: str, hyp: str) -> float:
    """Word error rate over whitespace-separated tokens."""
    ref_tokens = ref.split()
    hyp_tokens = hyp.split()
    return levenshtein(ref_tokens, hyp_tokens).distance / max(1, len(ref_tokens))


def _pair_stats(pairs: Sequence[tuple], metric: str) -> tuple[np.ndarray, np.ndarray]:
    """Per-utterance (edits, reference length) arrays for a metric."""
    if metric not in METRICS:
        raise EvalError(f"unknown metric {metric!r} (expected one of {METRICS})")
    edits = np.empty(len(pairs), dtype=np.int64)
    lengths = np.empty(len(pairs), dtype=np.int64)
    for idx, (ref, hyp) in enumerate(pairs):
        if metric == "cer":
            ref_tokens: Sequence = list(_normalize_text(ref))
            hyp_tokens: Sequence = list(_normalize_text(hyp))
        elif metric == "wer":
            ref_tokens = ref.split()
            hyp_tokens = hyp.split()
        else:
            ref_tokens = _phone_tokens(ref)
            hyp_tokens = _phone_tokens(hyp)
        edits[idx] = levenshtein(ref_tokens, hyp_tokens).distance
        lengths[idx] = len(ref_tokens)
    return edits, lengths


def _micro(edits: np.ndarray, lengths: np.ndarray) -> float:
    return float(edits.sum()) / max(1, int(lengths.sum()))


def per_utterance_rates(pairs: Sequence[tuple], metric: str = "cer") -> list[float]:
    """Each pair's own error rate (used for reporting and figures)."""
    edits, lengths = _pair_stats(pairs, metric)
    return [float(e) / max(1, int(n)) for e, n in zip(edits, lengths)]


@dataclass(frozen=True)
class CorpusRates:
    """Corpus-level error rates, optionally with a bootstrap CI on micro."""

    micro: float
    macro: float
    n_utterances: int
    ci_low: float | None = None
    ci_high: float | None = None

    def to_dict(self) -> dict:
        return {"micro": self.micro, "macro": self.macro, "n": self.n_utterances,
                "ci": None if self.ci_low is None else [self.ci_low, self.ci_high]}


def corpus_rates(pairs: Sequence[tuple], metric: str = "cer",
                 resamples: int | None = None, seed: int = 0) -> CorpusRates:
    """Micro and macro rates over (ref, hyp) pairs.

    When ``resamples`` is given, utterances are resampled with replacement
    that many times and a 95% percentile interval on the micro rate is
    attached. Identical inputs and seed give bit-identical results.
    """
    if not pairs:
        raise EvalError("corpus_rates requires at least one (ref, hyp) pair")
    edits, lengths = _pair_stats(pairs, metric)
    micro = _micro(edits, lengths)
    macro = float(np.mean(edits / np.maximum(1, lengths)))
    ci_low = ci_high = None
    if resamples is not None:
        if resamples <= 0:
            raise EvalError(f"resamples must be positive, got {resamples}")
        rng = np.random.default_rng(seed)
        n = len(pairs)
        idx = rng.integers(0, n, size=(resamples, n))
        stats = edits[idx].sum(axis=1) / np.maximum(1, lengths[idx].sum(axis=1))
        ci_low, ci_high = (float(q) for q in np.percentile(stats, [2.5, 97.5]))
    return CorpusRates(micro=micro, macro=macro, n_utterances=len(pairs),
                       ci_low=ci_low, ci_high=ci_high)


@dataclass(frozen=True)
class PairedDelta:
    """Micro-rate difference between two systems with a bootstrap CI."""

    delta: float
    ci_low: float
    ci_high: float
    n_utterances: int

    def to_dict(self) -> dict:
        return {"delta": self.delta, "ci": [self.ci_low, self.ci_high],
                "n": self.n_utterances}


def paired_bootstrap_samples(a_pairs: Sequence[tuple], b_pairs: Sequence[tuple],
                             metric: str = "cer", resamples: int = 1000,
                             seed: int = 0) -> tuple[PairedDelta, np.ndarray]:
    """Paired bootstrap plus the raw resampled deltas (for figures)."""
    if len(a_pairs) != len(b_pairs):
        raise EvalError(
            f"system outputs have different lengths: {len(a_pairs)} vs {len(b_pairs)}")
    if not a_pairs:
        raise EvalError("paired_bootstrap_delta requires at least one pair")
    for idx, ((ref_a, _), (ref_b, _)) in enumerate(zip(a_pairs, b_pairs)):
        ref_a_cmp = ref_a.render() if isinstance(ref_a, PhoneSequence) else ref_a
        ref_b_cmp = ref_b.render() if isinstance(ref_b, PhoneSequence) else ref_b
        if ref_a_cmp != ref_b_cmp:
            raise EvalError(f"reference mismatch at index {idx}")
    if resamples <= 0:
        raise EvalError(f"resamples must be positive, got {resamples}")

    a_edits, a_lens = _pair_stats(a_pairs, metric)
    b_edits, b_lens = _pair_stats(b_pairs, metric)
    delta = _micro(b_edits, b_lens) - _micro(a_edits, a_lens)

    rng = np.random.default_rng(seed)
    n = len(a_pairs)
    idx = rng.integers(0, n, size=(resamples, n))
    a_stats = a_edits[idx].sum(axis=1) / np.maximum(1, a_lens[idx].sum(axis=1))
    b_stats = b_edits[idx].sum(axis=1) / np.maximum(1, b_lens[idx].sum(axis=1))
    deltas = b_stats - a_stats
    ci_low, ci_high = (float(q) for q in np.percentile(deltas, [2.5, 97.5]))
    result = PairedDelta(delta=delta, ci_low=ci_low, ci_high=ci_high, n_utterances=n)
    return result, deltas


def paired_bootstrap_delta(a_pairs: Sequence[tuple], b_pairs: Sequence[tuple],
                           metric: str = "cer", resamples: int = 1000,
                           seed: int = 0) -> PairedDelta:
    """Bootstrap the micro-rate difference micro(B) - micro(A).

    Both systems must be evaluated on identical references in identical
    order; utterance indices are resampled jointly. Deterministic for a
    fixed seed.
    """
    result, _ = paired_bootstrap_samples(a_pairs, b_pairs, metric, resamples, seed)
    return result


def load_pairs(path: str | Path) -> list[tuple[str, str, str]]:
    """Read an evaluation TSV of ``utt_id<TAB>ref<TAB>hyp`` lines."""
    path = Path(path)
    rows: list[tuple[str, str, str]] = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise EvalError(
                    f"{path}:{lineno}: expected 'utt_id<TAB>ref<TAB>hyp', "
                    f"found {len(parts)} fields")
            rows.append((parts[0], parts[1], parts[2]))
    return rows
