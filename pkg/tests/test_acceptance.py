"""Acceptance gate: one test per criterion, each printing a pass line.

Run with ``pytest -v tests/test_acceptance.py -s`` to see the per-criterion
lines. Expected values come from independent oracles (brute-force DP,
exhaustive enumeration, direct arithmetic) computed inside the tests;
timing limits are asserted with perf_counter.
"""

import itertools
import random
import time

import pytest

from phonefront import (Lexicon, PhoneSequence, SegmentationConfig,
                        TranscribedUtterance, build_makeshift_lexicon,
                        build_phone_map, corpus_rates, encode, estimate_alpha,
                        levenshtein, load_inventory, load_lexicon,
                        load_schema, load_symbol_table, majority_vote,
                        ensemble_predictions, paired_bootstrap_delta,
                        parse_phone_string, predict, save_lexicon,
                        save_phone_map, segment_phones, train_g2p)
from phonefront.cli import run
from phonefront.resources import (default_diacritic_rules_path,
                                  default_features_path,
                                  default_inventories_path,
                                  default_symbol_table_path)

from oracles import brute_levenshtein

TRACKED_TRAININGS: list[tuple[str, tuple[float, ...]]] = []


def train_tracked(label, lex, **kwargs):
    model = train_g2p(lex, **kwargs)
    TRACKED_TRAININGS.append((label, model.loglik_history))
    return model


def ok(n, message):
    print(f"ACCEPTANCE {n}: PASS - {message}")


@pytest.fixture(scope="module")
def table():
    return load_symbol_table(default_symbol_table_path())


@pytest.fixture(scope="module")
def schema():
    return load_schema(default_features_path(), default_diacritic_rules_path())


def test_01_edit_distance_oracle_equivalence():
    rng = random.Random(1001)
    start = time.perf_counter()
    for _ in range(1000):
        ref = [rng.randrange(5) for _ in range(rng.randint(0, 10))]
        hyp = [rng.randrange(5) for _ in range(rng.randint(0, 10))]
        assert levenshtein(ref, hyp).distance == brute_levenshtein(ref, hyp)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    ok(1, f"levenshtein == brute-force DP on 1000 random pairs in {elapsed:.2f}s")


def test_02_feature_schema_integrity(table, schema):
    assert len(schema.feature_names) == 62
    for vector in schema.base_table.values():
        assert len(vector.values) == 62
        assert all(v in (0, 1) for v in vector.values)
    vp = encode(table.segment("p"), schema)
    vb = encode(table.segment("b"), schema)
    voiced_diff = [schema.feature_names[i] for i in range(62) if vp[i] != vb[i]]
    assert voiced_diff == ["voice"]
    vpl = encode(table.segment("p", ["ː"]), schema)
    long_diff = [schema.feature_names[i] for i in range(62) if vp[i] != vpl[i]]
    assert long_diff == ["long"]
    ok(2, f"62 binary features over {len(schema.base_table)} segments; "
          "p/b differ in voice only, p/pː in long only")


def test_03_phone_map_identity_and_determinism(table, schema, tmp_path):
    fry = load_inventory(default_inventories_path(), "fry", table)
    eng = load_inventory(default_inventories_path(), "eng", table)
    base = build_phone_map(fry, eng, schema)
    shared = {p.canonical for p in fry.phones} & {p.canonical for p in eng.phones}
    assert shared
    for canonical in shared:
        source, distance = base.entries[canonical]
        assert source.canonical == canonical and distance == 0.0
    scaled = build_phone_map(fry, eng, schema, weights=[3.7] * 62)
    assert all(base.entries[t][0] == scaled.entries[t][0] for t in base.entries)
    one, two = tmp_path / "one.tsv", tmp_path / "two.tsv"
    save_phone_map(build_phone_map(fry, eng, schema), one)
    save_phone_map(build_phone_map(fry, eng, schema), two)
    assert one.read_bytes() == two.read_bytes()
    ok(3, f"{len(shared)} shared phones map to themselves; winners invariant "
          "under 3.7x weights; serialized builds byte-identical")


def make_recovery_corpus(table, rng):
    letters = "abdefiklmnopst"
    vocab: dict[str, str] = {}
    while len(vocab) < 200:
        word = "".join(rng.choice(letters) for _ in range(rng.randint(2, 8)))
        vocab.setdefault(word, " ".join(word))
    words_list = sorted(vocab)
    corpus = []
    for i in range(150):
        words = [rng.choice(words_list) for _ in range(rng.randint(2, 6))]
        phones, bounds = [], []
        for w in words:
            phones.extend(vocab[w].split())
            bounds.append(len(phones))
        corpus.append(TranscribedUtterance(
            id=f"u{i:03d}", words=tuple(words),
            phones=parse_phone_string(" ".join(phones), table),
            boundaries=tuple(bounds[:-1])))
    return vocab, corpus


def test_04_makeshift_exact_recovery(table):
    start = time.perf_counter()
    vocab, corpus = make_recovery_corpus(table, random.Random(2024))

    lex = build_makeshift_lexicon(corpus, SegmentationConfig())
    observed = {w for utt in corpus for w in utt.words}
    assert set(lex.words()) == observed
    for word in observed:
        prons = lex.pronunciations(word)
        assert len(prons) == 1
        assert prons[0].phones.render() == vocab[word]

    stripped = [TranscribedUtterance(u.id, u.words, u.phones, None) for u in corpus]
    alpha = estimate_alpha(stripped)
    cfg = SegmentationConfig(alpha=alpha)
    correct = total = 0
    for with_bounds, without in zip(corpus, stripped):
        truth = segment_phones(with_bounds, cfg)
        guess = segment_phones(without, cfg)
        for (_, want), (_, got) in zip(truth, guess):
            total += 1
            correct += want == got
    accuracy = correct / total
    elapsed = time.perf_counter() - start
    assert accuracy >= 0.95
    assert elapsed < 30.0
    ok(4, f"exact recovery of {len(observed)} observed words; boundary-free "
          f"DP accuracy {accuracy:.3f} (alpha={alpha:.3f}) in {elapsed:.1f}s")


def test_05_majority_vote(table):
    a = parse_phone_string("p a t", table)
    b = parse_phone_string("p a k", table)
    assert majority_vote([a, a, a, b, b]) == a
    shorter = parse_phone_string("p a", table)
    longer = parse_phone_string("p a t", table)
    assert majority_vote([longer, shorter, longer, shorter]) == shorter
    rng = random.Random(55)
    for _ in range(200):
        pool = [parse_phone_string(
            " ".join(rng.choice(["p", "a", "t"]) for _ in range(rng.randint(1, 4))),
            table) for _ in range(rng.randint(1, 7))]
        assert majority_vote(pool) in pool
    ok(5, "majority, shorter-on-tie, and membership all hold")


@pytest.fixture(scope="module")
def learnability_runs(table):
    start = time.perf_counter()
    rng = random.Random(4242)
    letters = "abcdefghijklmnopqrstuvwxyz"

    # deterministic 1:1 orthography over 26 distinct phones
    one_to_one = dict(zip(letters, [
        "a", "b", "t͡ʃ", "d", "e", "f", "ɡ", "h", "i", "j", "k", "l", "m",
        "n", "o", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"]))
    assert len(set(one_to_one.values())) == 26

    def sample_words(count, c_boost=0.0):
        words, seen = [], set()
        while len(words) < count:
            n = rng.randint(3, 10)
            word = "".join(
                "c" if c_boost and rng.random() < c_boost else rng.choice(letters)
                for _ in range(n))
            if word not in seen:
                seen.add(word)
                words.append(word)
        return words

    words = sample_words(700)
    lex = Lexicon()
    for w in words[:500]:
        lex.add(w, parse_phone_string(
            " ".join(one_to_one[c] for c in w), table), "ground_truth")
    simple_model = train_tracked("1to1-500", lex)
    edits = length = 0
    for w in words[500:700]:
        ref = [one_to_one[c] for c in w]
        hyp = predict(simple_model, w)[0].phones.tokens()
        edits += levenshtein(ref, hyp).distance
        length += len(ref)
    simple_per = edits / length

    # context-dependent: c reads /s/ before e or i, /k/ otherwise
    def pronounce(word):
        out = []
        for idx, ch in enumerate(word):
            if ch == "c":
                following = word[idx + 1] if idx + 1 < len(word) else ""
                out.append("s" if following in ("e", "i") else "k")
            else:
                out.append(one_to_one[ch] if ch != "c" else "k")
        return out

    words = sample_words(1200, c_boost=0.18)
    lex = Lexicon()
    for w in words[:1000]:
        lex.add(w, parse_phone_string(" ".join(pronounce(w)), table), "ground_truth")
    context_model = train_tracked("context-1000", lex, order=3)
    edits = length = 0
    for w in words[1000:1200]:
        ref = pronounce(w)
        hyp = predict(context_model, w)[0].phones.tokens()
        edits += levenshtein(ref, hyp).distance
        length += len(ref)
    context_per = edits / length
    elapsed = time.perf_counter() - start
    return simple_per, context_per, elapsed


def test_06_g2p_small_data_learnability(learnability_runs):
    simple_per, context_per, elapsed = learnability_runs
    assert simple_per == 0.0
    assert context_per <= 0.10
    assert elapsed < 60.0
    ok(6, f"1:1 orthography PER={simple_per:.3f}; context-dependent "
          f"PER={context_per:.3f}; trained and scored in {elapsed:.1f}s")


def test_07_em_monotonicity(learnability_runs, table, toy_dir):
    # the learnability fixture contributes its two runs; add the bundled-toy
    # and makeshift trainings so every suite training run is covered
    lex = load_lexicon(toy_dir / "train.dict", table)
    train_tracked("toy-train", lex)
    corpus = []
    rng = random.Random(77)
    for i in range(40):
        words = ["".join(rng.choice("abde") for _ in range(rng.randint(1, 4)))
                 for _ in range(rng.randint(1, 4))]
        phones = " ".join(" ".join(w) for w in words)
        corpus.append(TranscribedUtterance(
            f"u{i}", tuple(words), parse_phone_string(phones, table), None))
    makeshift = build_makeshift_lexicon(corpus, SegmentationConfig(alpha=1.0))
    train_tracked("makeshift-40", makeshift)

    assert len(TRACKED_TRAININGS) >= 4
    for label, history in TRACKED_TRAININGS:
        assert len(history) >= 1, label
        for earlier, later in zip(history, history[1:]):
            assert later >= earlier - 1e-9, \
                f"{label}: LL decreased {earlier} -> {later}"
    ok(7, f"log-likelihood non-decreasing (1e-9 slack) across "
          f"{len(TRACKED_TRAININGS)} training runs")


def test_08_ensemble_medoid(table):
    rng = random.Random(88)
    reference = parse_phone_string("p a t k e s a", table)
    candidates = [reference] * 6
    for _ in range(4):
        tokens = reference.tokens()[:]
        for _ in range(rng.randint(1, 3)):
            tokens[rng.randrange(len(tokens))] = rng.choice(["m", "n", "o"])
        candidates.append(parse_phone_string(" ".join(tokens), table))
    rng.shuffle(candidates)
    assert ensemble_predictions(candidates) == reference

    for _ in range(100):
        pool = [parse_phone_string(
            " ".join(rng.choice(["p", "a", "t"]) for _ in range(rng.randint(1, 5))),
            table) for _ in range(rng.randint(1, 10))]
        got = ensemble_predictions(pool)
        costs = [sum(levenshtein(c.tokens(), other.tokens()).distance
                     for other in pool) for c in pool]
        best = min(range(len(pool)), key=lambda i: (costs[i], i))
        assert got == pool[best]
    ok(8, "10-candidate majority recovered; medoid matches brute force on "
          "100 random instances")


def test_09_bootstrap_determinism_and_sanity():
    rng = random.Random(99)
    pairs = [(" ".join(str(rng.randrange(4)) for _ in range(rng.randint(2, 8))),
              " ".join(str(rng.randrange(4)) for _ in range(rng.randint(2, 8))))
             for _ in range(40)]
    one = corpus_rates(pairs, metric="wer", resamples=1000, seed=7)
    two = corpus_rates(pairs, metric="wer", resamples=1000, seed=7)
    assert (one.ci_low, one.ci_high) == (two.ci_low, two.ci_high)

    # B strictly better on every utterance, with heterogeneous lengths and
    # error counts so the resampled deltas actually vary
    worse, better = [], []
    for i in range(25):
        n = 3 + (i % 6)
        ref = " ".join(f"w{i}_{k}" for k in range(n))
        broken = ref.split()
        for k in range(1 + (i % 3)):
            broken[k] = f"bad{k}"
        worse.append((ref, " ".join(broken)))
        better.append((ref, ref))
    result = paired_bootstrap_delta(worse, better, metric="wer",
                                    resamples=1000, seed=7)
    assert result.delta < 0
    assert result.ci_low < result.ci_high
    assert result.ci_high < 0
    ok(9, f"seed-7 CIs bit-identical; uniform improvement CI "
          f"[{result.ci_low:.4f}, {result.ci_high:.4f}] excludes 0")


@pytest.fixture(scope="module")
def toy_dir():
    from conftest import TOY
    return TOY


def test_10_golden_pipelines(toy_dir, tmp_path):
    start = time.perf_counter()
    g2p_out = tmp_path / "g2p_out.dict"
    assert run(["g2p-apply", "--train-lex", str(toy_dir / "train.dict"),
                "--texts", str(toy_dir / "texts.txt"), "--out", str(g2p_out)]) == 0
    assert g2p_out.read_bytes() == (toy_dir / "golden" / "g2p_out.dict").read_bytes()
    g2p_elapsed = time.perf_counter() - start

    start = time.perf_counter()
    rec_out = tmp_path / "rec_out.dict"
    rec_model = tmp_path / "rec_model.json"
    args = ["build-dict", "--corpus", str(toy_dir / "utts.tsv"),
            "--out", str(rec_out), "--model-out", str(rec_model)]
    assert run(args) == 0
    assert rec_out.read_bytes() == (toy_dir / "golden" / "rec_out.dict").read_bytes()
    assert rec_model.read_bytes() \
        == (toy_dir / "golden" / "rec_model.json").read_bytes()
    rec_elapsed = time.perf_counter() - start

    # idempotence: rerun both and compare bytes
    first = (g2p_out.read_bytes(), rec_out.read_bytes(), rec_model.read_bytes())
    assert run(["g2p-apply", "--train-lex", str(toy_dir / "train.dict"),
                "--texts", str(toy_dir / "texts.txt"), "--out", str(g2p_out)]) == 0
    assert run(args) == 0
    assert (g2p_out.read_bytes(), rec_out.read_bytes(),
            rec_model.read_bytes()) == first
    assert g2p_elapsed < 30.0 and rec_elapsed < 30.0
    ok(10, f"golden byte-equality and idempotence; g2p {g2p_elapsed:.1f}s, "
           f"rec {rec_elapsed:.1f}s")


def test_11_scale_smoke_73k(table, tmp_path):
    rng = random.Random(111)
    letters = "abdefhiklmnoprstuvz"
    phones = ["a", "b", "d", "e", "f", "h", "i", "k", "l", "m",
              "n", "o", "p", "r", "s", "t", "u", "v", "z", "aː", "ŋ"]
    source = tmp_path / "big.dict"
    with open(source, "w", encoding="utf-8") as f:
        seen = set()
        count = 0
        while count < 73_000:
            word = "".join(rng.choice(letters) for _ in range(rng.randint(2, 12)))
            if word in seen:
                continue
            seen.add(word)
            pron = " ".join(rng.choice(phones) for _ in range(rng.randint(1, 10)))
            f.write(f"{word}\t{pron}\n")
            count += 1

    start = time.perf_counter()
    lex = load_lexicon(source, table)
    out = tmp_path / "big_out.dict"
    save_lexicon(lex, out)
    again = load_lexicon(out, table)
    elapsed = time.perf_counter() - start
    assert len(lex) == 73_000
    assert again == lex
    assert elapsed < 5.0
    ok(11, f"73,000-entry lexicon load+save+reload round-trip in {elapsed:.2f}s")
