"""Command-line interface.

One subcommand per pipeline stage. Every command prints a single JSON
summary line to stdout, logs to stderr, writes outputs atomically
(temp file + rename), and exits 0 on success, 1 on usage errors, and 2 on
data errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Callable

from . import resources
from .errors import PhonefrontError, UsageError
from .features import FeatureSchema, encode, load_schema
from .g2p import (G2PModel, ensemble_predictions, g2p_corpus, load_model,
                  predict, save_model, train_g2p)
from .inventory import load_all_inventories, load_inventory, restrict_sequence
from .ipa import PhoneSequence, SymbolTable, load_symbol_table, parse_phone_string
from .lexicon import Lexicon, load_lexicon, lookup, save_lexicon
from .makeshift import SegmentationConfig, build_makeshift_lexicon, estimate_alpha, load_corpus
from .metrics import (corpus_rates, load_pairs, paired_bootstrap_samples,
                      per_utterance_rates)
from .phone_map import build_phone_map, save_phone_map

log = logging.getLogger("phonefront")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _atomic_write(path: str | Path, write: Callable[[Path], None]) -> None:
    """Write through a temp file in the destination directory, then rename.

    The temp name keeps the destination suffix so format-sniffing writers
    (matplotlib) behave the same as on the final name.
    """
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp{path.suffix}")
    try:
        write(tmp)
        os.replace(tmp, path)
    finally:
        tmp.unlink(missing_ok=True)


def _emit(summary: dict) -> None:
    print(json.dumps(summary, ensure_ascii=False))


def _check_inputs(*paths: str | None) -> None:
    for p in paths:
        if p is not None and not Path(p).exists():
            raise PhonefrontError(f"input file not found: {p}")


def _load_table(args: argparse.Namespace) -> SymbolTable:
    return load_symbol_table(resources.data_path(
        resources.SYMBOLS_FILENAME, getattr(args, "symbols", None)))


def _load_schema(args: argparse.Namespace) -> FeatureSchema:
    return load_schema(
        resources.data_path(resources.FEATURES_FILENAME, getattr(args, "schema", None)),
        resources.data_path(resources.DIACRITIC_RULES_FILENAME, getattr(args, "rules", None)))


def _add_data_flags(parser: argparse.ArgumentParser, schema: bool = False) -> None:
    parser.add_argument("--symbols", help="symbol table file (default: bundled)")
    if schema:
        parser.add_argument("--schema", help="feature table CSV (default: bundled)")
        parser.add_argument("--rules", help="diacritic rules CSV (default: bundled)")


# --- subcommand implementations -------------------------------------------

def _cmd_parse(args) -> int:
    _check_inputs(args.infile)
    table = _load_table(args)
    lines = Path(args.infile).read_text(encoding="utf-8").splitlines()
    parsed = [parse_phone_string(line, table) for line in lines]
    _atomic_write(args.out, lambda tmp: tmp.write_text(
        "".join(seq.render() + "\n" for seq in parsed), encoding="utf-8"))
    _emit({"command": "parse", "lines": len(parsed),
           "segments": sum(len(s) for s in parsed), "out": str(args.out)})
    return 0


def _cmd_featurize(args) -> int:
    _check_inputs(args.infile)
    table = _load_table(args)
    schema = _load_schema(args)
    lines = Path(args.infile).read_text(encoding="utf-8").splitlines()
    rows = []
    for lineno, line in enumerate(lines):
        for pos, seg in enumerate(parse_phone_string(line, table)):
            rows.append([lineno, pos, seg.canonical,
                         *encode(seg, schema).values])

    def write(tmp: Path) -> None:
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["line", "pos", "segment", *schema.feature_names])
            writer.writerows(rows)

    _atomic_write(args.out, write)
    _emit({"command": "featurize", "lines": len(lines), "segments": len(rows),
           "features": len(schema.feature_names), "out": str(args.out)})
    return 0


def _cmd_map_phones(args) -> int:
    inventories = resources.data_path(resources.SAMPLE_INVENTORIES_FILENAME,
                                      args.inventories)
    _check_inputs(str(inventories))
    table = _load_table(args)
    schema = _load_schema(args)
    target = load_inventory(inventories, args.target_lang, table)
    source = load_inventory(inventories, args.source_lang, table)
    phone_map = build_phone_map(target, source, schema)
    _atomic_write(args.out, lambda tmp: save_phone_map(phone_map, tmp))
    identical = sum(1 for t, (s, _) in phone_map.entries.items() if t == s.canonical)
    _emit({"command": "map-phones", "target": args.target_lang,
           "source": args.source_lang, "entries": len(phone_map),
           "identity_entries": identical, "out": str(args.out)})
    return 0


def _cmd_filter_inventory(args) -> int:
    inventories = resources.data_path(resources.SAMPLE_INVENTORIES_FILENAME,
                                      args.inventories)
    _check_inputs(args.infile, str(inventories))
    table = _load_table(args)
    schema = _load_schema(args)
    inv = load_inventory(inventories, args.language, table)
    lines = Path(args.infile).read_text(encoding="utf-8").splitlines()
    replaced = 0
    out_lines = []
    for line in lines:
        seq = parse_phone_string(line, table)
        restricted = restrict_sequence(seq, inv, schema)
        replaced += sum(1 for a, b in zip(seq, restricted) if a != b)
        out_lines.append(restricted.render() + "\n")
    _atomic_write(args.out, lambda tmp: tmp.write_text("".join(out_lines),
                                                       encoding="utf-8"))
    _emit({"command": "filter-inventory", "language": args.language,
           "lines": len(lines), "replaced_segments": replaced, "out": str(args.out)})
    return 0


def pipeline_rec(corpus: str | Path, out: str | Path, *, table: SymbolTable,
                 model_out: str | Path | None = None, order: int = 3,
                 alpha: float | None = None, lam: float = 0.0,
                 jobs: int = 1) -> int:
    """Makeshift-dictionary pipeline: segment, aggregate, train, serialize."""
    utterances = load_corpus(corpus, table)
    if alpha is None:
        alpha = estimate_alpha(utterances) if utterances else 1.0
    cfg = SegmentationConfig(alpha=alpha, lam=lam)
    lex = build_makeshift_lexicon(utterances, cfg, jobs=jobs)
    _atomic_write(out, lambda tmp: save_lexicon(lex, tmp))
    summary = {"command": "build-dict", "utterances": len(utterances),
               "alpha": alpha, "words": len(lex), "out": str(out)}
    if model_out is not None:
        model = train_g2p(lex, order=order)
        _atomic_write(model_out, lambda tmp: save_model(model, tmp))
        summary.update({"model_out": str(model_out),
                        "em_iterations": len(model.loglik_history),
                        "graphones": len(model.graphones)})
    _emit(summary)
    return 0


def _cmd_build_dict(args) -> int:
    _check_inputs(args.corpus)
    table = _load_table(args)
    return pipeline_rec(args.corpus, args.out, table=table, model_out=args.model_out,
                        order=args.order, alpha=args.alpha, lam=args.lam,
                        jobs=args.jobs)


def _cmd_g2p_train(args) -> int:
    _check_inputs(args.lexicon)
    table = _load_table(args)
    lex = load_lexicon(args.lexicon, table)
    model = train_g2p(lex, order=args.order)
    _atomic_write(args.out, lambda tmp: save_model(model, tmp))
    _emit({"command": "g2p-train", "entries": lex.total_count(), "words": len(lex),
           "graphones": len(model.graphones),
           "em_iterations": len(model.loglik_history),
           "skipped": len(model.skipped), "out": str(args.out)})
    return 0


def pipeline_g2p(train_lex: str | Path, texts: str | Path, out: str | Path, *,
                 table: SymbolTable, order: int = 3, beam: int = 8) -> int:
    """Train a G2P model on a lexicon and cover a text corpus with it.

    Words present in the training lexicon keep their majority pronunciation;
    only out-of-vocabulary words go through the model.
    """
    lex = load_lexicon(train_lex, table)
    model = train_g2p(lex, order=order)
    return _apply_g2p(model, lex, texts, out, beam=beam)


def _apply_g2p(model: G2PModel | None, lex: Lexicon | None,
               texts: str | Path, out: str | Path, beam: int = 8) -> int:
    lines = Path(texts).read_text(encoding="utf-8").splitlines()
    corpus = [line.split() for line in lines if line.strip()]
    pronunciations = g2p_corpus(corpus, model=model, lexicon=lex, beam=beam)
    out_lex = Lexicon()
    from_lexicon = 0
    for word, phones in pronunciations.items():
        if lex is not None and lookup(lex, word):
            from_lexicon += 1
        out_lex.add(word, phones, "g2p")
    _atomic_write(out, lambda tmp: save_lexicon(out_lex, tmp))
    _emit({"command": "g2p-apply", "texts_lines": len(corpus),
           "words": len(pronunciations), "from_lexicon": from_lexicon,
           "predicted": len(pronunciations) - from_lexicon, "out": str(out)})
    return 0


def _cmd_g2p_apply(args) -> int:
    if (args.model is None) == (args.train_lex is None):
        raise UsageError("g2p-apply: give exactly one of --model or --train-lex")
    _check_inputs(args.texts, args.model, args.train_lex, args.lexicon)
    table = _load_table(args)
    if args.train_lex is not None:
        return pipeline_g2p(args.train_lex, args.texts, args.out, table=table,
                            order=args.order, beam=args.beam)
    model = load_model(args.model)
    lex = load_lexicon(args.lexicon, table) if args.lexicon else None
    return _apply_g2p(model, lex, args.texts, args.out, beam=args.beam)


def _cmd_ensemble(args) -> int:
    _check_inputs(args.candidates)
    table = _load_table(args)
    groups: dict[str, list[PhoneSequence]] = {}
    with open(args.candidates, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" in line:
                word, _, pron_text = line.partition("\t")
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise PhonefrontError(
                        f"{args.candidates}:{lineno}: expected 'word<TAB>phones'")
                word, pron_text = parts
            groups.setdefault(word.strip().casefold(), []).append(
                parse_phone_string(pron_text, table))
    out_lex = Lexicon()
    for word, candidates in groups.items():
        out_lex.add(word, ensemble_predictions(candidates), "g2p")
    _atomic_write(args.out, lambda tmp: save_lexicon(out_lex, tmp))
    _emit({"command": "ensemble", "words": len(groups),
           "candidates": sum(len(c) for c in groups.values()), "out": str(args.out)})
    return 0


def _cmd_eval(args) -> int:
    _check_inputs(args.pairs)
    rows = load_pairs(args.pairs)
    pairs = [(ref, hyp) for _, ref, hyp in rows]
    if not pairs:
        raise PhonefrontError(f"{args.pairs}: no evaluation pairs")
    rates = corpus_rates(pairs, metric=args.metric, resamples=args.resamples,
                         seed=args.seed)
    summary = {"command": "eval", "metric": args.metric, **rates.to_dict(),
               "seed": args.seed}
    utt_rates = None
    if args.per_utt or args.plot:
        utt_rates = per_utterance_rates(pairs, metric=args.metric)
    if args.per_utt:
        def write(tmp: Path) -> None:
            with open(tmp, "w", encoding="utf-8") as f:
                f.write("utt_id\trate\n")
                for (utt_id, _, _), rate in zip(rows, utt_rates):
                    f.write(f"{utt_id}\t{rate!r}\n")

        _atomic_write(args.per_utt, write)
        summary["per_utt"] = str(args.per_utt)
    if args.plot:
        from .report import render_rate_figure
        ci = None if rates.ci_low is None else (rates.ci_low, rates.ci_high)
        _atomic_write(args.plot, lambda tmp: render_rate_figure(
            utt_rates, rates.micro, args.metric, tmp, ci=ci))
        summary["plot"] = str(args.plot)
    if args.out:
        _atomic_write(args.out, lambda tmp: tmp.write_text(
            json.dumps(summary, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"))
    _emit(summary)
    return 0


def _cmd_compare(args) -> int:
    _check_inputs(args.a, args.b)
    a_rows = load_pairs(args.a)
    b_rows = load_pairs(args.b)
    a_pairs = [(ref, hyp) for _, ref, hyp in a_rows]
    b_pairs = [(ref, hyp) for _, ref, hyp in b_rows]
    result, samples = paired_bootstrap_samples(
        a_pairs, b_pairs, metric=args.metric, resamples=args.resamples,
        seed=args.seed)
    summary = {"command": "compare", "metric": args.metric, **result.to_dict(),
               "seed": args.seed,
               "significant": bool(result.ci_low > 0 or result.ci_high < 0)}
    if args.plot:
        from .report import render_delta_figure
        _atomic_write(args.plot, lambda tmp: render_delta_figure(
            samples, result.delta, args.metric, tmp,
            ci=(result.ci_low, result.ci_high)))
        summary["plot"] = str(args.plot)
    if args.out:
        _atomic_write(args.out, lambda tmp: tmp.write_text(
            json.dumps(summary, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"))
    _emit(summary)
    return 0


# --- argument parsing -------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="phonefront",
                     description="Symbolic linguistic-frontend toolkit for "
                                 "low-resource TTS pipelines")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="cap on worker parallelism (default: available cores)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="parse phone strings to canonical segments")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _add_data_flags(p)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("featurize", help="encode phone strings as feature vectors")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _add_data_flags(p, schema=True)
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("map-phones", help="build a target-to-source phone map")
    p.add_argument("--target-lang", required=True)
    p.add_argument("--source-lang", required=True)
    p.add_argument("--inventories", help="PHOIBLE-style CSV (default: bundled sample)")
    p.add_argument("--out", required=True)
    _add_data_flags(p, schema=True)
    p.set_defaults(func=_cmd_map_phones)

    p = sub.add_parser("filter-inventory",
                       help="restrict phone sequences to a language's inventory")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--language", required=True)
    p.add_argument("--inventories", help="PHOIBLE-style CSV (default: bundled sample)")
    p.add_argument("--out", required=True)
    _add_data_flags(p, schema=True)
    p.set_defaults(func=_cmd_filter_inventory)

    p = sub.add_parser("build-dict",
                       help="build a makeshift dictionary from a transcribed corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model-out", help="also train and serialize a G2P model here")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--alpha", type=float, default=None,
                   help="phones per grapheme (default: estimated from the corpus)")
    p.add_argument("--lam", type=float, default=0.0,
                   help="seed-G2P agreement weight for automatic segmentation")
    _add_data_flags(p)
    p.set_defaults(func=_cmd_build_dict)

    p = sub.add_parser("g2p-train", help="train a G2P model from a lexicon")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--order", type=int, default=3)
    _add_data_flags(p)
    p.set_defaults(func=_cmd_g2p_train)

    p = sub.add_parser("g2p-apply",
                       help="cover a text corpus with pronunciations")
    p.add_argument("--model", help="serialized model from g2p-train")
    p.add_argument("--train-lex", help="train on this lexicon, then apply")
    p.add_argument("--lexicon", help="lookup lexicon consulted before the model")
    p.add_argument("--texts", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--beam", type=int, default=8)
    _add_data_flags(p)
    p.set_defaults(func=_cmd_g2p_apply)

    p = sub.add_parser("ensemble",
                       help="pick the edit-distance medoid of candidate predictions")
    p.add_argument("--candidates", required=True,
                   help="TSV of word<TAB>phones, one candidate per line")
    p.add_argument("--out", required=True)
    _add_data_flags(p)
    p.set_defaults(func=_cmd_ensemble)

    p = sub.add_parser("eval", help="score ref/hyp pairs with PER, CER, or WER")
    p.add_argument("--pairs", required=True, help="TSV of utt_id<TAB>ref<TAB>hyp")
    p.add_argument("--metric", choices=["per", "cer", "wer"], default="cer")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resamples", type=int, default=1000)
    p.add_argument("--out", help="write the JSON summary here too")
    p.add_argument("--per-utt", dest="per_utt", help="write per-utterance rates TSV")
    p.add_argument("--plot", help="render a rate figure to this image file")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("compare", help="paired-bootstrap comparison of two systems")
    p.add_argument("--a", required=True, help="baseline pairs TSV")
    p.add_argument("--b", required=True, help="contrast pairs TSV")
    p.add_argument("--metric", choices=["per", "cer", "wer"], default="cer")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resamples", type=int, default=1000)
    p.add_argument("--out", help="write the JSON summary here too")
    p.add_argument("--plot", help="render a delta histogram to this image file")
    p.set_defaults(func=_cmd_compare)

    return parser


def run(argv: list[str]) -> int:
    """Parse arguments and execute one subcommand; returns the exit code."""
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                            format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    except (PhonefrontError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
