"""Batch command-line interface.

Subcommands wire the library into the full pipeline: `preprocess`
(quality filter), `noise` (corruption into parallel pairs), `split`
(train/valid/test partition), `make-testsets` (one file per error
type), `score gleu` / `score span`, `m2 convert`, and `stats`.

Every file-producing command writes a `<output>.manifest.json` recording
version, seed, config hash, and counters; scoring commands embed the
same fields in their JSON report. Exit codes: 0 success, 2 bad
configuration or arguments, 3 I/O failure, 4 malformed input file,
5 corpus exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace

from . import __version__, corpus_io, gleu, spans
from .config import ALL_OPS, NoiseConfig, config_hash, load_filter_rules, load_noise_config
from .errors import ConfigError, ExhaustedError, FormatError, GecPipeError
from .manifest import RunManifest, manifest_path
from .noise import TYPED_SETS, Lexicons, NoiseEngine, NoiseStats, generate_typed_testset
from .tokenizer import Tokenizer, surfaces, tokenize

__all__ = ["main", "console_main"]


def _emit(report: dict, pretty: bool) -> None:
    if pretty:
        for key, value in report.items():
            if isinstance(value, float):
                value = f"{value:.1f}" if key == "score" else f"{value:.4f}"
            elif isinstance(value, (dict, list)):
                value = json.dumps(value, ensure_ascii=False)
            print(f"{key:>20}  {value}")
    else:
        print(json.dumps(report, ensure_ascii=False, sort_keys=True))


def _load_config(args) -> NoiseConfig:
    config = load_noise_config(args.config) if args.config else NoiseConfig()
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def _manifest(command: str, args_start: float, **fields) -> RunManifest:
    return RunManifest(
        command=command,
        version=__version__,
        wall_time_s=round(time.monotonic() - args_start, 6),
        **fields,
    )


# ---------------------------------------------------------------------------
# preprocess


def cmd_preprocess(args) -> int:
    start = time.monotonic()
    rules = load_filter_rules(args.rules) if args.rules else corpus_io.FilterRules()
    tokenizer = Tokenizer()
    reader = corpus_io.PlainCorpusReader(args.input, lenient=args.lenient)
    rejected = {reason: 0 for reason in corpus_io.REJECT_REASONS}
    kept = 0

    def kept_sentences():
        nonlocal kept
        for record in reader:
            reason = corpus_io.filter_sentence(record.text, rules, tokenizer)
            if reason is None:
                kept += 1
                yield record
            else:
                rejected[reason] += 1

    corpus_io.write_plain_corpus(kept_sentences(), args.output)
    manifest = _manifest(
        "preprocess",
        start,
        inputs=[str(args.input)],
        outputs=[str(args.output)],
        counts={
            "lines": reader.n_lines,
            "blank": reader.n_blank,
            "decode_errors": reader.n_decode_errors,
            "kept": kept,
            "rejected": rejected,
        },
    )
    manifest.write(manifest_path(args.output))
    _emit(manifest.to_json_obj(), args.pretty)
    return 0


# ---------------------------------------------------------------------------
# noise


def _noise_shard(payload):
    config_obj, lex_paths, sentences = payload
    from .config import noise_config_from_obj

    config = noise_config_from_obj(config_obj)
    engine = NoiseEngine(replace(config, lexicons=lex_paths))
    rows = []
    for sent in sentences:
        pair = engine.corrupt(sent)
        rows.append((pair.source, pair.target, pair.edits.to_json_obj()))
    return rows, engine.stats


def cmd_noise(args) -> int:
    start = time.monotonic()
    config = _load_config(args)
    sentences = list(corpus_io.read_tagged_corpus(args.input))
    workers = max(1, args.workers)

    if workers == 1 or len(sentences) < 2 * workers:
        engine = NoiseEngine(config)
        rows = []
        for sent in sentences:
            pair = engine.corrupt(sent)
            rows.append((pair.source, pair.target, pair.edits.to_json_obj()))
        stats = engine.stats
    else:
        import multiprocessing as mp

        shard_size = (len(sentences) + workers - 1) // workers
        shards = [
            (config.to_json_obj(), config.lexicons, sentences[k:k + shard_size])
            for k in range(0, len(sentences), shard_size)
        ]
        stats = NoiseStats()
        rows = []
        with mp.get_context("spawn").Pool(workers) as pool:
            for shard_rows, shard_stats in pool.map(_noise_shard, shards):
                rows.extend(shard_rows)
                stats.merge(shard_stats)

    corpus_io.write_parallel(((src, tgt) for src, tgt, _ in rows), args.output)
    edits_path = args.edit_log or str(args.output) + ".edits.jsonl"
    with open(edits_path, "w", encoding="utf-8", newline="\n") as f:
        for _, _, log_obj in rows:
            json.dump(log_obj, f, ensure_ascii=False, separators=(",", ":"))
            f.write("\n")

    changed = sum(1 for src, tgt, _ in rows if src != tgt)
    counts = stats.to_json_obj()
    counts["pairs"] = len(rows)
    counts["identity_pairs"] = len(rows) - changed
    manifest = _manifest(
        "noise",
        start,
        seed=config.seed,
        config_hash=config_hash(config),
        inputs=[str(args.input)],
        outputs=[str(args.output), edits_path],
        counts=counts,
    )
    manifest.write(manifest_path(args.output))
    _emit(manifest.to_json_obj(), args.pretty)
    return 0


# ---------------------------------------------------------------------------
# split


def cmd_split(args) -> int:
    start = time.monotonic()
    pairs = list(corpus_io.read_parallel(args.input))
    seed = args.seed if args.seed is not None else 0
    train, valid, test = corpus_io.split_corpus(pairs, args.n_valid, args.n_test, seed)
    for split_pairs, path in ((train, args.train), (valid, args.valid), (test, args.test)):
        corpus_io.write_parallel(split_pairs, path)
    manifest = _manifest(
        "split",
        start,
        seed=seed,
        inputs=[str(args.input)],
        outputs=[str(args.train), str(args.valid), str(args.test)],
        counts={"pairs": len(pairs), "train": len(train), "valid": len(valid), "test": len(test)},
    )
    manifest.write(manifest_path(args.train))
    _emit(manifest.to_json_obj(), args.pretty)
    return 0


# ---------------------------------------------------------------------------
# make-testsets


def cmd_make_testsets(args) -> int:
    start = time.monotonic()
    config = _load_config(args)
    names = args.types.split(",") if args.types else list(TYPED_SETS)
    for name in names:
        if name not in TYPED_SETS:
            raise ConfigError(f"unknown test-set type {name!r}; known: {', '.join(TYPED_SETS)}")
    lexicons = Lexicons.load(config.lexicons)
    sentences = list(corpus_io.read_tagged_corpus(args.input))
    import os

    os.makedirs(args.out_dir, exist_ok=True)
    counts = {}
    outputs = []
    for name in names:
        op_id = TYPED_SETS[name]
        pairs = generate_typed_testset(iter(sentences), op_id, args.n, config, lexicons)
        out_path = os.path.join(args.out_dir, f"{name}.tsv")
        corpus_io.write_parallel(pairs, out_path)
        corpus_io.write_edit_logs((p.edits for p in pairs), out_path + ".edits.jsonl")
        outputs.append(out_path)
        counts[name] = len(pairs)
    manifest = _manifest(
        "make-testsets",
        start,
        seed=config.seed,
        config_hash=config_hash(config),
        inputs=[str(args.input)],
        outputs=outputs,
        counts={"per_type": counts, "n_requested": args.n},
    )
    manifest.write(manifest_path(outputs[0] if outputs else args.out_dir))
    _emit(manifest.to_json_obj(), args.pretty)
    return 0


# ---------------------------------------------------------------------------
# score


def _aligned(path_a, path_b, label_a, label_b):
    lines_a = corpus_io.read_text_lines(path_a)
    lines_b = corpus_io.read_text_lines(path_b)
    if len(lines_a) != len(lines_b):
        raise FormatError(
            f"{label_a} has {len(lines_a)} lines but {label_b} has {len(lines_b)}"
        )
    return lines_a, lines_b


def cmd_score_gleu(args) -> int:
    start = time.monotonic()
    source_lines = corpus_io.read_text_lines(args.source)
    reference_lines, _ = _aligned(args.reference, args.source, "reference", "source")
    if args.hypothesis == "identity":
        hypothesis_lines = source_lines
    else:
        hypothesis_lines, _ = _aligned(args.hypothesis, args.source, "hypothesis", "source")
    triples = (
        (surfaces(tokenize(s)), surfaces(tokenize(r)), surfaces(tokenize(h)))
        for s, r, h in zip(source_lines, reference_lines, hypothesis_lines)
    )
    try:
        report = gleu.gleu_corpus(triples, max_n=args.max_n, sentence_average=args.sentence_average)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    out = report.to_json_obj()
    out["version"] = __version__
    out["wall_time_s"] = round(time.monotonic() - start, 6)
    _emit(out, args.pretty)
    return 0


def cmd_score_span(args) -> int:
    start = time.monotonic()
    entries = list(corpus_io.read_m2(args.gold))
    if args.hypothesis == "identity":
        hypothesis_tokens = [list(e.source_tokens) for e in entries]
    else:
        hypothesis_lines = corpus_io.read_text_lines(args.hypothesis)
        if len(hypothesis_lines) != len(entries):
            raise FormatError(
                f"gold has {len(entries)} entries but hypothesis has {len(hypothesis_lines)} lines"
            )
        hypothesis_tokens = [surfaces(tokenize(line)) for line in hypothesis_lines]
    stream = (
        (*spans.from_m2_entry(entry), hyp)
        for entry, hyp in zip(entries, hypothesis_tokens)
    )
    score = spans.score_corpus_spans(stream)
    out = score.to_json_obj()
    out["sentences"] = len(entries)
    out["version"] = __version__
    out["wall_time_s"] = round(time.monotonic() - start, 6)
    _emit(out, args.pretty)
    return 0


# ---------------------------------------------------------------------------
# m2 convert


def cmd_m2_convert(args) -> int:
    start = time.monotonic()
    if args.to == "m2":
        pairs = list(corpus_io.read_parallel(args.input))
        entries = [
            spans.pair_to_m2_entry(surfaces(tokenize(source)), surfaces(tokenize(target)))
            for source, target in pairs
        ]
        n = corpus_io.write_m2(entries, args.output)
    else:
        from .tokenizer import default_spacing, detokenize

        entries = list(corpus_io.read_m2(args.input))
        rows = []
        for entry in entries:
            source_tokens, gold = spans.from_m2_entry(entry)
            corrected = spans.apply_edit_spans(source_tokens, gold)
            rows.append(
                (
                    detokenize(source_tokens, default_spacing(source_tokens)),
                    detokenize(corrected, default_spacing(corrected)),
                )
            )
        n = corpus_io.write_parallel(rows, args.output)
    manifest = _manifest(
        "m2-convert",
        start,
        inputs=[str(args.input)],
        outputs=[str(args.output)],
        counts={"entries": n},
    )
    manifest.write(manifest_path(args.output))
    _emit(manifest.to_json_obj(), args.pretty)
    return 0


# ---------------------------------------------------------------------------
# stats


def cmd_stats(args) -> int:
    start = time.monotonic()
    pairs = list(corpus_io.read_parallel(args.input))
    edits_path = args.edits or str(args.input) + ".edits.jsonl"
    logs = list(corpus_io.read_edit_logs(edits_path))
    if len(logs) != len(pairs):
        raise FormatError(
            f"pairs file has {len(pairs)} lines but edit log has {len(logs)} entries"
        )
    per_op = {}
    total_edits = 0
    for log in logs:
        for record in log.records:
            per_op[record.op_id] = per_op.get(record.op_id, 0) + 1
            total_edits += 1
    ratios = [len(source) / len(target) for source, target in pairs if target]
    report = {
        "pairs": len(pairs),
        "identity_pairs": sum(1 for source, target in pairs if source == target),
        "mean_edits": (total_edits / len(logs)) if logs else 0.0,
        "per_op": {op: per_op[op] for op in ALL_OPS if op in per_op},
        "length_ratio_min": min(ratios) if ratios else None,
        "length_ratio_mean": (sum(ratios) / len(ratios)) if ratios else None,
        "length_ratio_max": max(ratios) if ratios else None,
        "version": __version__,
        "wall_time_s": round(time.monotonic() - start, 6),
    }
    _emit(report, args.pretty)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gecpipe",
        description="Synthetic-error generation and GEC evaluation pipeline.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="noise config JSON file")
    common.add_argument("--seed", type=int, default=None, help="override config seed")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--pretty", action="store_true", help="human-readable report")
    decode = common.add_mutually_exclusive_group()
    decode.add_argument("--strict", dest="lenient", action="store_false", default=False,
                        help="abort on undecodable input lines (default)")
    decode.add_argument("--lenient", dest="lenient", action="store_true",
                        help="skip undecodable input lines")

    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("preprocess", parents=[common], help="filter a clean corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--rules", help="filter rules JSON file")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("noise", parents=[common], help="corrupt a tagged corpus into parallel pairs")
    p.add_argument("--input", required=True, help="tagged corpus")
    p.add_argument("--output", required=True, help="parallel pairs TSV")
    p.add_argument("--edit-log", help="sidecar JSONL path (default <output>.edits.jsonl)")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("split", parents=[common], help="partition pairs into train/valid/test")
    p.add_argument("--input", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--valid", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--n-valid", type=int, default=2000)
    p.add_argument("--n-test", type=int, default=4000)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("make-testsets", parents=[common], help="one test set per error type")
    p.add_argument("--input", required=True, help="tagged corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n", type=int, default=100, help="pairs per type")
    p.add_argument("--types", help=f"comma-separated subset of: {', '.join(TYPED_SETS)}")
    p.set_defaults(func=cmd_make_testsets)

    score = sub.add_parser("score", help="score a hypothesis").add_subparsers(
        dest="metric", required=True
    )
    p = score.add_parser("gleu", parents=[common])
    p.add_argument("--source", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--hypothesis", required=True, help="file path or 'identity'")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--sentence-average", action="store_true",
                   help="mean of sentence scores instead of micro-average")
    p.set_defaults(func=cmd_score_gleu)

    p = score.add_parser("span", parents=[common])
    p.add_argument("--gold", required=True, help="gold edits in M2 format")
    p.add_argument("--hypothesis", required=True, help="file path or 'identity'")
    p.set_defaults(func=cmd_score_span)

    m2 = sub.add_parser("m2", help="M2 conversions").add_subparsers(dest="m2cmd", required=True)
    p = m2.add_parser("convert", parents=[common])
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--to", choices=("m2", "pairs"), default="m2")
    p.set_defaults(func=cmd_m2_convert)

    p = sub.add_parser("stats", parents=[common], help="summarize a generated pairs file")
    p.add_argument("--input", required=True, help="parallel pairs TSV")
    p.add_argument("--edits", help="sidecar JSONL (default <input>.edits.jsonl)")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GecPipeError as e:
        print(f"gecpipe: error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"gecpipe: error: {e}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
