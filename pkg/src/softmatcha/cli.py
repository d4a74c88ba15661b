"""grep-like command line interface.

Subcommands build index files, search them with KWIC output, rank documents
with soft-BM25, and benchmark queries.  Exit codes follow the grep
convention: 0 when at least one match was found, 1 when none were, 2 on any
error.  ``--json`` emits one JSON object per match followed by a trailing
stats object, one per line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import report
from .bm25 import Bm25Params, score_documents
from .embeddings import DEFAULT_ALPHA, load_embeddings
from .engine import SearchEngine, SearchRequest
from .index import build_index, load_index, save_index
from .oracle import brute_force_match
from .text import Normalizer, TokenizedCorpus, tokenize_corpus

__all__ = ["main"]

_thread_limiter = None  # keeps the BLAS thread cap alive for the process


def _apply_thread_cap() -> None:
    global _thread_limiter
    value = os.environ.get("SOFTMATCHA_THREADS")
    if not value:
        return
    try:
        limit = max(1, int(value))
    except ValueError:
        raise SystemExit(f"SOFTMATCHA_THREADS must be an integer, got {value!r}")
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover - optional dependency
        return
    _thread_limiter = threadpool_limits(limits=limit)


def _normalizer_from_args(args: argparse.Namespace) -> Normalizer:
    return Normalizer(
        lowercase=not args.no_lowercase,
        unicode_normalization=args.unicode_norm,
        token_rule="pretokenized" if args.pretokenized else "whitespace",
    )


def cmd_index(args: argparse.Namespace) -> int:
    out = Path(args.out_path)
    if out.exists() and not args.force:
        raise CliError(f"{out} already exists; pass --force to overwrite")
    norm = _normalizer_from_args(args)
    started = time.perf_counter()
    with open(args.corpus_path, "r", encoding="utf-8", errors="replace") as fh:
        corpus, vocab = tokenize_corpus(
            fh, norm, doc_mode=args.docs, source_name=Path(args.corpus_path).stem
        )
    index = build_index(corpus, n_words=len(vocab))
    save_index(index, vocab, corpus.doc_offsets, out, normalizer=norm)
    elapsed = time.perf_counter() - started
    print(
        f"indexed {index.n_tokens} tokens, {index.n_words} words, "
        f"{corpus.doc_count} documents in {elapsed:.2f}s -> {out}"
    )
    return 0


def _load_engine(args: argparse.Namespace) -> SearchEngine:
    return SearchEngine.load(args.index_path, args.embeddings_path)


def _format_match(m) -> str:
    scores = ", ".join(f"{s:.2f}" for s in m.scores)
    return f"{m.doc_id}:{m.start_offset}  {m.left} [{' '.join(m.tokens)}] {m.right}  ({scores})"


def cmd_search(args: argparse.Namespace) -> int:
    engine = _load_engine(args)
    response = engine.search(
        SearchRequest(
            query=args.query,
            alpha=args.alpha,
            limit=args.limit,
            context_window=args.context,
        )
    )
    stats = {
        "total_hits": response.total_hits,
        "oov_words": response.oov_words,
        "n": response.stats.n,
        "k_total": response.stats.k_total,
        "soften_seconds": response.stats.soften_seconds,
        "match_seconds": response.stats.match_seconds,
    }
    if args.json:
        for m in response.matches:
            print(
                json.dumps(
                    {
                        "doc_id": m.doc_id,
                        "start_offset": m.start_offset,
                        "tokens": m.tokens,
                        "scores": m.scores,
                        "min_score": m.min_score,
                        "left": m.left,
                        "right": m.right,
                    },
                    ensure_ascii=False,
                )
            )
        print(json.dumps(stats, ensure_ascii=False))
    else:
        for m in response.matches:
            print(_format_match(m))
        note = f"# hits={response.total_hits} k={stats['k_total']}"
        if response.oov_words:
            note += f" oov={','.join(response.oov_words)}"
        print(note, file=sys.stderr)
    return 0 if response.total_hits > 0 else 1


def cmd_rank(args: argparse.Namespace) -> int:
    engine = _load_engine(args)
    with open(args.patterns_path, "r", encoding="utf-8", errors="replace") as fh:
        patterns = [line.strip() for line in fh if line.strip()]
    if not patterns:
        raise CliError(f"{args.patterns_path} contains no patterns")
    ranking = score_documents(
        patterns, args.alpha, Bm25Params(k1=args.k1, b=args.b), engine
    )
    for doc_id, score in ranking:
        print(json.dumps({"doc_id": doc_id, "score": score}))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    engine = _load_engine(args)
    samples = []
    if args.subsample:
        fractions = sorted({float(f) for f in args.subsample.split(",")})
        for fraction in fractions:
            sub = report.subsample_engine(engine, fraction)
            samples.extend(
                report.run_bench(sub, args.query, args.alpha, args.repeat,
                                 label=f"{fraction:g}")
            )
    else:
        samples = report.run_bench(engine, args.query, args.alpha, args.repeat)
    for row in report.summarize(samples):
        print(
            f"{row['label']}: n_tokens={row['n_tokens']} "
            f"soften={row['soften_seconds']:.6f}s match={row['match_seconds']:.6f}s "
            f"total={row['total_seconds']:.6f}s k={row['k_total']} hits={row['hits']}"
        )
    if args.csv:
        report.write_csv(samples, args.csv)
    if args.plot:
        report.render_figure(samples, args.plot)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, load_config

    config = load_config(args.config_path)
    engine = SearchEngine.load(config.index_path, config.embeddings_path)
    app = create_app(engine, config)
    uvicorn.run(app, host=config.host, port=args.port or config.port)
    return 0


def cmd_oracle_match(args: argparse.Namespace) -> int:
    stored = load_index(args.index_path)
    table = load_embeddings(args.embeddings_path)
    corpus = TokenizedCorpus(
        tokens=stored.index.reconstruct_tokens(),
        doc_offsets=stored.doc_offsets,
    )
    words = stored.normalizer.tokens(args.query)
    if not words:
        raise CliError("query is empty after normalization")
    from .embeddings import check_alpha

    check_alpha(args.alpha)
    starts = brute_force_match(corpus, stored.vocab, table, words, args.alpha)
    shown = starts if args.limit is None else starts[: args.limit]
    for start in shown:
        doc = corpus.doc_of(start)
        offset = start - int(stored.doc_offsets[doc])
        phrase = " ".join(
            stored.vocab.words[t] for t in corpus.tokens[start : start + len(words)]
        )
        print(f"{doc}:{offset}  [{phrase}]")
    print(f"# hits={len(starts)}", file=sys.stderr)
    return 0 if starts else 1


class CliError(Exception):
    """User-facing error reported on stderr with exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softmatcha",
        description="Soft n-gram pattern matching over tokenized corpora.",
    )
    sub = parser.add_subparsers(
        dest="command",
        required=True,
        metavar="{index,search,rank,bench,serve}",
    )

    p = sub.add_parser("index", help="build an index file from a text corpus")
    p.add_argument("corpus_path", help="UTF-8 text, one document per line")
    p.add_argument("out_path", help="output index file")
    p.add_argument("--force", action="store_true", help="overwrite an existing file")
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--unicode-norm", choices=["nfkc", "none"], default="nfkc")
    p.add_argument("--pretokenized", action="store_true",
                   help="input is already tokenized; no further normalization")
    p.add_argument("--docs", choices=["line", "blank"], default="line",
                   help="document boundary rule")
    p.set_defaults(func=cmd_index)

    def add_engine_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("index_path")
        p.add_argument("embeddings_path")

    p = sub.add_parser("search", help="enumerate soft matches with KWIC context")
    add_engine_args(p)
    p.add_argument("query")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA,
                   help="similarity threshold in (0,1]")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--context", type=int, default=10,
                   help="context window in tokens on each side")
    p.add_argument("--json", action="store_true", help="JSON-lines output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("rank", help="rank documents with soft-BM25")
    add_engine_args(p)
    p.add_argument("patterns_path", help="file with one pattern per line")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--k1", type=float, default=1.2)
    p.add_argument("--b", type=float, default=0.75)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("bench", help="time repeated searches")
    add_engine_args(p)
    p.add_argument("query")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--subsample", default=None,
                   help="comma-separated corpus fractions, e.g. 0.001,0.01,0.1,1")
    p.add_argument("--csv", default=None, help="write per-repeat samples as CSV")
    p.add_argument("--plot", default=None, help="render a timing figure to this file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP search service")
    p.add_argument("config_path", help="key=value config file")
    p.add_argument("--port", type=int, default=None, help="override the config port")
    p.set_defaults(func=cmd_serve)

    # Debugging aid: the brute-force reference matcher, same flags as search.
    p = sub.add_parser("oracle-match")
    add_engine_args(p)
    p.add_argument("query")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_oracle_match)

    return parser


def main(argv: list[str] | None = None) -> int:
    _apply_thread_cap()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"softmatcha: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"softmatcha: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
