"""Benchmark runs with CSV output and rendered timing figures.

A benchmark repeats one query against an engine (optionally against prefix
subsamples of its corpus, to expose how match time scales with corpus size)
and reports per-repeat soften/match timings plus the candidate count K.
Results can be written as CSV and rendered with matplotlib alongside it.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable

from .engine import SearchEngine
from .index import build_index
from .text import TokenizedCorpus

__all__ = [
    "BenchSample",
    "run_bench",
    "subsample_engine",
    "summarize",
    "write_csv",
    "render_figure",
]


@dataclass
class BenchSample:
    label: str
    n_tokens: int
    repeat: int
    soften_seconds: float
    match_seconds: float
    total_seconds: float
    k_total: int
    hits: int


def run_bench(
    engine: SearchEngine,
    query: str,
    alpha: float,
    repeat: int,
    label: str = "full",
) -> list[BenchSample]:
    """Time ``repeat`` runs of one query; response assembly is excluded."""
    words = engine.normalizer.tokens(query)
    if not words:
        raise ValueError("query is empty after normalization")
    samples = []
    for i in range(repeat):
        _, matches, stats = engine.match(words, alpha)
        samples.append(
            BenchSample(
                label=label,
                n_tokens=engine.n_tokens,
                repeat=i,
                soften_seconds=stats.soften_seconds,
                match_seconds=stats.match_seconds,
                total_seconds=stats.soften_seconds + stats.match_seconds,
                k_total=stats.k_total,
                hits=len(matches),
            )
        )
    return samples


def subsample_engine(engine: SearchEngine, fraction: float) -> SearchEngine:
    """Engine over a prefix of the corpus (same vocabulary id space)."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if fraction == 1.0:
        return engine
    n = int(round(engine.n_tokens * fraction))
    doc_offsets = engine.doc_offsets[engine.doc_offsets < max(n, 1)]
    corpus = TokenizedCorpus(
        tokens=engine.tokens[:n],
        doc_offsets=doc_offsets,
        source_name=f"{engine.name}@{fraction:g}",
    )
    return SearchEngine(
        index=build_index(corpus, n_words=len(engine.vocab)),
        vocab=engine.vocab,
        doc_offsets=corpus.doc_offsets,
        embeddings=engine.embeddings,
        normalizer=engine.normalizer,
        name=corpus.source_name,
    )


def summarize(samples: Iterable[BenchSample]) -> list[dict]:
    """Median timings per label, labels in first-seen order."""
    by_label: dict[str, list[BenchSample]] = {}
    for s in samples:
        by_label.setdefault(s.label, []).append(s)
    out = []
    for label, group in by_label.items():
        out.append(
            {
                "label": label,
                "n_tokens": group[0].n_tokens,
                "repeats": len(group),
                "soften_seconds": statistics.median(s.soften_seconds for s in group),
                "match_seconds": statistics.median(s.match_seconds for s in group),
                "total_seconds": statistics.median(s.total_seconds for s in group),
                "k_total": group[0].k_total,
                "hits": group[0].hits,
            }
        )
    return out


def write_csv(samples: Iterable[BenchSample], path: str | Path) -> None:
    names = [f.name for f in fields(BenchSample)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for s in samples:
            writer.writerow([getattr(s, name) for name in names])


def render_figure(samples: list[BenchSample], path: str | Path) -> None:
    """Render timings to an image file next to the CSV.

    With several corpus sizes this is a log-log size-vs-time curve; for a
    single size it shows the per-repeat samples.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = summarize(samples)
    fig, ax = plt.subplots(figsize=(6, 4))
    if len({r["n_tokens"] for r in rows}) > 1:
        sizes = [r["n_tokens"] for r in rows]
        for key in ("soften_seconds", "match_seconds", "total_seconds"):
            ax.plot(sizes, [max(r[key], 1e-9) for r in rows], marker="o",
                    label=key.replace("_seconds", ""))
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("corpus size (tokens)")
    else:
        reps = [s.repeat for s in samples]
        ax.plot(reps, [s.soften_seconds for s in samples], marker="o", label="soften")
        ax.plot(reps, [s.match_seconds for s in samples], marker="o", label="match")
        ax.plot(reps, [s.total_seconds for s in samples], marker="o", label="total")
        ax.set_xlabel("repeat")
    ax.set_ylabel("seconds")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
