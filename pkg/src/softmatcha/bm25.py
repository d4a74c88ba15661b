"""Document ranking with soft term statistics (soft-BM25).

Term frequency is softened: each matched window contributes the product of
its per-word cosine scores, summed over all windows in the document.
Document frequency is softened the same way, counting documents with at
least one soft occurrence of the pattern.  The combining formula is the
standard Lucene BM25 with its documented defaults (k1=1.2, b=0.75,
idf = ln(1 + (N - df + 0.5) / (df + 0.5))).

At alpha=1.0 (and embeddings with no duplicate directions) every soft
occurrence is an exact occurrence scoring exactly 1, so all statistics and
scores reduce to classical phrase BM25.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SearchEngine

__all__ = [
    "Bm25Params",
    "DocSoftStats",
    "collect_stats",
    "soft_tf",
    "soft_idf",
    "score_documents",
]


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


@dataclass
class DocSoftStats:
    """Soft corpus statistics for one query (a list of patterns).

    ``tf[p, d]`` is the soft term frequency of pattern ``p`` in document
    ``d``; ``df[p]`` counts documents with at least one soft occurrence.
    """

    tf: np.ndarray  # (patterns, documents) float64
    df: np.ndarray  # (patterns,) int64
    doc_lengths: np.ndarray
    avg_doc_length: float


def _pattern_stats(
    engine: SearchEngine, pattern_words: list[str], alpha: float
) -> tuple[np.ndarray, int]:
    """Soft tf per document and soft df for a single tokenized pattern."""
    doc_count = engine.doc_count
    tf = np.zeros(doc_count, dtype=np.float64)
    if not pattern_words:
        raise ValueError("pattern must contain at least one word")
    sp, matches, _ = engine.match(pattern_words, alpha)
    starts = matches.starts
    if starts.size == 0:
        return tf, 0
    # Per-window score product, via one score lookup table per position.
    products = np.ones(starts.size, dtype=np.float64)
    n_words = len(engine.vocab)
    for k, entry in enumerate(sp.entries):
        lookup = np.zeros(n_words, dtype=np.float64)
        if entry:
            ids = np.fromiter(entry.keys(), dtype=np.int64)
            lookup[ids] = np.fromiter(entry.values(), dtype=np.float64)
        products *= lookup[engine.tokens[starts + k]]
    doc_ids = np.searchsorted(engine.doc_offsets, starts, side="right") - 1
    np.add.at(tf, doc_ids, products)
    return tf, int(np.unique(doc_ids).size)


def collect_stats(
    engine: SearchEngine, patterns: list[str], alpha: float
) -> DocSoftStats:
    """Compute soft tf/df for every pattern of a query."""
    if not patterns:
        raise ValueError("need at least one pattern")
    doc_count = engine.doc_count
    tf = np.zeros((len(patterns), doc_count), dtype=np.float64)
    df = np.zeros(len(patterns), dtype=np.int64)
    for p, pattern in enumerate(patterns):
        words = engine.normalizer.tokens(pattern)
        tf[p], df[p] = _pattern_stats(engine, words, alpha)
    lengths = engine.doc_lengths().astype(np.float64)
    avgdl = float(lengths.mean()) if doc_count else 0.0
    return DocSoftStats(tf=tf, df=df, doc_lengths=lengths, avg_doc_length=avgdl)


def soft_tf(doc_id: int, pattern: str, alpha: float, engine: SearchEngine) -> float:
    """Soft term frequency of ``pattern`` in one document."""
    words = engine.normalizer.tokens(pattern)
    tf, _ = _pattern_stats(engine, words, alpha)
    return float(tf[doc_id])


def soft_idf(pattern: str, alpha: float, engine: SearchEngine) -> float:
    """Lucene-style idf over the soft document frequency of ``pattern``."""
    if engine.doc_count < 1:
        raise ValueError("idf requires at least one document")
    words = engine.normalizer.tokens(pattern)
    _, df = _pattern_stats(engine, words, alpha)
    return _idf(df, engine.doc_count)


def _idf(df: float | np.ndarray, doc_count: int) -> float | np.ndarray:
    return np.log(1.0 + (doc_count - df + 0.5) / (df + 0.5))


def score_documents(
    patterns: list[str],
    alpha: float,
    params: Bm25Params,
    engine: SearchEngine,
) -> list[tuple[int, float]]:
    """Rank all documents by the summed soft-BM25 score of the patterns.

    Returns every document as ``(doc_id, score)`` sorted by descending
    score, ties broken by ascending doc_id.  Documents without any soft
    occurrence of a pattern receive zero contribution from it.
    """
    stats = collect_stats(engine, patterns, alpha)
    doc_count = engine.doc_count
    if stats.avg_doc_length > 0:
        rel_len = stats.doc_lengths / stats.avg_doc_length
    else:
        rel_len = np.zeros(doc_count, dtype=np.float64)
    norm = params.k1 * (1.0 - params.b + params.b * rel_len)
    scores = np.zeros(doc_count, dtype=np.float64)
    for p in range(len(patterns)):
        tf = stats.tf[p]
        idf = _idf(float(stats.df[p]), doc_count)
        denom = tf + norm
        with np.errstate(invalid="ignore", divide="ignore"):
            contrib = np.where(tf > 0, idf * tf * (params.k1 + 1.0) / denom, 0.0)
        scores += contrib
    order = np.lexsort((np.arange(doc_count), -scores))
    return [(int(d), float(scores[d])) for d in order]
