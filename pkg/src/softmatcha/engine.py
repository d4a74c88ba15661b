"""Search façade: query -> soften -> match -> KWIC contexts.

A :class:`SearchEngine` bundles one immutable corpus index with one
embedding table.  Queries are normalized with the same normalizer the index
was built with, so surface forms can never silently diverge between
indexing and search.  All state is read-only after construction; ``search``
is reentrant.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embeddings import (
    DEFAULT_ALPHA,
    EmbeddingTable,
    PatternSoftener,
    SoftPattern,
    check_alpha,
    load_embeddings,
)
from .index import (
    InvertedIndex,
    MatchSet,
    build_index,
    load_index,
    shift_intersect,
    soft_postings,
)
from .text import Normalizer, TokenizedCorpus, Vocabulary

__all__ = [
    "SearchRequest",
    "SearchStats",
    "Match",
    "SearchResponse",
    "SearchEngine",
    "kwic_context",
]


@dataclass
class SearchRequest:
    query: str
    alpha: float = DEFAULT_ALPHA
    limit: int | None = None
    offset: int = 0
    context_window: int = 10

    def validate(self) -> None:
        check_alpha(self.alpha)
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be >= 1 when present")
        if self.offset < 0:
            raise ValueError("offset must be >= 0")
        if self.context_window < 0:
            raise ValueError("context_window must be >= 0")


@dataclass
class SearchStats:
    n: int
    k_total: int
    soften_seconds: float
    match_seconds: float


@dataclass
class Match:
    """One matched window with its display context.

    ``start_offset`` is the token offset of the window inside its document;
    ``scores`` holds the cosine of each matched token against its pattern
    word, and ``min_score`` their minimum (a display ranking key).
    """

    doc_id: int
    start_offset: int
    tokens: list[str]
    scores: list[float]
    min_score: float
    left: str
    right: str


@dataclass
class SearchResponse:
    matches: list[Match]
    total_hits: int
    oov_words: list[str]
    stats: SearchStats


def kwic_context(
    tokens: np.ndarray,
    doc_offsets: np.ndarray,
    vocab: Vocabulary,
    start: int,
    n: int,
    window: int,
) -> tuple[str, str, str]:
    """Left/match/right strings around a window, clipped to its document."""
    doc = int(np.searchsorted(doc_offsets, start, side="right")) - 1
    doc_start = int(doc_offsets[doc])
    doc_end = (
        int(doc_offsets[doc + 1]) if doc + 1 < doc_offsets.shape[0] else tokens.shape[0]
    )
    lo = max(doc_start, start - window)
    hi = min(doc_end, start + n + window)
    words = vocab.words
    left = " ".join(words[t] for t in tokens[lo:start])
    mid = " ".join(words[t] for t in tokens[start : start + n])
    right = " ".join(words[t] for t in tokens[start + n : hi])
    return left, mid, right


class SearchEngine:
    """Immutable index + embeddings, exposing complete-enumeration search."""

    def __init__(
        self,
        index: InvertedIndex,
        vocab: Vocabulary,
        doc_offsets: np.ndarray,
        embeddings: EmbeddingTable,
        normalizer: Normalizer | None = None,
        name: str = "",
    ) -> None:
        if index.n_words != len(vocab):
            raise ValueError("index and vocabulary disagree on word count")
        self.index = index
        self.vocab = vocab
        self.doc_offsets = np.asarray(doc_offsets, dtype=np.int64)
        self.embeddings = embeddings
        self.normalizer = normalizer or Normalizer()
        self.name = name
        self.tokens = index.reconstruct_tokens()
        self.softener = PatternSoftener(embeddings, vocab)

    @classmethod
    def from_corpus(
        cls,
        corpus: TokenizedCorpus,
        vocab: Vocabulary,
        embeddings: EmbeddingTable,
        normalizer: Normalizer | None = None,
    ) -> "SearchEngine":
        return cls(
            index=build_index(corpus, n_words=len(vocab)),
            vocab=vocab,
            doc_offsets=corpus.doc_offsets,
            embeddings=embeddings,
            normalizer=normalizer,
            name=corpus.source_name,
        )

    @classmethod
    def load(cls, index_path: str | Path, embeddings_path: str | Path) -> "SearchEngine":
        stored = load_index(index_path)
        table = load_embeddings(embeddings_path)
        return cls(
            index=stored.index,
            vocab=stored.vocab,
            doc_offsets=stored.doc_offsets,
            embeddings=table,
            normalizer=stored.normalizer,
            name=Path(index_path).stem,
        )

    @property
    def n_tokens(self) -> int:
        return self.index.n_tokens

    @property
    def doc_count(self) -> int:
        return int(self.doc_offsets.shape[0])

    def doc_lengths(self) -> np.ndarray:
        ends = np.append(self.doc_offsets[1:], self.n_tokens)
        return ends - self.doc_offsets

    def match(
        self, pattern_words: list[str], alpha: float
    ) -> tuple[SoftPattern, MatchSet, SearchStats]:
        """Run the softening and matching steps for normalized pattern words."""
        t0 = time.perf_counter()
        sp = self.softener.soften(pattern_words, alpha)
        t1 = time.perf_counter()
        unions = soft_postings(sp, self.index)
        matches = shift_intersect(unions, self.doc_offsets)
        t2 = time.perf_counter()
        stats = SearchStats(
            n=len(pattern_words),
            k_total=matches.k_total,
            soften_seconds=t1 - t0,
            match_seconds=t2 - t1,
        )
        return sp, matches, stats

    def search(self, req: SearchRequest) -> SearchResponse:
        """Enumerate every matching window, returning a paginated response.

        ``limit``/``offset`` truncate the returned matches but never change
        ``total_hits``.  A query whose words all lack embeddings yields an
        empty response with ``oov_words`` populated rather than an error.
        """
        req.validate()
        words = self.normalizer.tokens(req.query)
        if not words:
            raise ValueError("query is empty after normalization")
        sp, matches, stats = self.match(words, req.alpha)
        total = len(matches)
        stop = None if req.limit is None else req.offset + req.limit
        shown = matches.starts[req.offset : stop]
        out: list[Match] = []
        n = len(words)
        for start in shown.tolist():
            doc = int(np.searchsorted(self.doc_offsets, start, side="right")) - 1
            window_ids = self.tokens[start : start + n]
            token_words = [self.vocab.words[t] for t in window_ids]
            token_scores = [sp.entries[k][int(t)] for k, t in enumerate(window_ids)]
            left, _, right = kwic_context(
                self.tokens, self.doc_offsets, self.vocab, start, n, req.context_window
            )
            out.append(
                Match(
                    doc_id=doc,
                    start_offset=start - int(self.doc_offsets[doc]),
                    tokens=token_words,
                    scores=token_scores,
                    min_score=min(token_scores),
                    left=left,
                    right=right,
                )
            )
        return SearchResponse(
            matches=out,
            total_hits=total,
            oov_words=list(sp.oov_words),
            stats=stats,
        )
