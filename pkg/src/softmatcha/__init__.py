"""Soft n-gram pattern matching over tokenized corpora.

Enumerates every corpus window whose tokens are embedding-similar (cosine
>= alpha) to a query pattern, using a positional inverted index so the
per-query soft computation touches only the vocabulary, never the corpus.
Ships a library API, a grep-like CLI, an HTTP service, and a soft-BM25
document ranker.
"""

from .bm25 import Bm25Params, score_documents, soft_idf, soft_tf
from .embeddings import (
    DEFAULT_ALPHA,
    EmbeddingLoadError,
    EmbeddingTable,
    SoftPattern,
    cosine,
    load_embeddings,
    soft_equivalent,
    soften_pattern,
)
from .engine import Match, SearchEngine, SearchRequest, SearchResponse
from .index import (
    IndexFormatError,
    IndexIntegrityError,
    IndexTruncatedError,
    InvertedIndex,
    MatchSet,
    build_index,
    load_index,
    save_index,
    shift_intersect,
    soft_postings,
)
from .text import Normalizer, TokenizedCorpus, Vocabulary, normalize, tokenize_corpus

__version__ = "0.1.0"

__all__ = [
    "Bm25Params",
    "DEFAULT_ALPHA",
    "EmbeddingLoadError",
    "EmbeddingTable",
    "IndexFormatError",
    "IndexIntegrityError",
    "IndexTruncatedError",
    "InvertedIndex",
    "Match",
    "MatchSet",
    "Normalizer",
    "SearchEngine",
    "SearchRequest",
    "SearchResponse",
    "SoftPattern",
    "TokenizedCorpus",
    "Vocabulary",
    "build_index",
    "cosine",
    "load_embeddings",
    "load_index",
    "normalize",
    "save_index",
    "score_documents",
    "shift_intersect",
    "soft_equivalent",
    "soft_idf",
    "soft_postings",
    "soft_tf",
    "soften_pattern",
    "tokenize_corpus",
]
