"""Shared fixtures: a tiny genre corpus with hand-built cluster embeddings.

The embeddings place "the/a/this", "jazz/blues/funk", and
"musician/pianist/singer" in three tight clusters (pairwise cosine well
above 0.5) while every other pair of distinct words stays below 0.5, so
soft matching at alpha=0.5 expands each query word to exactly its cluster.
The cluster structure is asserted here by direct cosine computation before
any test relies on it.
"""

from __future__ import annotations

import numpy as np
import pytest

from softmatcha.embeddings import EmbeddingTable, cosine
from softmatcha.text import TokenizedCorpus, Vocabulary, tokenize_corpus

TOY_LINE = "when a jazz pianist plays funk with a blues singer the jazz"

CLUSTERS = [
    ["the", "a", "this"],
    ["jazz", "blues", "funk"],
    ["musician", "pianist", "singer"],
]


def _toy_vectors() -> dict[str, np.ndarray]:
    vecs = {}
    for axis, cluster in enumerate(CLUSTERS):
        for i, word in enumerate(cluster):
            v = np.zeros(5)
            v[axis] = 1.0
            v[4] = (0.0, 0.3, -0.3)[i]
            vecs[word] = v
    vecs["plays"] = np.array([0.0, 0.0, 0.0, 1.0, 0.0])
    vecs["play"] = np.array([0.0, 0.0, 0.0, 1.0, 0.25])
    vecs["when"] = np.array([0.3, 0.0, 0.0, 1.0, 0.0])
    vecs["where"] = np.array([0.3, 0.0, 0.0, 1.0, 0.1])
    vecs["with"] = np.array([0.2, 0.0, 0.0, 1.0, -0.2])
    return vecs


@pytest.fixture(scope="session")
def toy_embeddings() -> EmbeddingTable:
    table = EmbeddingTable.from_word_vectors(_toy_vectors())
    # Verify the intended cluster geometry by direct cosine computation.
    query_words = {"the", "jazz", "musician"}
    for cluster in CLUSTERS:
        for w1 in cluster:
            for w2 in cluster:
                assert cosine(table.get(w1), table.get(w2)) >= 0.5
    for word in table.vocab.words:
        for query in query_words:
            in_same_cluster = any(
                word in c and query in c for c in CLUSTERS
            )
            if not in_same_cluster:
                assert cosine(table.get(word), table.get(query)) < 0.5
    return table


@pytest.fixture(scope="session")
def toy_corpus() -> tuple[TokenizedCorpus, Vocabulary]:
    return tokenize_corpus([TOY_LINE], source_name="toy")


def make_random_instance(
    rng: np.random.Generator,
    max_tokens: int = 10_000,
    max_vocab: int = 200,
    dims: tuple[int, ...] = (4, 8, 16),
) -> tuple[TokenizedCorpus, Vocabulary, EmbeddingTable, list[str]]:
    """Random corpus, random unit embeddings, and a random 1-4 word pattern.

    Roughly 10% of corpus words carry no embedding, the embedding table has
    a few extra words absent from the corpus, and the pattern mixes corpus
    words with occasional corpus-absent or fully unknown words, to exercise
    every out-of-vocabulary path.
    """
    n_types = int(rng.integers(3, max_vocab + 1))
    words = [f"w{i}" for i in range(n_types)]
    n_tokens = int(rng.integers(1, max_tokens + 1))
    token_words = rng.integers(0, n_types, size=n_tokens)

    lines = []
    start = 0
    while start < n_tokens:
        length = int(rng.integers(1, 40))
        lines.append(" ".join(words[t] for t in token_words[start : start + length]))
        start += length
    corpus, vocab = tokenize_corpus(lines, source_name="random")

    dim = int(rng.choice(dims))
    embedded = [w for w in words if rng.random() >= 0.1]
    extra = [f"x{i}" for i in range(int(rng.integers(0, 4)))]
    vectors = rng.normal(size=(len(embedded) + len(extra), dim))
    table = EmbeddingTable.from_word_vectors(
        list(zip(embedded + extra, vectors))
    )

    n_pattern = int(rng.integers(1, 5))
    pattern = []
    for _ in range(n_pattern):
        roll = rng.random()
        if roll < 0.9 or not extra:
            pattern.append(words[int(rng.integers(0, n_types))])
        elif roll < 0.97:
            pattern.append(extra[int(rng.integers(0, len(extra)))])
        else:
            pattern.append("unknown-word")
    return corpus, vocab, table, pattern
