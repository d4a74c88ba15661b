"""Word embeddings, soft word equivalence, and pattern softening.

Two words are considered soft-equivalent at threshold ``alpha`` when the
cosine similarity of their embeddings is at least ``alpha``.  Softening a
query pattern scans the vocabulary once per pattern word and collects every
word passing that test, together with its cosine score; the scan runs over
the intersection of the corpus vocabulary and the embedding vocabulary
(words outside the corpus can never produce a match).
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO

import numpy as np

from .text import Vocabulary

__all__ = [
    "DEFAULT_ALPHA",
    "EmbeddingLoadError",
    "EmbeddingTable",
    "SoftPattern",
    "PatternSoftener",
    "check_alpha",
    "cosine",
    "load_embeddings",
    "soft_equivalent",
    "soften_pattern",
]

DEFAULT_ALPHA = 0.55


class EmbeddingLoadError(ValueError):
    """Raised for malformed embedding files (bad dimension, empty input)."""


def check_alpha(alpha: float) -> float:
    """Validate a similarity threshold; must lie in (0, 1]."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    return alpha


@dataclass
class EmbeddingTable:
    """Unit-normalized word vectors keyed by word string.

    Rows are stored normalized (float64), so a plain dot product of two rows
    is their cosine similarity.  ``skipped_zero`` counts input rows dropped
    because their vector was all zeros.
    """

    dim: int
    vectors: np.ndarray
    vocab: Vocabulary
    skipped_zero: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("embedding dimension must be >= 1")
        if self.vectors.shape != (len(self.vocab), self.dim):
            raise ValueError("vector matrix shape does not match vocabulary")

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def get(self, word: str) -> np.ndarray | None:
        word_id = self.vocab.get(word)
        return None if word_id is None else self.vectors[word_id]

    @classmethod
    def from_word_vectors(cls, pairs: dict[str, np.ndarray] | list[tuple[str, np.ndarray]]) -> "EmbeddingTable":
        """Build a table from (word, vector) pairs, normalizing each row."""
        items = list(pairs.items()) if isinstance(pairs, dict) else list(pairs)
        if not items:
            raise EmbeddingLoadError("no embedding vectors given")
        dim = len(items[0][1])
        vocab = Vocabulary()
        rows = []
        skipped = 0
        for word, vec in items:
            vec = np.asarray(vec, dtype=np.float64)
            if vec.shape != (dim,):
                raise EmbeddingLoadError(
                    f"word {word!r}: expected {dim} dimensions, got {vec.shape}"
                )
            if word in vocab:
                continue
            norm = np.linalg.norm(vec)
            if norm == 0.0:
                skipped += 1
                continue
            vocab.add(word)
            rows.append(vec / norm)
        if not rows:
            raise EmbeddingLoadError("no usable embedding vectors (all zero?)")
        return cls(dim=dim, vectors=np.vstack(rows), vocab=vocab, skipped_zero=skipped)


def load_embeddings(source: str | Path | BinaryIO) -> EmbeddingTable:
    """Load a word2vec-style text embedding file.

    The format is an optional ``"count dim"`` header line followed by lines
    of ``word v1 ... vD``.  Gzip-compressed input is detected from the magic
    bytes.  Duplicate words keep their first vector; all-zero vectors are
    skipped (counted in ``skipped_zero``); an inconsistent dimension raises
    :class:`EmbeddingLoadError` naming the offending line.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return load_embeddings(fh)

    head = source.read(2)
    source = io.BufferedReader(_Peeked(head, source))  # type: ignore[arg-type]
    if head == b"\x1f\x8b":
        source = gzip.open(source, "rb")  # type: ignore[assignment]
    text = io.TextIOWrapper(source, encoding="utf-8", errors="replace")

    dim: int | None = None
    vocab = Vocabulary()
    rows: list[np.ndarray] = []
    skipped = 0
    for lineno, line in enumerate(text, start=1):
        parts = line.split()
        if not parts:
            continue
        if lineno == 1 and len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
            continue  # header line "count dim"
        word, values = parts[0], parts[1:]
        if dim is None:
            dim = len(values)
            if dim == 0:
                raise EmbeddingLoadError(f"line {lineno}: no vector components")
        elif len(values) != dim:
            raise EmbeddingLoadError(
                f"line {lineno}: expected {dim} dimensions, got {len(values)}"
            )
        try:
            vec = np.array(values, dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingLoadError(f"line {lineno}: {exc}") from None
        if word in vocab:
            continue
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            skipped += 1
            continue
        vocab.add(word)
        rows.append(vec / norm)
    if dim is None or not rows:
        raise EmbeddingLoadError("embedding file contains no vectors")
    return EmbeddingTable(
        dim=dim, vectors=np.vstack(rows), vocab=vocab, skipped_zero=skipped
    )


class _Peeked(io.RawIOBase):
    """Raw stream that replays already-consumed head bytes."""

    def __init__(self, head: bytes, rest: BinaryIO) -> None:
        self._head = head
        self._rest = rest

    def readable(self) -> bool:
        return True

    def readinto(self, b: bytearray) -> int:  # pragma: no cover - io plumbing
        if self._head:
            n = min(len(b), len(self._head))
            b[:n] = self._head[:n]
            self._head = self._head[n:]
            return n
        data = self._rest.read(len(b))
        b[: len(data)] = data
        return len(data)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity of two non-zero vectors, in [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for zero vectors")
    return float(np.dot(a, b) / (na * nb))


def soft_equivalent(v: str, w: str, alpha: float, table: EmbeddingTable) -> bool:
    """Whether two words are soft-equivalent at ``alpha``.

    Comparison is inclusive (a cosine of exactly ``alpha`` matches).  A word
    pair involving a missing embedding is never equivalent.  Comparing a word
    with itself scores exactly 1.0, so the relation is reflexive for any
    ``alpha`` <= 1 regardless of float rounding in normalization.
    """
    alpha = check_alpha(alpha)
    ev = table.get(v)
    ew = table.get(w)
    if ev is None or ew is None:
        return False
    if v == w:
        return True
    return cosine(ev, ew) >= alpha


@dataclass
class SoftPattern:
    """Per pattern position, the vocabulary words accepted at ``alpha``.

    ``entries[k]`` maps corpus word-id to its cosine score against pattern
    word ``k`` (all scores >= ``alpha``, keys ascending).  Stored scores are
    authoritative: consumers reuse them rather than recomputing cosines, so
    float round-off at the threshold boundary cannot flip a decision
    downstream.  ``oov_words`` lists pattern words that have no embedding;
    their entry is empty, which forces an empty match set.
    """

    alpha: float
    pattern_words: list[str]
    entries: list[dict[int, float]]
    oov_words: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def all_oov(self) -> bool:
        """True when no pattern word has an embedding at all."""
        return len(self.oov_words) == len(self.pattern_words) > 0

    def word_ids(self, k: int) -> np.ndarray:
        """Sorted corpus word-ids accepted at pattern position ``k``."""
        return np.fromiter(self.entries[k].keys(), dtype=np.int64)


class PatternSoftener:
    """Reusable vocabulary scanner for one corpus/embedding pairing.

    Precomputes the scan candidates (corpus words that have embeddings) so
    repeated queries pay only one matrix-vector product per pattern word.
    Pure reads after construction; safe for concurrent use.
    """

    def __init__(self, table: EmbeddingTable, corpus_vocab: Vocabulary) -> None:
        self.table = table
        self.corpus_vocab = corpus_vocab
        corpus_ids = []
        emb_rows = []
        for corpus_id, word in enumerate(corpus_vocab.words):
            emb_id = table.vocab.get(word)
            if emb_id is not None:
                corpus_ids.append(corpus_id)
                emb_rows.append(emb_id)
        self.candidate_ids = np.asarray(corpus_ids, dtype=np.int64)
        self.candidate_vectors = table.vectors[emb_rows] if emb_rows else (
            np.empty((0, table.dim), dtype=np.float64)
        )

    def soften(self, pattern_words: list[str], alpha: float) -> SoftPattern:
        alpha = check_alpha(alpha)
        if not pattern_words:
            raise ValueError("cannot soften an empty pattern")
        entries: list[dict[int, float]] = []
        oov: list[str] = []
        for word in pattern_words:
            query = self.table.get(word)
            if query is None:
                oov.append(word)
                entries.append({})
                continue
            scores = self.candidate_vectors @ query
            self_id = self.corpus_vocab.get(word)
            if self_id is not None:
                row = np.searchsorted(self.candidate_ids, self_id)
                if row < len(self.candidate_ids) and self.candidate_ids[row] == self_id:
                    # A word compared with itself scores exactly 1 by
                    # contract; the computed dot may round just below it.
                    scores[row] = 1.0
            accepted = np.flatnonzero(scores >= alpha)
            entries.append(
                {
                    int(self.candidate_ids[i]): float(scores[i])
                    for i in accepted
                }
            )
        return SoftPattern(
            alpha=alpha, pattern_words=list(pattern_words), entries=entries, oov_words=oov
        )


def soften_pattern(
    pattern_words: list[str],
    alpha: float,
    table: EmbeddingTable,
    corpus_vocab: Vocabulary,
) -> SoftPattern:
    """One-shot pattern softening (see :class:`PatternSoftener`)."""
    return PatternSoftener(table, corpus_vocab).soften(pattern_words, alpha)
