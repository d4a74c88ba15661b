"""Brute-force reference implementations used to cross-check the engine.

These transcribe the definitions directly: the matcher tests every corpus
window word by word with freshly computed cosines (no posting lists, no
vocabulary-level dedup), and the BM25 oracle counts exact phrase occurrences
with its own arithmetic.  They share no code with the fast paths and are
kept deliberately simple; performance does not matter here.
"""

from __future__ import annotations

import math

import numpy as np

from .embeddings import EmbeddingTable, check_alpha
from .text import TokenizedCorpus, Vocabulary

__all__ = ["brute_force_match", "exact_match", "classical_bm25"]


def brute_force_match(
    corpus: TokenizedCorpus,
    vocab: Vocabulary,
    embeddings: EmbeddingTable,
    pattern_words: list[str],
    alpha: float,
) -> list[int]:
    """All window starts whose tokens are soft-equivalent to the pattern.

    A pattern word without an embedding matches nothing.  A corpus token
    equal to the pattern word scores exactly 1 (reflexivity); otherwise the
    cosine is recomputed from the stored vectors for every corpus position.
    Windows crossing a document boundary are rejected.
    """
    alpha = check_alpha(alpha)
    if not pattern_words:
        raise ValueError("pattern must contain at least one word")
    tokens = corpus.tokens
    n_tok = tokens.shape[0]
    n = len(pattern_words)
    if n > n_tok:
        return []

    # Embedding vector of the token at each corpus position (row of zeros
    # for words without one, marked unusable below).
    emb_row = np.array(
        [embeddings.vocab.get(w) for w in vocab.words], dtype=object
    )
    has_vec = np.array([r is not None for r in emb_row])
    row_ids = np.array([r if r is not None else 0 for r in emb_row], dtype=np.int64)
    pos_vectors = embeddings.vectors[row_ids[tokens]]
    pos_usable = has_vec[tokens]
    pos_norms = np.linalg.norm(pos_vectors, axis=1)

    # position_ok[k][i] <=> pattern word k softly matches the token at i,
    # by a cosine recomputed at position i.
    position_ok = []
    for p_word in pattern_words:
        p_vec = embeddings.get(p_word)
        ok = np.zeros(n_tok, dtype=bool)
        if p_vec is not None:
            p_norm = float(np.linalg.norm(p_vec))
            with np.errstate(invalid="ignore", divide="ignore"):
                cos = (pos_vectors @ p_vec) / (pos_norms * p_norm)
            ok = pos_usable & (cos >= alpha)
            p_id = vocab.get(p_word)
            if p_id is not None:  # same word: equivalent by reflexivity
                ok |= pos_usable & (tokens == p_id)
        position_ok.append(ok)

    checks = [ok.tolist() for ok in position_ok]
    doc_of = (
        np.searchsorted(corpus.doc_offsets, np.arange(n_tok), side="right") - 1
    ).tolist()
    result = []
    for start in range(n_tok - n + 1):
        if all(checks[k][start + k] for k in range(n)):
            if doc_of[start] == doc_of[start + n - 1]:
                result.append(start)
    return result


def exact_match(
    corpus: TokenizedCorpus, vocab: Vocabulary, pattern_words: list[str]
) -> list[int]:
    """Window starts where the pattern occurs by plain string equality."""
    if not pattern_words:
        raise ValueError("pattern must contain at least one word")
    ids = [vocab.get(w) for w in pattern_words]
    if any(i is None for i in ids):
        return []
    tokens = corpus.tokens.tolist()
    n_tok = len(tokens)
    n = len(ids)
    doc_of = (
        np.searchsorted(corpus.doc_offsets, np.arange(n_tok), side="right") - 1
    ).tolist()
    result = []
    for start in range(n_tok - n + 1):
        if tokens[start : start + n] == ids:
            if doc_of[start] == doc_of[start + n - 1]:
                result.append(start)
    return result


def classical_bm25(
    docs: list[list[str]],
    patterns: list[list[str]],
    k1: float = 1.2,
    b: float = 0.75,
) -> list[float]:
    """Textbook Lucene BM25 over exact phrase occurrence counts.

    ``docs`` and ``patterns`` are plain token lists.  Term frequency of a
    pattern in a document is the number of (possibly overlapping) exact
    occurrences of the phrase.
    """
    if not patterns or any(not p for p in patterns):
        raise ValueError("patterns must be non-empty")
    doc_count = len(docs)
    if doc_count < 1:
        raise ValueError("need at least one document")
    avgdl = sum(len(d) for d in docs) / doc_count

    def phrase_count(doc: list[str], phrase: list[str]) -> int:
        count = 0
        for i in range(len(doc) - len(phrase) + 1):
            if doc[i : i + len(phrase)] == phrase:
                count += 1
        return count

    scores = [0.0] * doc_count
    for phrase in patterns:
        tfs = [phrase_count(doc, phrase) for doc in docs]
        df = sum(1 for tf in tfs if tf > 0)
        idf = math.log(1.0 + (doc_count - df + 0.5) / (df + 0.5))
        for d, tf in enumerate(tfs):
            if tf == 0:
                continue
            rel_len = (len(docs[d]) / avgdl) if avgdl > 0 else 0.0
            denom = tf + k1 * (1.0 - b + b * rel_len)
            scores[d] += idf * tf * (k1 + 1.0) / denom
    return scores
