"""Text normalization and corpus tokenization.

Turns raw text into a word-id token stream plus a vocabulary, and records
document boundaries (one document per input line by default).  Both outputs
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Normalizer",
    "Vocabulary",
    "TokenizedCorpus",
    "normalize",
    "tokenize_corpus",
]


@dataclass(frozen=True)
class Normalizer:
    """Deterministic, idempotent text normalization policy.

    ``token_rule`` selects between splitting on runs of Unicode whitespace
    ("whitespace") and trusting the input to be already tokenized with
    single spaces ("pretokenized", in which case no case folding or Unicode
    normalization is applied either).
    """

    lowercase: bool = True
    unicode_normalization: str = "nfkc"  # "none" or "nfkc"
    token_rule: str = "whitespace"  # "whitespace" or "pretokenized"

    def __post_init__(self) -> None:
        if self.unicode_normalization not in ("none", "nfkc"):
            raise ValueError(
                f"unknown unicode_normalization {self.unicode_normalization!r}"
            )
        if self.token_rule not in ("whitespace", "pretokenized"):
            raise ValueError(f"unknown token_rule {self.token_rule!r}")

    def apply(self, text: str) -> str:
        return normalize(text, self)

    def tokens(self, text: str) -> list[str]:
        """Normalize and split one piece of text into tokens."""
        # str.split() with no argument splits on any run of Unicode
        # whitespace and drops empty strings, for both token rules.
        return normalize(text, self).split()


def normalize(text: str, norm: Normalizer) -> str:
    """Apply ``norm`` to ``text``; applying it twice equals applying it once."""
    if norm.token_rule == "pretokenized":
        return text
    if norm.unicode_normalization == "nfkc":
        text = unicodedata.normalize("NFKC", text)
    if norm.lowercase:
        text = text.lower()
        if norm.unicode_normalization == "nfkc":
            # Lowercasing can denormalize rare code points; renormalize so
            # the function is a fixpoint of itself.
            text = unicodedata.normalize("NFKC", text)
    return text


class Vocabulary:
    """Bijection between token strings and dense word-ids in [0, L)."""

    __slots__ = ("words", "index")

    def __init__(self, words: Iterable[str] = ()) -> None:
        self.words: list[str] = []
        self.index: dict[str, int] = {}
        for word in words:
            self.add(word)

    def add(self, word: str) -> int:
        """Return the id of ``word``, assigning the next id if unseen."""
        word_id = self.index.get(word)
        if word_id is None:
            word_id = len(self.words)
            self.index[word] = word_id
            self.words.append(word)
        return word_id

    def get(self, word: str) -> int | None:
        return self.index.get(word)

    def __getitem__(self, word_id: int) -> str:
        return self.words[word_id]

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __len__(self) -> int:
        return len(self.words)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self.words == other.words

    def __repr__(self) -> str:
        return f"Vocabulary({len(self)} words)"


@dataclass
class TokenizedCorpus:
    """A corpus as a flat word-id sequence plus document start offsets.

    ``doc_offsets[d]`` is the position of document ``d``'s first token; the
    last document ends at ``n_tokens``.  Offsets are non-decreasing (an
    empty document shares its start with the next document's).
    """

    tokens: np.ndarray
    doc_offsets: np.ndarray
    source_name: str = ""

    @property
    def n_tokens(self) -> int:
        return int(self.tokens.shape[0])

    @property
    def doc_count(self) -> int:
        return int(self.doc_offsets.shape[0])

    def doc_lengths(self) -> np.ndarray:
        ends = np.append(self.doc_offsets[1:], self.n_tokens)
        return ends - self.doc_offsets

    def doc_of(self, position: int) -> int:
        """Document id containing token ``position``."""
        return int(np.searchsorted(self.doc_offsets, position, side="right")) - 1

    def doc_bounds(self, doc_id: int) -> tuple[int, int]:
        start = int(self.doc_offsets[doc_id])
        end = (
            int(self.doc_offsets[doc_id + 1])
            if doc_id + 1 < self.doc_count
            else self.n_tokens
        )
        return start, end


def _documents(lines: Iterable[str], doc_mode: str) -> Iterator[list[str]]:
    """Group an iterable of lines into documents of raw lines."""
    if doc_mode == "line":
        for line in lines:
            yield [line]
    elif doc_mode == "blank":
        buf: list[str] = []
        for line in lines:
            if line.strip():
                buf.append(line)
            elif buf:
                yield buf
                buf = []
        if buf:
            yield buf
    else:
        raise ValueError(f"unknown doc_mode {doc_mode!r}")


def tokenize_corpus(
    lines: Iterable[str],
    norm: Normalizer | None = None,
    doc_mode: str = "line",
    source_name: str = "",
) -> tuple[TokenizedCorpus, Vocabulary]:
    """Tokenize a stream of lines into a corpus and its vocabulary.

    Word-ids are assigned in first-occurrence order.  With ``doc_mode="line"``
    every input line is one document; with ``"blank"`` documents are groups of
    lines separated by blank lines.  An empty stream yields a valid corpus
    with no tokens and no documents.
    """
    if norm is None:
        norm = Normalizer()
    vocab = Vocabulary()
    token_ids: list[int] = []
    doc_offsets: list[int] = []
    for doc_lines in _documents(lines, doc_mode):
        doc_offsets.append(len(token_ids))
        for line in doc_lines:
            token_ids.extend(vocab.add(tok) for tok in norm.tokens(line))
    corpus = TokenizedCorpus(
        tokens=np.asarray(token_ids, dtype=np.int32),
        doc_offsets=np.asarray(doc_offsets, dtype=np.int64),
        source_name=source_name,
    )
    return corpus, vocab
