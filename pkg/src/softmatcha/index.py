"""Positional inverted index in CSR layout, and the match-set algebra.

The index stores one flat ``positions`` array holding every corpus position
exactly once, grouped by word-id and ascending within each group, plus an
``offsets`` array of length L+1 delimiting the groups.  Matching a softened
pattern is pure integer work: union the posting lists accepted at each
pattern position, then intersect the unions after shifting each by its
pattern offset.

The on-disk format ("SMIX") is little-endian:

    magic "SMIX" | u32 version=1 | u64 n_tokens | u64 n_words | u64 doc_count
    | u8 lowercase | u8 unicode_normalization | u8 token_rule
    | n_words x (u32 byte_length + UTF-8 word)
    | (n_words+1) x u64 offsets | n_tokens x u64 positions
    | doc_count x u64 doc_offsets

Every count and CSR invariant is validated on load before the index is
returned.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

import numpy as np

from .text import Normalizer, TokenizedCorpus, Vocabulary

__all__ = [
    "IndexFormatError",
    "IndexTruncatedError",
    "IndexIntegrityError",
    "InvertedIndex",
    "MatchSet",
    "StoredIndex",
    "build_index",
    "soft_postings",
    "shift_intersect",
    "save_index",
    "load_index",
]

_MAGIC = b"SMIX"
_VERSION = 1
_UNICODE_CODES = {"none": 0, "nfkc": 1}
_TOKEN_RULE_CODES = {"whitespace": 0, "pretokenized": 1}
_UNICODE_NAMES = {v: k for k, v in _UNICODE_CODES.items()}
_TOKEN_RULE_NAMES = {v: k for k, v in _TOKEN_RULE_CODES.items()}


class IndexFormatError(ValueError):
    """Bad magic bytes, unsupported version, or trailing garbage."""


class IndexTruncatedError(ValueError):
    """The file ended before the declared arrays were complete."""


class IndexIntegrityError(ValueError):
    """The declared arrays violate a CSR or document-offset invariant."""


@dataclass
class InvertedIndex:
    """CSR-layout map from word-id to its sorted corpus positions."""

    offsets: np.ndarray  # int64, length n_words + 1
    positions: np.ndarray  # int32 or int64, length n_tokens

    @property
    def n_words(self) -> int:
        return int(self.offsets.shape[0]) - 1

    @property
    def n_tokens(self) -> int:
        return int(self.positions.shape[0])

    def postings(self, word_id: int) -> np.ndarray:
        """Sorted positions of ``word_id`` (a view, do not mutate)."""
        return self.positions[self.offsets[word_id] : self.offsets[word_id + 1]]

    def posting_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def validate(self) -> None:
        """Check all CSR invariants; raises :class:`IndexIntegrityError`."""
        n = self.n_tokens
        if self.offsets.shape[0] < 1 or self.offsets[0] != 0:
            raise IndexIntegrityError("offsets must start at 0")
        if self.offsets[-1] != n:
            raise IndexIntegrityError(
                f"offsets end at {int(self.offsets[-1])}, expected {n}"
            )
        if np.any(np.diff(self.offsets) < 0):
            raise IndexIntegrityError("offsets must be non-decreasing")
        if n:
            if self.positions.min() < 0 or self.positions.max() >= n:
                raise IndexIntegrityError("position out of range")
            # Strictly increasing within each group: the only allowed
            # decreases in the flat array are at group boundaries.
            decreases = np.flatnonzero(np.diff(self.positions.astype(np.int64)) <= 0) + 1
            if not np.all(np.isin(decreases, self.offsets[1:-1])):
                raise IndexIntegrityError("posting list not strictly increasing")
            seen = np.bincount(self.positions, minlength=n)
            if not np.all(seen == 1):
                raise IndexIntegrityError("positions are not a permutation of 0..N-1")

    def reconstruct_tokens(self) -> np.ndarray:
        """Invert the CSR permutation back into the corpus token stream."""
        tokens = np.empty(self.n_tokens, dtype=np.int32)
        word_of_slot = np.repeat(
            np.arange(self.n_words, dtype=np.int32), self.posting_sizes()
        )
        tokens[self.positions] = word_of_slot
        return tokens


def _narrow(positions: np.ndarray) -> np.ndarray:
    # 64-bit in the file format; narrowed in memory for desk-size corpora.
    if positions.size and positions.max() <= np.iinfo(np.int32).max:
        return positions.astype(np.int32)
    if positions.size == 0:
        return positions.astype(np.int32)
    return positions.astype(np.int64)


def build_index(corpus: TokenizedCorpus, n_words: int | None = None) -> InvertedIndex:
    """Build the inverted index in one counting pass plus one stable sort.

    A stable argsort of the token array groups positions by word-id while
    preserving ascending order within each group, which is exactly the CSR
    ``positions`` layout.
    """
    tokens = corpus.tokens
    n = tokens.shape[0]
    if n_words is None:
        n_words = int(tokens.max()) + 1 if n else 0
    counts = np.bincount(tokens, minlength=n_words) if n else np.zeros(n_words, np.int64)
    offsets = np.zeros(n_words + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    positions = _narrow(np.argsort(tokens, kind="stable"))
    return InvertedIndex(offsets=offsets, positions=positions)


@dataclass
class MatchSet:
    """Start positions of all windows matching a soft pattern.

    ``k_total`` is the combined size of the soft posting lists that were
    intersected (the candidate count governing match cost).  ``scores`` is
    filled by the search layer with the per-token cosine scores of each
    matched window.
    """

    starts: np.ndarray  # int64, ascending
    n: int
    k_total: int
    scores: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.starts.shape[0])


def soft_postings(sp, idx: InvertedIndex) -> list[np.ndarray]:
    """Union the posting lists accepted at each pattern position.

    Posting lists of distinct words are disjoint, so the union is a sort of
    their concatenation; the stable sort exploits the presorted runs.
    Returns one ascending, duplicate-free array per pattern position.
    """
    unions: list[np.ndarray] = []
    for k in range(len(sp.entries)):
        ids = sp.word_ids(k)
        if ids.size and ids.max() >= idx.n_words:
            raise ValueError("soft pattern refers to a word-id outside the index")
        parts = [p for p in (idx.postings(int(v)) for v in ids) if p.size]
        if not parts:
            unions.append(np.empty(0, dtype=idx.positions.dtype))
        elif len(parts) == 1:
            unions.append(parts[0])
        else:
            unions.append(np.sort(np.concatenate(parts), kind="stable"))
    return unions


def shift_intersect(
    postings: list[np.ndarray], doc_offsets: np.ndarray
) -> MatchSet:
    """Intersect shifted soft posting lists into window start positions.

    A window starting at ``i`` matches when ``i + k`` appears in
    ``postings[k]`` for every pattern position ``k``; windows crossing a
    document boundary are dropped.  Lists are consumed smallest-first and
    membership is tested by binary search, so the cost is
    O(smallest * log(largest)) after the initial shift.
    """
    n = len(postings)
    if n < 1:
        raise ValueError("need at least one posting list")
    k_total = int(sum(p.shape[0] for p in postings))
    order = sorted(range(n), key=lambda k: postings[k].shape[0])
    first = order[0]
    starts = postings[first].astype(np.int64) - first
    if first != 0:
        starts = starts[starts >= 0]
    for k in order[1:]:
        if starts.size == 0:
            break
        arr = postings[k]
        wanted = starts + k
        at = np.searchsorted(arr, wanted)
        at[at == arr.shape[0]] = 0  # out-of-range probes can never match
        starts = starts[arr[at] == wanted]
    if n > 1 and doc_offsets.shape[0] > 1 and starts.size:
        first_doc = np.searchsorted(doc_offsets, starts, side="right")
        last_doc = np.searchsorted(doc_offsets, starts + (n - 1), side="right")
        starts = starts[first_doc == last_doc]
    return MatchSet(starts=starts, n=n, k_total=k_total)


@dataclass
class StoredIndex:
    """Everything persisted alongside the index proper."""

    index: InvertedIndex
    vocab: Vocabulary
    doc_offsets: np.ndarray
    normalizer: Normalizer


def save_index(
    index: InvertedIndex,
    vocab: Vocabulary,
    doc_offsets: np.ndarray,
    sink: str | Path | BinaryIO,
    normalizer: Normalizer | None = None,
) -> None:
    """Write the SMIX binary format (see module docstring)."""
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            save_index(index, vocab, doc_offsets, fh, normalizer)
        return
    if normalizer is None:
        normalizer = Normalizer()
    if index.n_words != len(vocab):
        raise ValueError("index and vocabulary disagree on word count")
    sink.write(
        struct.pack(
            "<4sIQQQ3B",
            _MAGIC,
            _VERSION,
            index.n_tokens,
            index.n_words,
            int(doc_offsets.shape[0]),
            int(normalizer.lowercase),
            _UNICODE_CODES[normalizer.unicode_normalization],
            _TOKEN_RULE_CODES[normalizer.token_rule],
        )
    )
    for word in vocab.words:
        data = word.encode("utf-8")
        sink.write(struct.pack("<I", len(data)))
        sink.write(data)
    sink.write(index.offsets.astype("<u8").tobytes())
    sink.write(index.positions.astype("<u8").tobytes())
    sink.write(np.asarray(doc_offsets).astype("<u8").tobytes())


def load_index(source: str | Path | BinaryIO) -> StoredIndex:
    """Read and fully validate a SMIX file.

    Raises :class:`IndexFormatError` for bad magic/version or trailing data,
    :class:`IndexTruncatedError` for short reads, and
    :class:`IndexIntegrityError` when a declared invariant fails.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return load_index(fh)
    data = source.read()
    cur = 0

    def take(count: int, what: str) -> bytes:
        nonlocal cur
        if cur + count > len(data):
            raise IndexTruncatedError(f"file ends inside {what}")
        out = data[cur : cur + count]
        cur += count
        return out

    magic, version = struct.unpack("<4sI", take(8, "header"))
    if magic != _MAGIC:
        raise IndexFormatError(f"bad magic {magic!r}, expected {_MAGIC!r}")
    if version != _VERSION:
        raise IndexFormatError(f"unsupported version {version}")
    n_tokens, n_words, doc_count = struct.unpack("<QQQ", take(24, "header"))
    lowercase, uni_code, rule_code = struct.unpack("<3B", take(3, "header"))
    if uni_code not in _UNICODE_NAMES or rule_code not in _TOKEN_RULE_NAMES:
        raise IndexFormatError("unknown normalizer code")
    normalizer = Normalizer(
        lowercase=bool(lowercase),
        unicode_normalization=_UNICODE_NAMES[uni_code],
        token_rule=_TOKEN_RULE_NAMES[rule_code],
    )

    words = []
    for _ in range(n_words):
        (length,) = struct.unpack("<I", take(4, "vocabulary"))
        words.append(take(length, "vocabulary").decode("utf-8", errors="replace"))
    vocab = Vocabulary(words)
    if len(vocab) != n_words:
        raise IndexIntegrityError("vocabulary contains duplicate words")

    offsets = np.frombuffer(
        take(8 * (n_words + 1), "offsets array"), dtype="<u8"
    ).astype(np.int64)
    positions = np.frombuffer(
        take(8 * n_tokens, "positions array"), dtype="<u8"
    ).astype(np.int64)
    doc_offsets = np.frombuffer(
        take(8 * doc_count, "doc_offsets array"), dtype="<u8"
    ).astype(np.int64)
    if cur != len(data):
        raise IndexFormatError(f"{len(data) - cur} bytes of trailing data")

    index = InvertedIndex(offsets=offsets, positions=_narrow(positions))
    try:
        index.validate()
    except IndexIntegrityError:
        raise
    if doc_count:
        if doc_offsets[0] != 0:
            raise IndexIntegrityError("first document must start at position 0")
        if np.any(np.diff(doc_offsets) < 0):
            raise IndexIntegrityError("doc_offsets must be non-decreasing")
        if doc_offsets[-1] > n_tokens:
            raise IndexIntegrityError("doc_offsets exceed corpus length")
    elif n_tokens:
        raise IndexIntegrityError("tokens present but no documents")
    return StoredIndex(
        index=index, vocab=vocab, doc_offsets=doc_offsets, normalizer=normalizer
    )
