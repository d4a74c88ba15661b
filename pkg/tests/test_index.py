"""CSR index construction, match-set algebra, and the SMIX file format."""

import io

import numpy as np
import pytest

from softmatcha.embeddings import soften_pattern
from softmatcha.index import (
    IndexFormatError,
    IndexIntegrityError,
    IndexTruncatedError,
    build_index,
    load_index,
    save_index,
    shift_intersect,
    soft_postings,
)
from softmatcha.text import Normalizer, tokenize_corpus

from conftest import make_random_instance


def _star(*values):
    return np.asarray(values, dtype=np.int64)


class TestBuildIndex:
    def test_toy_postings(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        idx.validate()
        # 1-based {2,8}, {3,12}, {9} in the worked example.
        assert idx.postings(vocab.get("a")).tolist() == [1, 7]
        assert idx.postings(vocab.get("jazz")).tolist() == [2, 11]
        assert idx.postings(vocab.get("blues")).tolist() == [8]

    def test_empty_corpus(self):
        corpus, vocab = tokenize_corpus([])
        idx = build_index(corpus, n_words=len(vocab))
        idx.validate()
        assert idx.offsets.tolist() == [0]
        assert idx.positions.size == 0

    def test_single_type_conservation(self):
        corpus, vocab = tokenize_corpus(["x x x"])
        idx = build_index(corpus, n_words=len(vocab))
        assert idx.postings(0).tolist() == [0, 1, 2]
        assert int(idx.posting_sizes().sum()) == corpus.n_tokens

    def test_conservation_random(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            corpus, vocab, _, _ = make_random_instance(rng, max_tokens=2000)
            idx = build_index(corpus, n_words=len(vocab))
            idx.validate()
            assert int(idx.posting_sizes().sum()) == corpus.n_tokens

    def test_reconstruct_tokens(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        assert idx.reconstruct_tokens().tolist() == corpus.tokens.tolist()


class TestSoftPostings:
    def test_toy_union(self, toy_corpus, toy_embeddings):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        sp = soften_pattern(["jazz"], 0.5, toy_embeddings, vocab)
        # jazz/funk/blues/jazz at 1-based 3, 6, 9, 12.
        assert soft_postings(sp, idx)[0].tolist() == [2, 5, 8, 11]

    def test_single_word_is_its_posting_list(self, toy_corpus, toy_embeddings):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        sp = soften_pattern(["jazz"], 1.0, toy_embeddings, vocab)
        assert soft_postings(sp, idx)[0].tolist() == idx.postings(
            vocab.get("jazz")
        ).tolist()

    def test_disjoint_merge(self):
        corpus, vocab = tokenize_corpus(["b a b x a"])  # a@{1,4}, b@{0,2}
        idx = build_index(corpus, n_words=len(vocab))

        class FakePattern:
            entries = [{vocab.get("a"): 1.0, vocab.get("b"): 0.9}]

            def word_ids(self, k):
                return np.asarray(sorted(self.entries[k]), dtype=np.int64)

        out = soft_postings(FakePattern(), idx)
        assert out[0].tolist() == [0, 1, 2, 4]

    def test_empty_entry_gives_empty_postings(self, toy_corpus, toy_embeddings):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        sp = soften_pattern(["zzzz"], 0.5, toy_embeddings, vocab)
        assert soft_postings(sp, idx)[0].size == 0


class TestShiftIntersect:
    def test_worked_example(self):
        # 1-based {2,8,11}, {3,6,9,12}, {4,10} -> matches at {2,8}.
        postings = [_star(1, 7, 10), _star(2, 5, 8, 11), _star(3, 9)]
        ms = shift_intersect(postings, _star(0))
        assert ms.starts.tolist() == [1, 7]
        assert ms.k_total == 9

    def test_single_list_passthrough(self):
        ms = shift_intersect([_star(3, 5, 9)], _star(0))
        assert ms.starts.tolist() == [3, 5, 9]

    def test_document_boundary_rejected(self):
        # Window 5..6 straddles the boundary at 6.
        ms = shift_intersect([_star(5), _star(6)], _star(0, 6))
        assert ms.starts.size == 0
        ms2 = shift_intersect([_star(5), _star(6)], _star(0))
        assert ms2.starts.tolist() == [5]

    def test_empty_input_posting(self):
        ms = shift_intersect([_star(1, 2), _star()], _star(0))
        assert ms.starts.size == 0
        assert ms.k_total == 2

    def test_no_posting_lists_rejected(self):
        with pytest.raises(ValueError):
            shift_intersect([], _star(0))

    def test_negative_starts_dropped(self):
        # Position 0 in the second list would imply a window starting at -1.
        ms = shift_intersect([_star(0, 3), _star(0, 4)], _star(0))
        assert ms.starts.tolist() == [3]


class TestSaveLoad:
    def _round_trip(self, corpus, vocab, norm=None):
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, corpus.doc_offsets, buf, normalizer=norm)
        stored = load_index(io.BytesIO(buf.getvalue()))
        return idx, buf.getvalue(), stored

    def test_round_trip_toy(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx, blob, stored = self._round_trip(corpus, vocab)
        assert stored.index.offsets.tolist() == idx.offsets.tolist()
        assert stored.index.positions.tolist() == idx.positions.tolist()
        assert stored.vocab == vocab
        assert stored.doc_offsets.tolist() == corpus.doc_offsets.tolist()
        # Re-serializing what was loaded reproduces the bytes exactly.
        buf2 = io.BytesIO()
        save_index(
            stored.index, stored.vocab, stored.doc_offsets, buf2,
            normalizer=stored.normalizer,
        )
        assert buf2.getvalue() == blob

    def test_normalizer_round_trip(self, toy_corpus):
        corpus, vocab = toy_corpus
        norm = Normalizer(lowercase=False, unicode_normalization="none",
                          token_rule="pretokenized")
        _, _, stored = self._round_trip(corpus, vocab, norm)
        assert stored.normalizer == norm

    def test_bad_magic(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, corpus.doc_offsets, buf)
        data = bytearray(buf.getvalue())
        data[:4] = b"NOPE"
        with pytest.raises(IndexFormatError):
            load_index(io.BytesIO(bytes(data)))

    def test_truncated(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, corpus.doc_offsets, buf)
        with pytest.raises(IndexTruncatedError):
            load_index(io.BytesIO(buf.getvalue()[:-9]))

    def test_trailing_data(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, corpus.doc_offsets, buf)
        with pytest.raises(IndexFormatError, match="trailing"):
            load_index(io.BytesIO(buf.getvalue() + b"xx"))

    def test_corrupt_offsets_detected(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        bad = idx.offsets.copy()
        bad[-1] += 1  # offsets[L] != N
        buf = io.BytesIO()
        save_index(
            type(idx)(offsets=bad, positions=idx.positions),
            vocab, corpus.doc_offsets, buf,
        )
        with pytest.raises(IndexIntegrityError):
            load_index(io.BytesIO(buf.getvalue()))


    def test_unknown_normalizer_code(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, corpus.doc_offsets, buf)
        data = bytearray(buf.getvalue())
        data[34] = 7  # token_rule byte
        with pytest.raises(IndexFormatError, match="normalizer"):
            load_index(io.BytesIO(bytes(data)))

    def test_doc_offsets_must_start_at_zero(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, np.asarray([3], dtype=np.int64), buf)
        with pytest.raises(IndexIntegrityError, match="start at position 0"):
            load_index(io.BytesIO(buf.getvalue()))

    def test_tokens_without_documents(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        buf = io.BytesIO()
        save_index(idx, vocab, np.empty(0, dtype=np.int64), buf)
        with pytest.raises(IndexIntegrityError, match="no documents"):
            load_index(io.BytesIO(buf.getvalue()))

    def test_duplicate_position_detected(self, toy_corpus):
        corpus, vocab = toy_corpus
        idx = build_index(corpus, n_words=len(vocab))
        bad = idx.positions.copy()
        bad[-1] = bad[0]
        buf = io.BytesIO()
        save_index(
            type(idx)(offsets=idx.offsets, positions=bad),
            vocab, corpus.doc_offsets, buf,
        )
        with pytest.raises(IndexIntegrityError):
            load_index(io.BytesIO(buf.getvalue()))
