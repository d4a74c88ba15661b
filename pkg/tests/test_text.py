"""Normalization and tokenization contracts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softmatcha.text import Normalizer, Vocabulary, normalize, tokenize_corpus


class TestNormalize:
    def test_case_fold_and_split(self):
        norm = Normalizer()
        corpus, vocab = tokenize_corpus(["Jazz  Pianist"], norm)
        assert [vocab.words[t] for t in corpus.tokens] == ["jazz", "pianist"]

    def test_empty_string(self):
        assert normalize("", Normalizer()) == ""

    def test_all_unicode_whitespace_splits(self):
        corpus, vocab = tokenize_corpus(["a\tb\nc"], Normalizer())
        assert [vocab.words[t] for t in corpus.tokens] == ["a", "b", "c"]

    def test_nfkc_applied(self):
        # Fullwidth letters and the ligature fold to plain ASCII.
        assert normalize("Ｗｉｋｉ ﬁle", Normalizer()) == "wiki file"

    def test_pretokenized_mode_is_identity(self):
        norm = Normalizer(token_rule="pretokenized")
        assert normalize("Jazz ﬁle", norm) == "Jazz ﬁle"
        assert norm.tokens("Jazz ﬁle") == ["Jazz", "ﬁle"]

    @given(st.text(max_size=200))
    @settings(max_examples=300, deadline=None)
    def test_idempotent(self, text):
        norm = Normalizer()
        once = normalize(text, norm)
        assert normalize(once, norm) == once

    def test_invalid_options_rejected(self):
        with pytest.raises(ValueError):
            Normalizer(unicode_normalization="nfd")
        with pytest.raises(ValueError):
            Normalizer(token_rule="regex")


class TestVocabulary:
    def test_bijection(self):
        vocab = Vocabulary(["b", "a", "b", "c"])
        assert vocab.words == ["b", "a", "c"]
        for i, word in enumerate(vocab.words):
            assert vocab.index[word] == i
        assert len(vocab) == 3

    def test_first_occurrence_order(self):
        vocab = Vocabulary()
        assert vocab.add("x") == 0
        assert vocab.add("y") == 1
        assert vocab.add("x") == 0


class TestTokenizeCorpus:
    def test_toy_positions(self):
        corpus, vocab = tokenize_corpus(
            ["when a jazz pianist plays funk with a blues singer"]
        )
        assert corpus.n_tokens == 10
        a = vocab.get("a")
        # 1-based positions 2 and 8.
        assert np.flatnonzero(corpus.tokens == a).tolist() == [1, 7]

    def test_empty_stream(self):
        corpus, vocab = tokenize_corpus([])
        assert corpus.n_tokens == 0
        assert len(vocab) == 0
        assert corpus.doc_count == 0

    def test_single_empty_document(self):
        corpus, vocab = tokenize_corpus([""])
        assert corpus.n_tokens == 0
        assert corpus.doc_count == 1
        assert corpus.doc_offsets.tolist() == [0]

    def test_single_type_corpus(self):
        corpus, vocab = tokenize_corpus(["x x x"])
        assert len(vocab) == 1
        assert corpus.n_tokens == 3

    def test_doc_offsets_line_mode(self):
        corpus, vocab = tokenize_corpus(["a b", "", "c d e"])
        assert corpus.doc_offsets.tolist() == [0, 2, 2]
        assert corpus.doc_lengths().tolist() == [2, 0, 3]
        assert corpus.doc_of(0) == 0
        assert corpus.doc_of(2) == 2

    def test_doc_offsets_blank_mode(self):
        corpus, vocab = tokenize_corpus(
            ["a b", "c", "", "", "d e"], doc_mode="blank"
        )
        assert corpus.doc_offsets.tolist() == [0, 3]
        assert corpus.doc_lengths().tolist() == [3, 2]

    def test_round_trip_words(self):
        lines = ["The  Cat", "sat on THE mat"]
        norm = Normalizer()
        corpus, vocab = tokenize_corpus(lines, norm)
        flat = []
        for line in lines:
            flat.extend(norm.tokens(line))
        assert [vocab.words[t] for t in corpus.tokens] == flat

    def test_doc_lengths_sum_to_total(self):
        rng = np.random.default_rng(7)
        lines = [
            " ".join(f"w{rng.integers(0, 20)}" for _ in range(rng.integers(0, 15)))
            for _ in range(50)
        ]
        corpus, _ = tokenize_corpus(lines)
        assert int(corpus.doc_lengths().sum()) == corpus.n_tokens
