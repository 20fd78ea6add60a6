import random
from collections import Counter

import numpy as np
import pytest

from augtree.core import derive_stream
from augtree.errors import EmbeddingError
from augtree.token_level import (
    EmbeddingTable,
    cosine,
    knn,
    load_embeddings,
    random_word_delete,
    random_word_swap,
    synonym_replace,
)

from conftest import DATA_DIR, make_sentence


@pytest.fixture(scope="module")
def mini_table():
    return load_embeddings((DATA_DIR / "mini.vec").read_text(encoding="utf-8"))


def table_from(vectors: dict) -> EmbeddingTable:
    words = list(vectors)
    return EmbeddingTable(words, np.array([vectors[w] for w in words], dtype=np.float64))


def test_load_embeddings_basic():
    table = load_embeddings("2 3\nfoo 1 0 0\nbar 0 1 0\n")
    assert len(table) == 2 and table.dim == 3
    assert "foo" in table and "baz" not in table


def test_load_embeddings_row_length_error_names_line():
    with pytest.raises(EmbeddingError, match="line 3"):
        load_embeddings("2 3\nfoo 1 0 0\nbar 0 1\n")


def test_load_embeddings_empty_file():
    with pytest.raises(EmbeddingError):
        load_embeddings("")


def test_load_embeddings_zero_norm_rejected():
    with pytest.raises(EmbeddingError, match="zero-norm"):
        load_embeddings("1 2\nnull 0 0\n")


def test_load_embeddings_duplicates_last_wins():
    table = load_embeddings("3 2\nfoo 1 0\nfoo 0 1\nbar 1 1\n")
    assert len(table) == 2
    assert table.duplicates == 1
    assert list(table.vector("foo")) == [0.0, 1.0]


def test_cosine_values():
    assert cosine([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == pytest.approx(1.0)
    assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert cosine([1.0, 0.0], [0.8, 0.6]) == pytest.approx(0.8)
    with pytest.raises(EmbeddingError):
        cosine([1.0, 0.0], [1.0, 0.0, 0.0])
    with pytest.raises(EmbeddingError):
        cosine([0.0, 0.0], [1.0, 0.0])


def test_knn_golden_three_words():
    table = table_from({"a": (1, 0), "b": (0.8, 0.6), "c": (0, 1)})
    assert knn(table, "a", 1) == [("b", pytest.approx(0.8))]


def test_knn_k_clamped_to_table():
    table = table_from({"a": (1, 0), "b": (0.8, 0.6), "c": (0, 1)})
    assert len(knn(table, "a", 10)) == 2


def test_knn_ties_broken_lexicographically():
    table = table_from({"q": (1, 0), "zz": (1, 1), "aa": (1, 1)})
    names = [w for w, _ in knn(table, "q", 2)]
    assert names == ["aa", "zz"]


def test_knn_missing_word():
    table = table_from({"a": (1, 0)})
    with pytest.raises(KeyError):
        knn(table, "nope", 1)


def brute_force_knn(table, word, k):
    # independent scan: repeated max extraction over per-pair cosines
    sims = {w: cosine(table.vector(word), table.vector(w))
            for w in table.words if w != word}
    out = []
    while sims and len(out) < k:
        best = min(sims, key=lambda w: (-sims[w], w))
        out.append((best, sims.pop(best)))
    return out


def test_knn_matches_brute_force_scan():
    rng = np.random.default_rng(5)
    words = [f"w{i}" for i in range(60)] + ["dupA", "dupB"]
    matrix = rng.normal(size=(62, 8))
    matrix[-1] = matrix[-2]  # exact tie pair
    table = EmbeddingTable(words, matrix)
    for word in words[:10] + ["dupA"]:
        expected = brute_force_knn(table, word, 7)
        got = knn(table, word, 7)
        assert [w for w, _ in got] == [w for w, _ in expected]
        assert np.allclose([s for _, s in got], [s for _, s in expected], atol=1e-10)


# ---------------------------------------------------------------------------
# Synonym replacement


def test_synonym_replace_demo(demo_sentence, mini_table):
    out = synonym_replace(demo_sentence, mini_table, 1.0, 1, derive_stream(0, 0, 0))
    assert out.text() == "I wrote him a message"
    assert [t.head for t in out.tokens] == [t.head for t in demo_sentence.tokens]
    assert [t.deprel for t in out.tokens] == [t.deprel for t in demo_sentence.tokens]
    assert [t.upos for t in out.tokens] == [t.upos for t in demo_sentence.tokens]


def test_synonym_replace_punctuation_only_returns_none(mini_table):
    sent = make_sentence([
        ("!", "!", "PUNCT", 2, "punct"),
        ("?", "?", "PUNCT", 0, "root"),
    ])
    assert synonym_replace(sent, mini_table, 1.0, 3, derive_stream(0, 0, 0)) is None


def test_synonym_replace_oov_skipped(mini_table):
    sent = make_sentence([("qqqq", "q", "NOUN", 0, "root")])
    assert synonym_replace(sent, mini_table, 1.0, 3, derive_stream(0, 0, 0)) is None


def test_synonym_replace_toy_knn(mini_table):
    sent = make_sentence([("cat", "cat", "NOUN", 0, "root")])
    out = synonym_replace(sent, mini_table, 1.0, 1, derive_stream(0, 0, 0))
    assert out.forms() == ["dog"]


def test_synonym_replace_preserves_label_multiset(demo_sentence, mini_table):
    for seed in range(25):
        out = synonym_replace(demo_sentence, mini_table, 0.7, 2, derive_stream(seed, 0, 0))
        if out is None:
            continue
        key = lambda s: Counter((t.upos, t.head, t.deprel) for t in s.tokens)
        assert key(out) == key(demo_sentence)


# ---------------------------------------------------------------------------
# Random word deletion / swapping


def test_rwd_deletes_and_clears_tree(demo_sentence):
    for seed in range(40):
        out = random_word_delete(demo_sentence, 0.3, derive_stream(seed, 0, 0))
        assert 1 <= len(out) < len(demo_sentence)
        assert [t.id for t in out.tokens] == list(range(1, len(out) + 1))
        assert all(t.head is None and t.deprel == "_" for t in out.tokens)
        source_forms = demo_sentence.forms()
        remaining = iter(source_forms)
        for tok in out.tokens:  # survivor order preserved
            assert tok.form in source_forms
            while next(remaining) != tok.form:
                pass


def test_rwd_probability_one_leaves_single_survivor(demo_sentence):
    survivors = set()
    for seed in range(60):
        out = random_word_delete(demo_sentence, 1.0, derive_stream(seed, 0, 0))
        assert len(out) == 1
        survivors.add(out.tokens[0].form)
    assert len(survivors) > 1  # survivor drawn uniformly, not fixed


def test_rwd_single_token_sentence_yields_nothing():
    sent = make_sentence([("hi", "hi", "INTJ", 0, "root")])
    assert random_word_delete(sent, 1.0, derive_stream(0, 0, 0)) is None


def test_rws_two_tokens_forced_swap():
    sent = make_sentence([
        ("good", "good", "ADJ", 2, "amod"),
        ("day", "day", "NOUN", 0, "root"),
    ])
    out = random_word_swap(sent, 0.1, derive_stream(0, 0, 0))
    assert out.forms() == ["day", "good"]
    assert [t.upos for t in out.tokens] == ["NOUN", "ADJ"]  # records move whole
    assert all(t.head is None and t.deprel == "_" for t in out.tokens)


def test_rws_preserves_token_multiset(demo_sentence):
    for seed in range(40):
        out = random_word_swap(demo_sentence, 0.4, derive_stream(seed, 0, 0))
        assert Counter((t.form, t.upos, t.lemma) for t in out.tokens) == \
            Counter((t.form, t.upos, t.lemma) for t in demo_sentence.tokens)
        assert [t.id for t in out.tokens] == list(range(1, len(out) + 1))


def test_rws_pair_count_rounds_up(demo_sentence):
    # p=0.1 on 5 tokens: ceil(0.5) = 1 pair, so exactly 2 positions move
    for seed in range(30):
        out = random_word_swap(demo_sentence, 0.1, derive_stream(seed, 0, 0))
        moved = sum(1 for a, b in zip(out.forms(), demo_sentence.forms()) if a != b)
        assert moved == 2
