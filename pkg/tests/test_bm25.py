import math

import numpy as np
import pytest

from spankey.bm25 import (
    Bm25Params,
    InvertedIndex,
    bm25_score,
    bm25_topk,
    build_inverted_index,
    idf,
    idf_ent,
    load_index,
    save_index,
    tokenize,
)
from spankey.errors import (
    EmptyIndexError,
    InvalidKError,
    NoTokensError,
    UnknownPassageError,
)


def naive_bm25_topk(docs, params, question, k):
    """Independent oracle: re-tokenize every document, no postings lists."""
    query_terms = tokenize(question)
    doc_terms = {pid: tokenize(text) for pid, text in docs}
    n = len(docs)
    avgdl = sum(len(t) for t in doc_terms.values()) / n
    scores = {}
    for pid, terms in doc_terms.items():
        dl = len(terms)
        score = 0.0
        for term in query_terms:
            tf = terms.count(term)
            if tf == 0:
                continue
            n_t = sum(1 for other in doc_terms.values() if term in other)
            term_idf = math.log((n - n_t + 0.5) / (n_t + 0.5))
            score += term_idf * (tf / (tf + params.k1 * (1 - params.b + params.b * dl / avgdl)))
        scores[pid] = score
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


class TestTokenize:
    def test_lowercase_split(self):
        assert tokenize("Inside Job") == ["inside", "job"]

    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_runs(self):
        assert tokenize("Ted-Howard's") == ["ted", "howard", "s"]

    def test_digits_kept(self):
        assert tokenize("born in 1901!") == ["born", "in", "1901"]

    def test_unicode_letters(self):
        assert tokenize("Köln—Bonn") == ["köln", "bonn"]

    def test_underscore_splits(self):
        assert tokenize("a_b") == ["a", "b"]


class TestParams:
    def test_defaults(self):
        params = Bm25Params()
        assert params.k1 == 0.9
        assert params.b == 0.4

    def test_validation(self):
        with pytest.raises(ValueError):
            Bm25Params(k1=-0.1)
        with pytest.raises(ValueError):
            Bm25Params(b=1.5)


class TestBuild:
    def test_counts_and_avgdl(self):
        index = build_inverted_index([("d1", "a b c"), ("d2", "a a")])
        assert index.doc_count == 2
        assert index.doc_len == {"d1": 3, "d2": 2}
        assert index.avgdl == 2.5
        assert index.postings["a"] == [("d1", 1), ("d2", 2)]

    def test_postings_sorted_by_passage_id(self):
        index = build_inverted_index([("z", "x"), ("a", "x"), ("m", "x")])
        assert index.postings["x"] == [("a", 1), ("m", 1), ("z", 1)]

    def test_duplicate_doc_rejected(self):
        with pytest.raises(ValueError):
            build_inverted_index([("d", "a"), ("d", "b")])


class TestIdf:
    def test_term_in_one_of_three(self):
        index = build_inverted_index([("d1", "apple pie"), ("d2", "banana"), ("d3", "cherry")])
        assert idf(index, "apple") == pytest.approx(math.log(2.5 / 1.5), abs=1e-9)
        # ~ 0.51083

    def test_term_in_all_three_goes_negative(self):
        index = build_inverted_index([("d1", "x a"), ("d2", "x b"), ("d3", "x c")])
        assert idf(index, "x") == pytest.approx(math.log(0.5 / 3.5), abs=1e-9)
        # ~ -1.94591; negative IDF is legal and kept

    def test_absent_term_uses_zero_df(self):
        index = build_inverted_index([("d1", "something")])
        assert idf(index, "missing") == pytest.approx(math.log(1.5 / 0.5), abs=1e-9)

    def test_empty_index(self):
        with pytest.raises(EmptyIndexError):
            idf(InvertedIndex(), "x")

    def test_monotone_decreasing_in_df(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = int(rng.integers(2, 50))
            docs = [(f"d{i}", "filler") for i in range(n)]
            index = build_inverted_index(docs)
            values = []
            for n_t in range(0, n + 1):
                # Inject document frequency directly via a synthetic posting list.
                index.postings["term"] = [(f"d{i}", 1) for i in range(n_t)]
                values.append(idf(index, "term"))
            assert all(a > b for a, b in zip(values, values[1:]))


class TestScore:
    def test_hand_computed_single_doc(self):
        index = build_inverted_index([("d1", "a a b")])
        score = bm25_score(index, Bm25Params(), ["a"], "d1")
        # tf = 2, dl = avgdl = 3, idf = ln(0.5/1.5) = -ln 3, weight 2/2.9.
        assert score == pytest.approx(-math.log(3) * 2 / 2.9, abs=1e-9)

    def test_absent_term_contributes_zero(self):
        index = build_inverted_index([("d1", "a a b"), ("d2", "c")])
        with_term = bm25_score(index, Bm25Params(), ["a"], "d1")
        with_extra = bm25_score(index, Bm25Params(), ["a", "zzz"], "d1")
        assert with_extra == with_term

    def test_empty_query_scores_zero(self):
        index = build_inverted_index([("d1", "a b")])
        assert bm25_score(index, Bm25Params(), [], "d1") == 0.0

    def test_unknown_passage(self):
        index = build_inverted_index([("d1", "a")])
        with pytest.raises(UnknownPassageError):
            bm25_score(index, Bm25Params(), ["a"], "nope")

    def test_repeated_query_term_counts_twice(self):
        index = build_inverted_index([("d1", "a b"), ("d2", "c d")])
        once = bm25_score(index, Bm25Params(), ["a"], "d1")
        twice = bm25_score(index, Bm25Params(), ["a", "a"], "d1")
        assert twice == pytest.approx(2 * once, rel=1e-12)

    def test_tf_monotone_when_idf_positive(self):
        # Same doc length, growing tf, term rare enough for positive IDF.
        params = Bm25Params()
        docs = [("d1", "t x x x"), ("d2", "t t x x"), ("d3", "t t t x")]
        filler = [(f"f{i}", "y y y y") for i in range(10)]
        index = build_inverted_index(docs + filler)
        scores = [bm25_score(index, params, ["t"], pid) for pid, _ in docs]
        assert scores[0] < scores[1] < scores[2]


class TestTopk:
    def test_two_doc_corpus_negative_idf_ranks_low_tf_first(self):
        # "x" appears in both docs, so its IDF is ln(0.5/2.5) < 0; the higher
        # tf weight then makes the score more negative, putting d1 on top.
        docs = [("d1", "x y"), ("d2", "x x")]
        index = build_inverted_index(docs)
        ranked = bm25_topk(index, Bm25Params(), "x", 2)
        assert [pid for pid, _ in ranked] == ["d1", "d2"]
        assert ranked == naive_bm25_topk(docs, Bm25Params(), "x", 2)

    def test_tf_saturation_orders_when_idf_positive(self):
        # With enough non-matching docs the term's IDF is positive and the
        # doc with higher tf wins.
        docs = [("d1", "x y"), ("d2", "x x"), ("d3", "y z"), ("d4", "z w"), ("d5", "w v")]
        index = build_inverted_index(docs)
        ranked = bm25_topk(index, Bm25Params(), "x", 2)
        assert [pid for pid, _ in ranked] == ["d2", "d1"]

    def test_out_of_vocabulary_query_ranks_by_passage_id(self):
        index = build_inverted_index([("b", "x"), ("a", "y"), ("c", "z")])
        ranked = bm25_topk(index, Bm25Params(), "unseen words", 3)
        assert ranked == [("a", 0.0), ("b", 0.0), ("c", 0.0)]

    def test_k_truncates(self):
        index = build_inverted_index([("d1", "x"), ("d2", "x")])
        assert len(bm25_topk(index, Bm25Params(), "x", 1)) == 1

    def test_invalid_k(self):
        index = build_inverted_index([("d1", "x")])
        with pytest.raises(InvalidKError):
            bm25_topk(index, Bm25Params(), "x", 0)

    def test_matches_oracle_on_random_corpora(self):
        rng = np.random.default_rng(77)
        vocab = [f"w{i}" for i in range(30)]
        for _ in range(20):
            n_docs = int(rng.integers(1, 80))
            docs = [(f"d{i:03d}", " ".join(rng.choice(vocab, size=rng.integers(1, 20))))
                    for i in range(n_docs)]
            index = build_inverted_index(docs)
            question = " ".join(rng.choice(vocab, size=rng.integers(1, 6)))
            k = int(rng.integers(1, n_docs + 1))
            assert bm25_topk(index, Bm25Params(), question, k) == \
                naive_bm25_topk(docs, Bm25Params(), question, k)


class TestIdfEnt:
    def test_injected_values_take_max(self):
        index = build_inverted_index([("d1", "anything")])
        injected = {"inside": 5.8, "job": 6.0}
        value = idf_ent(index, "Inside Job", idf_fn=lambda t: injected[t])
        assert value == 6.0

    def test_single_token_is_identity(self):
        index = build_inverted_index([("d1", "leeds is a city"), ("d2", "other text")])
        assert idf_ent(index, "Leeds") == idf(index, "leeds")

    def test_punctuation_only_surface(self):
        index = build_inverted_index([("d1", "x")])
        with pytest.raises(NoTokensError):
            idf_ent(index, "—")

    def test_max_law_over_random_surfaces(self):
        rng = np.random.default_rng(13)
        vocab = [f"w{i}" for i in range(40)]
        docs = [(f"d{i}", " ".join(rng.choice(vocab, size=12))) for i in range(50)]
        index = build_inverted_index(docs)
        for _ in range(300):
            tokens = list(rng.choice(vocab, size=rng.integers(1, 6)))
            surface = " ".join(tokens)
            value = idf_ent(index, surface)
            assert all(value >= idf(index, t) for t in tokens)
            assert any(value == idf(index, t) for t in tokens)


class TestSidecar:
    def test_round_trip(self, tmp_path):
        docs = [("d1", "a b c a"), ("d2", "b d"), ("d3", "e")]
        index = build_inverted_index(docs)
        path = tmp_path / "bm25.json"
        save_index(index, path)
        loaded = load_index(path)
        assert loaded.doc_count == index.doc_count
        assert loaded.avgdl == index.avgdl
        assert loaded.doc_len == index.doc_len
        assert loaded.postings == index.postings

    def test_rejects_foreign_payload(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text('{"format": "something-else", "version": 1}')
        with pytest.raises(ValueError):
            load_index(path)
