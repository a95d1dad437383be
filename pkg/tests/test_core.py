import numpy as np
import pytest

from spankey.core import (
    ConditioningMode,
    EntitySpan,
    EntityType,
    EvalRecord,
    Passage,
    Query,
    RetrievalKey,
    expected_key_count,
    validate_corpus,
)


class TestValidateCorpus:
    def test_duplicate_ids_reported(self):
        passages = [Passage("a", "T", "body"), Passage("a", "T", "body")]
        report = validate_corpus(passages)
        assert report.duplicate_ids == ["a"]
        assert report.issue_count == 1

    def test_empty_input_is_clean(self):
        report = validate_corpus([])
        assert report.ok
        assert report.passage_count == 0
        assert report.issue_count == 0

    def test_empty_title_counted_not_flagged(self):
        passages = [Passage("a", "T", "x"), Passage("b", "", "y"), Passage("c", "U", "z")]
        report = validate_corpus(passages)
        assert report.ok
        assert report.issue_count == 0
        assert report.empty_title_count == 1

    def test_empty_body_reported(self):
        report = validate_corpus([Passage("a", "T", "")])
        assert report.empty_body_ids == ["a"]
        assert not report.ok


class TestEntitySpan:
    def test_from_text_derives_surface(self):
        span = EntitySpan.from_text("Bob was here", 0, 3, EntityType.PER)
        assert span.surface == "Bob"
        assert span.check_against("Bob was here")

    def test_rejects_inverted_offsets(self):
        with pytest.raises(ValueError):
            EntitySpan(5, 2, "xyz")

    def test_rejects_negative_start(self):
        with pytest.raises(ValueError):
            EntitySpan(-1, 2, "xyz")

    def test_from_text_rejects_out_of_bounds(self):
        with pytest.raises(ValueError):
            EntitySpan.from_text("short", 0, 10)

    def test_surface_must_match_length(self):
        with pytest.raises(ValueError):
            EntitySpan(0, 3, "toolong")

    def test_offsets_are_code_points_not_bytes(self):
        text = "héllo wörld"
        span = EntitySpan.from_text(text, 6, 11)
        assert span.surface == "wörld"


class TestVectorTypes:
    def test_retrieval_key_requires_unit_norm(self):
        with pytest.raises(ValueError):
            RetrievalKey("k1", "p1", EntitySpan(0, 1, "x"), np.array([3.0, 4.0]))

    def test_retrieval_key_accepts_unit_vector(self):
        key = RetrievalKey("k1", "p1", EntitySpan(0, 1, "x"),
                           np.array([0.6, 0.8], dtype=np.float32))
        assert key.vector.dtype == np.float32
        assert not key.is_title_key

    def test_title_key_flag(self):
        span = EntitySpan(0, 5, "Leeds", EntityType.TITLE)
        key = RetrievalKey("p4#t", "p4", span, np.array([1.0, 0.0]))
        assert key.is_title_key

    def test_query_entity_modes_require_span(self):
        vec = np.array([1.0, 0.0])
        with pytest.raises(ValueError):
            Query("q1", "who?", None, ConditioningMode.ENTITY_IN_FULL_CONTEXT, vec)
        with pytest.raises(ValueError):
            Query("q1", "who?", None, ConditioningMode.ENTITY_ALONE, vec)
        # Full-span mode has no span requirement.
        Query("q1", "who?", None, ConditioningMode.FULL_SPAN, vec)


class TestEvalRecord:
    def test_requires_gold_answers(self):
        with pytest.raises(ValueError):
            EvalRecord("q1", "P19", "Where?", "P19", gold_answers=())

    def test_holds_fields(self):
        record = EvalRecord("q1", "P19", "Where was X born?", "P19", ("Leeds",))
        assert record.extracted_entity is None


class TestKeyCountLaw:
    @pytest.mark.parametrize("spans,title,expected", [
        (2, "Some Title", 3),
        (0, "", 0),
        (0, "Some Title", 1),
        (5, "", 5),
    ])
    def test_expected_key_count(self, spans, title, expected):
        assert expected_key_count(spans, title) == expected
