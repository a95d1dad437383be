import json
import string

import numpy as np
import pytest

from spankey.core import ConditioningMode, EntityType, Passage
from spankey.errors import CorpusFormatError, NoMatchError, TemplateError, UnknownRelationError
from spankey.ingest import (
    QuestionTemplate,
    build_query_record,
    enumerate_keys,
    extract_entity_by_template,
    load_corpus,
    load_ner_annotations,
    load_questions,
    load_templates,
    read_key_manifest,
    write_key_manifest,
)

P19 = QuestionTemplate("P19", "Where was [E] born?")
P50 = QuestionTemplate("P50", "Who is the author of [E]?")


class TestQuestionTemplate:
    def test_requires_exactly_one_placeholder(self):
        with pytest.raises(TemplateError):
            QuestionTemplate("P1", "no placeholder here")
        with pytest.raises(TemplateError):
            QuestionTemplate("P1", "[E] and [E]")

    def test_rejects_bare_placeholder(self):
        with pytest.raises(TemplateError):
            QuestionTemplate("P1", "[E]")

    def test_prefix_suffix(self):
        assert P19.prefix == "Where was "
        assert P19.suffix == " born?"


class TestExtractEntity:
    def test_extracts_person(self):
        span = extract_entity_by_template("Where was Ted Howard born?", P19)
        assert span.surface == "Ted Howard"
        assert (span.start, span.end) == (10, 20)
        assert span.entity_type is EntityType.UNKNOWN

    def test_extracts_work_title(self):
        span = extract_entity_by_template("Who is the author of Inside Job?", P50)
        assert span.surface == "Inside Job"

    def test_no_match_when_suffix_absent(self):
        with pytest.raises(NoMatchError):
            extract_entity_by_template("Where was X educated?", P19)

    def test_no_match_on_empty_question(self):
        with pytest.raises(NoMatchError):
            extract_entity_by_template("", P19)

    def test_no_match_when_capture_would_be_empty(self):
        # Prefix and suffix abut exactly, leaving no room for the entity.
        with pytest.raises(NoMatchError):
            extract_entity_by_template("Where was  born?", P19)

    def test_case_sensitive_literals(self):
        with pytest.raises(NoMatchError):
            extract_entity_by_template("where was Ted Howard born?", P19)

    def test_left_inverse_of_instantiation(self):
        # Template substitution followed by extraction returns the entity
        # exactly, for arbitrary non-empty entity strings.
        rng = np.random.default_rng(101)
        alphabet = string.ascii_letters + string.digits + " '-."
        for _ in range(1000):
            n = int(rng.integers(1, 30))
            entity = "".join(rng.choice(list(alphabet), size=n)).strip()
            if not entity:
                continue
            question = P19.pattern.replace("[E]", entity)
            span = extract_entity_by_template(question, P19)
            assert span.surface == entity


class TestEnumerateKeys:
    def test_spans_plus_title(self):
        passage = Passage("p1", "A Title", "Ted Howard was born in Leeds today.")
        spans = [passage_span(passage, 0, 10, EntityType.PER),
                 passage_span(passage, 23, 28, EntityType.LOC)]
        entries = enumerate_keys(passage, spans)
        assert len(entries) == 3
        assert [e.key_id for e in entries] == ["p1#0", "p1#1", "p1#t"]
        assert entries[-1].kind == "title"
        assert entries[-1].surface == "A Title"
        assert entries[-1].start is None and entries[-1].end is None

    def test_no_spans_empty_title(self):
        passage = Passage("p1", "", "text")
        assert enumerate_keys(passage, []) == []

    def test_no_spans_with_title(self):
        passage = Passage("p1", "T", "text")
        entries = enumerate_keys(passage, [])
        assert len(entries) == 1
        assert entries[0].key_id == "p1#t"

    def test_count_law_random(self):
        rng = np.random.default_rng(7)
        body = "abcdefghij" * 20
        for _ in range(200):
            n_spans = int(rng.integers(0, 8))
            title = "T" if rng.integers(2) else ""
            passage = Passage("p", title, body)
            spans = [passage_span(passage, i, i + 3) for i in range(n_spans)]
            entries = enumerate_keys(passage, spans)
            assert len(entries) == n_spans + (1 if title else 0)


def passage_span(passage: Passage, start: int, end: int,
                 entity_type: EntityType = EntityType.UNKNOWN):
    from spankey.core import EntitySpan
    return EntitySpan.from_text(passage.body, start, end, entity_type)


class TestBuildQueryRecord:
    TEMPLATES = {"P19": P19, "P50": P50}

    def test_match_attaches_span_and_context_mode(self):
        precursor = build_query_record("Where was Ted Howard born?", "P19", self.TEMPLATES)
        assert precursor.entity_span is not None
        assert precursor.entity_span.surface == "Ted Howard"
        assert precursor.mode is ConditioningMode.ENTITY_IN_FULL_CONTEXT
        assert not precursor.fallback

    def test_no_match_falls_back_flagged(self):
        precursor = build_query_record("Completely different question?", "P19", self.TEMPLATES)
        assert precursor.entity_span is None
        assert precursor.mode is ConditioningMode.FULL_SPAN
        assert precursor.fallback

    def test_unknown_relation(self):
        with pytest.raises(UnknownRelationError):
            build_query_record("Where was X born?", "P999", self.TEMPLATES)


class TestLoadAnnotations:
    def corpus(self):
        return {"p1": Passage("p1", "T", "Bob was here")}

    def test_valid_span(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text('{"pid": "p1", "start": 0, "end": 3, "type": "PER"}\n')
        result = load_ner_annotations(path, self.corpus())
        assert not result.errors
        (span,) = result.spans_by_passage["p1"]
        assert span.surface == "Bob"
        assert span.entity_type is EntityType.PER

    def test_inverted_span_rejected(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text('{"pid": "p1", "start": 5, "end": 2, "type": "PER"}\n')
        result = load_ner_annotations(path, self.corpus())
        assert result.spans_by_passage == {}
        assert result.errors[0].reason == "SpanOutOfBounds"

    def test_span_beyond_body_rejected(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text('{"pid": "p1", "start": 0, "end": 999, "type": "PER"}\n')
        result = load_ner_annotations(path, self.corpus())
        assert result.errors[0].reason == "SpanOutOfBounds"

    def test_empty_file(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text("")
        result = load_ner_annotations(path, self.corpus())
        assert result.spans_by_passage == {}
        assert result.errors == []

    def test_malformed_lines_recorded_with_line_numbers(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text('not json\n'
                        '{"pid": "p1", "start": 0, "end": 3}\n'
                        '{"pid": "p1", "start": 0, "end": 3, "type": "WAT"}\n'
                        '{"pid": "nope", "start": 0, "end": 3, "type": "PER"}\n')
        result = load_ner_annotations(path, self.corpus())
        assert [e.line_no for e in result.errors] == [1, 2, 3, 4]
        assert [e.reason for e in result.errors] == [
            "MalformedLine", "MalformedLine", "MalformedLine", "UnknownPassage"]

    def test_errors_do_not_block_valid_lines(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text('garbage\n{"pid": "p1", "start": 4, "end": 7, "type": "ORG"}\n')
        result = load_ner_annotations(path, self.corpus())
        assert result.span_count == 1
        assert len(result.errors) == 1


class TestStrictLoaders:
    def test_load_corpus(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"id": "p1", "title": "T", "text": "body"}\n')
        (passage,) = load_corpus(path)
        assert passage.passage_id == "p1"

    def test_load_corpus_bad_json(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"id": "p1"\n')
        with pytest.raises(CorpusFormatError, match=":1:"):
            load_corpus(path)

    def test_load_templates_rejects_duplicates(self, tmp_path):
        path = tmp_path / "templates.jsonl"
        path.write_text('{"relation": "P19", "pattern": "Where was [E] born?"}\n'
                        '{"relation": "P19", "pattern": "Where was [E] raised?"}\n')
        with pytest.raises(CorpusFormatError, match="duplicate"):
            load_templates(path)

    def test_load_questions_requires_answers(self, tmp_path):
        path = tmp_path / "questions.jsonl"
        path.write_text('{"qid": "q1", "relation": "P19", "question": "?", "answers": []}\n')
        with pytest.raises(CorpusFormatError):
            load_questions(path)


class TestManifestIO:
    def entries(self):
        passage = Passage("p1", "A Title", "Ted Howard was born in Leeds today.")
        spans = [passage_span(passage, 0, 10, EntityType.PER)]
        return enumerate_keys(passage, spans)

    def test_round_trip(self, tmp_path):
        path = tmp_path / "keys.jsonl"
        entries = self.entries()
        write_key_manifest(path, entries)
        assert read_key_manifest(path) == entries

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_key_manifest(a, self.entries())
        write_key_manifest(b, self.entries())
        assert a.read_bytes() == b.read_bytes()

    def test_title_entry_offsets_are_null(self, tmp_path):
        path = tmp_path / "keys.jsonl"
        write_key_manifest(path, self.entries())
        rows = [json.loads(line) for line in path.read_text().splitlines()]
        title_rows = [r for r in rows if r["kind"] == "title"]
        assert title_rows and title_rows[0]["start"] is None
