"""Corpus, annotation, template, and question ingestion.

Turns JSONL inputs into domain objects and key manifests:

    corpus:      {"id": str, "title": str, "text": str}
    annotations: {"pid": str, "start": int, "end": int, "type": "LOC"|"ORG"|"PER"|"MISC"}
    templates:   {"relation": str, "pattern": str}   (pattern holds one [E])
    questions:   {"qid": str, "relation": str, "question": str, "answers": [str, ...]}
    manifest:    {"kid": str, "pid": str, "start": int|null, "end": int|null,
                  "kind": "entity"|"title", "surface": str}

Question entities come from template comparison: the literal prefix anchors
at position 0 and the literal suffix at end of string, so the placeholder
capture is exact and never ambiguous. Questions that do not align with
their relation's template fall back to embedding the full question, flagged
so evaluation can segregate them.

Annotation loading is lenient (bad lines become per-line error records);
corpus/template/question loading is strict, since those files are authored
rather than model-produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .core import ConditioningMode, EntitySpan, EntityType, Passage
from .errors import CorpusFormatError, NoMatchError, TemplateError, UnknownRelationError

PLACEHOLDER = "[E]"


@dataclass(frozen=True)
class QuestionTemplate:
    """A relation's question pattern with exactly one [E] placeholder."""

    relation_id: str
    pattern: str

    def __post_init__(self) -> None:
        if self.pattern.count(PLACEHOLDER) != 1:
            raise TemplateError(
                f"template {self.relation_id!r}: pattern must contain exactly "
                f"one {PLACEHOLDER}, got {self.pattern!r}")
        if self.pattern == PLACEHOLDER:
            raise TemplateError(
                f"template {self.relation_id!r}: pattern is empty outside the placeholder")

    @property
    def prefix(self) -> str:
        return self.pattern[:self.pattern.index(PLACEHOLDER)]

    @property
    def suffix(self) -> str:
        return self.pattern[self.pattern.index(PLACEHOLDER) + len(PLACEHOLDER):]


def extract_entity_by_template(question: str, template: QuestionTemplate) -> EntitySpan:
    """Span over exactly the text the template's [E] placeholder matched.

    Case-sensitive on the template's literal parts. Raises NoMatchError when
    prefix/suffix do not align or the capture would be empty.
    """
    if not question:
        raise NoMatchError("question is empty")
    prefix, suffix = template.prefix, template.suffix
    if len(question) <= len(prefix) + len(suffix):
        raise NoMatchError(
            f"question leaves no room for an entity under template {template.relation_id!r}")
    if not question.startswith(prefix) or not question.endswith(suffix):
        raise NoMatchError(
            f"question does not match template {template.relation_id!r} literals")
    start = len(prefix)
    end = len(question) - len(suffix)
    return EntitySpan.from_text(question, start, end, EntityType.UNKNOWN)


@dataclass(frozen=True)
class KeyManifestEntry:
    """One retrieval-key row: provenance offsets for entity keys, none for titles."""

    key_id: str
    passage_id: str
    start: Optional[int]
    end: Optional[int]
    kind: str  # "entity" | "title"
    surface: str


def enumerate_keys(passage: Passage, spans: Sequence[EntitySpan]) -> list[KeyManifestEntry]:
    """One entry per entity span plus one title entry iff the title is non-empty.

    Key ids are deterministic: passage_id + "#" + span ordinal, and "#t" for
    the title key, so re-running ingestion reproduces manifests byte-for-byte.
    """
    entries = [
        KeyManifestEntry(
            key_id=f"{passage.passage_id}#{ordinal}",
            passage_id=passage.passage_id,
            start=span.start,
            end=span.end,
            kind="entity",
            surface=span.surface,
        )
        for ordinal, span in enumerate(spans)
    ]
    if passage.title:
        entries.append(KeyManifestEntry(
            key_id=f"{passage.passage_id}#t",
            passage_id=passage.passage_id,
            start=None,
            end=None,
            kind="title",
            surface=passage.title,
        ))
    return entries


@dataclass(frozen=True)
class QueryPrecursor:
    """Question text plus extraction outcome, ready for embedding.

    `fallback` marks questions whose template extraction failed and which
    therefore embed the full question span.
    """

    question_text: str
    entity_span: Optional[EntitySpan]
    mode: ConditioningMode
    fallback: bool = False


def build_query_record(question: str, relation_id: str,
                       templates: Mapping[str, QuestionTemplate]) -> QueryPrecursor:
    """Attach the template-extracted entity, falling back to the full span.

    Raises UnknownRelationError for relations without a configured template.
    """
    template = templates.get(relation_id)
    if template is None:
        raise UnknownRelationError(f"no template for relation {relation_id!r}")
    try:
        span = extract_entity_by_template(question, template)
    except NoMatchError:
        return QueryPrecursor(question, None, ConditioningMode.FULL_SPAN, fallback=True)
    return QueryPrecursor(question, span, ConditioningMode.ENTITY_IN_FULL_CONTEXT)


# --- annotation loading (lenient, per-line error records) ----------------------

@dataclass(frozen=True)
class LineError:
    line_no: int
    reason: str  # "MalformedLine" | "SpanOutOfBounds" | "UnknownPassage"
    detail: str


@dataclass
class AnnotationLoadResult:
    spans_by_passage: dict[str, list[EntitySpan]]
    errors: list[LineError]

    @property
    def span_count(self) -> int:
        return sum(len(v) for v in self.spans_by_passage.values())


_ANNOTATION_TYPES = {t.value: t for t in (EntityType.LOC, EntityType.ORG,
                                          EntityType.PER, EntityType.MISC)}


def load_ner_annotations(path, passages_by_id: Mapping[str, Passage]) -> AnnotationLoadResult:
    """Read span annotations, validating offsets against passage bodies.

    Invalid lines never abort the load; each is rejected with a LineError
    record naming the line and the failure.
    """
    spans: dict[str, list[EntitySpan]] = {}
    errors: list[LineError] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                pid = obj["pid"]
                start = int(obj["start"])
                end = int(obj["end"])
                type_name = obj["type"]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                errors.append(LineError(line_no, "MalformedLine", str(exc)))
                continue
            entity_type = _ANNOTATION_TYPES.get(type_name)
            if entity_type is None:
                errors.append(LineError(line_no, "MalformedLine",
                                        f"unknown entity type {type_name!r}"))
                continue
            passage = passages_by_id.get(pid)
            if passage is None:
                errors.append(LineError(line_no, "UnknownPassage",
                                        f"passage {pid!r} not in corpus"))
                continue
            if not (0 <= start < end <= len(passage.body)):
                errors.append(LineError(
                    line_no, "SpanOutOfBounds",
                    f"[{start}, {end}) outside body of {pid!r} (length {len(passage.body)})"))
                continue
            spans.setdefault(pid, []).append(
                EntitySpan.from_text(passage.body, start, end, entity_type))
    return AnnotationLoadResult(spans, errors)


# --- strict loaders -------------------------------------------------------------

def _iter_jsonl(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{line_no}: bad JSON: {exc}") from exc


def load_corpus(path) -> list[Passage]:
    """Load passages; raises CorpusFormatError with line info on bad records."""
    passages = []
    for line_no, obj in _iter_jsonl(path):
        try:
            passages.append(Passage(
                passage_id=str(obj["id"]),
                title=str(obj.get("title", "")),
                body=str(obj["text"]),
            ))
        except (KeyError, ValueError) as exc:
            raise CorpusFormatError(f"{path}:{line_no}: {exc}") from exc
    return passages


def load_templates(path) -> dict[str, QuestionTemplate]:
    templates: dict[str, QuestionTemplate] = {}
    for line_no, obj in _iter_jsonl(path):
        try:
            template = QuestionTemplate(str(obj["relation"]), str(obj["pattern"]))
        except (KeyError, TemplateError) as exc:
            raise CorpusFormatError(f"{path}:{line_no}: {exc}") from exc
        if template.relation_id in templates:
            raise CorpusFormatError(
                f"{path}:{line_no}: duplicate relation {template.relation_id!r}")
        templates[template.relation_id] = template
    return templates


@dataclass(frozen=True)
class QuestionRecord:
    query_id: str
    relation_id: str
    question: str
    answers: tuple[str, ...]


def load_questions(path) -> list[QuestionRecord]:
    records = []
    for line_no, obj in _iter_jsonl(path):
        try:
            answers = tuple(str(a) for a in obj["answers"])
            if not answers:
                raise ValueError("answers must be non-empty")
            records.append(QuestionRecord(
                query_id=str(obj["qid"]),
                relation_id=str(obj["relation"]),
                question=str(obj["question"]),
                answers=answers,
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusFormatError(f"{path}:{line_no}: {exc}") from exc
    return records


# --- manifest I/O ----------------------------------------------------------------

def write_key_manifest(path, entries: Iterable[KeyManifestEntry]) -> int:
    """Write manifest JSONL; deterministic byte-for-byte for identical entries."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps({
                "kid": entry.key_id,
                "pid": entry.passage_id,
                "start": entry.start,
                "end": entry.end,
                "kind": entry.kind,
                "surface": entry.surface,
            }, ensure_ascii=False, separators=(",", ":")) + "\n")
            count += 1
    return count


def read_key_manifest(path) -> list[KeyManifestEntry]:
    entries = []
    for line_no, obj in _iter_jsonl(path):
        try:
            if obj["kind"] not in ("entity", "title"):
                raise ValueError(f"bad kind {obj['kind']!r}")
            entries.append(KeyManifestEntry(
                key_id=str(obj["kid"]),
                passage_id=str(obj["pid"]),
                start=None if obj["start"] is None else int(obj["start"]),
                end=None if obj["end"] is None else int(obj["end"]),
                kind=obj["kind"],
                surface=str(obj["surface"]),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusFormatError(f"{path}:{line_no}: {exc}") from exc
    return entries
