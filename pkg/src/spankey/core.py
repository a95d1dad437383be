"""Core domain types: passages, entity spans, retrieval keys, queries, hits.

These types are immutable after construction and carry no I/O or scoring
logic. Identifiers are opaque strings supplied by the corpus; span offsets
are character offsets over Unicode code points, never bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

# Unit-norm tolerance for in-memory vectors (file loaders use looser bounds).
UNIT_NORM_ATOL = 1e-6


class EntityType(str, Enum):
    LOC = "LOC"
    ORG = "ORG"
    PER = "PER"
    MISC = "MISC"
    # Engine-internal provenance tag for title-derived keys.
    TITLE = "TITLE"
    # Spans from template extraction, where no NER type is available.
    UNKNOWN = "UNKNOWN"


class ConditioningMode(Enum):
    """Which text the encoder sees when embedding a query span.

    ENTITY_IN_FULL_CONTEXT embeds the entity span conditioned on the whole
    question; ENTITY_ALONE embeds the bare span; FULL_SPAN embeds the whole
    question as one span.
    """

    ENTITY_IN_FULL_CONTEXT = "entity_in_full_context"
    ENTITY_ALONE = "entity_alone"
    FULL_SPAN = "full_span"

    @property
    def requires_entity(self) -> bool:
        return self in (ConditioningMode.ENTITY_IN_FULL_CONTEXT,
                        ConditioningMode.ENTITY_ALONE)


@dataclass(frozen=True)
class Passage:
    """A titled text unit; the retrieval target. Title may be empty.

    Non-empty body and corpus-wide id uniqueness are corpus invariants,
    checked by :func:`validate_corpus` rather than here so that integrity
    scans can report violating records instead of refusing to represent them.
    """

    passage_id: str
    title: str
    body: str
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.passage_id:
            raise ValueError("passage_id must be non-empty")


@dataclass(frozen=True)
class EntitySpan:
    """A character-range annotation inside a host text.

    `start` is inclusive, `end` exclusive, both counted over Unicode code
    points of the host text. `surface` must equal the host slice; use
    :meth:`from_text` to derive it, or :meth:`check_against` to verify.
    """

    start: int
    end: int
    surface: str
    entity_type: EntityType = EntityType.UNKNOWN

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span offsets [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValueError(
                f"surface length {len(self.surface)} does not match span "
                f"[{self.start}, {self.end})")

    @classmethod
    def from_text(cls, host_text: str, start: int, end: int,
                  entity_type: EntityType = EntityType.UNKNOWN) -> "EntitySpan":
        if not (0 <= start < end <= len(host_text)):
            raise ValueError(
                f"span [{start}, {end}) out of bounds for text of length "
                f"{len(host_text)}")
        return cls(start, end, host_text[start:end], entity_type)

    def check_against(self, host_text: str) -> bool:
        """True iff this span lies inside `host_text` and matches its slice."""
        return (self.end <= len(host_text)
                and host_text[self.start:self.end] == self.surface)


def _check_unit_norm(vector: np.ndarray, what: str, atol: float = UNIT_NORM_ATOL) -> np.ndarray:
    vec = np.asarray(vector, dtype=np.float32)
    if vec.ndim != 1:
        raise ValueError(f"{what}: vector must be 1-D, got shape {vec.shape}")
    norm = float(np.linalg.norm(vec.astype(np.float64)))
    if abs(norm - 1.0) > atol:
        raise ValueError(f"{what}: vector norm {norm} is not 1 within {atol}")
    return vec


@dataclass(frozen=True, eq=False)
class RetrievalKey:
    """One unit-norm vector tied to a passage.

    Provenance is an EntitySpan: entity keys carry the span over the passage
    body; title keys carry a span over the title string with type TITLE.
    """

    key_id: str
    passage_id: str
    provenance: EntitySpan
    vector: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "vector", _check_unit_norm(self.vector, f"key {self.key_id!r}"))

    @property
    def is_title_key(self) -> bool:
        return self.provenance.entity_type is EntityType.TITLE


@dataclass(frozen=True, eq=False)
class Query:
    """A question embedded under a conditioning mode. At most one entity span."""

    query_id: str
    question_text: str
    entity_span: Optional[EntitySpan]
    conditioning_mode: ConditioningMode
    vector: np.ndarray

    def __post_init__(self) -> None:
        if self.conditioning_mode.requires_entity and self.entity_span is None:
            raise ValueError(
                f"query {self.query_id!r}: mode {self.conditioning_mode.value} "
                "requires an entity span")
        object.__setattr__(self, "vector", _check_unit_norm(self.vector, f"query {self.query_id!r}"))


@dataclass(frozen=True, order=True)
class ScoredHit:
    """A retrieved passage with its maxpooled score and the winning key."""

    passage_id: str
    score: float
    best_key_id: str


@dataclass(frozen=True)
class EvalRecord:
    """A question with gold answers, driving recall@k and bucket analysis."""

    query_id: str
    relation_id: str
    question_text: str
    template_id: str
    gold_answers: tuple[str, ...]
    extracted_entity: Optional[EntitySpan] = None

    def __post_init__(self) -> None:
        if not self.gold_answers:
            raise ValueError(f"record {self.query_id!r}: gold_answers must be non-empty")


@dataclass
class ValidationReport:
    """Result of a corpus integrity pass; report-only, never raises."""

    passage_count: int = 0
    duplicate_ids: list[str] = field(default_factory=list)
    empty_body_ids: list[str] = field(default_factory=list)
    empty_title_count: int = 0

    @property
    def issue_count(self) -> int:
        return len(self.duplicate_ids) + len(self.empty_body_ids)

    @property
    def ok(self) -> bool:
        return self.issue_count == 0


def validate_corpus(passages: Sequence[Passage]) -> ValidationReport:
    """Scan a corpus for duplicate ids, empty bodies, and empty titles.

    Empty titles are legal (counted, not flagged); duplicates and empty
    bodies are integrity issues.
    """
    report = ValidationReport()
    seen: set[str] = set()
    for passage in passages:
        report.passage_count += 1
        if passage.passage_id in seen:
            report.duplicate_ids.append(passage.passage_id)
        seen.add(passage.passage_id)
        if not passage.body:
            report.empty_body_ids.append(passage.passage_id)
        if not passage.title:
            report.empty_title_count += 1
    return report


def expected_key_count(span_count: int, title: str) -> int:
    """Key-count law: a passage with i entity spans owns i+1 keys when its
    title is non-empty, and i keys otherwise."""
    return span_count + (1 if title else 0)
