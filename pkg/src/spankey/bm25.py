"""Lexical baseline: tokenizer, inverted index, IDF, BM25 top-k, entity IDF.

Scoring uses the Lucene shape without the (k1+1) numerator constant (rank
equivalent to the classic form) with defaults k1 = 0.9, b = 0.4:

    score(q, d) = sum over query terms t of
        idf(t) * tf / (tf + k1 * (1 - b + b * doc_len / avgdl))

    idf(t) = ln((N - n_t + 0.5) / (n_t + 0.5))

Negative IDF values are kept (no floor): flooring would silently change the
entity-IDF bucketing downstream. Scores from this module are comparable
only across runs of this artifact, not to Lucene byte-for-byte.

The tokenizer is deliberately simple (lowercase, split on maximal runs of
non-alphanumeric code points, no stemming or stopwords) and is shared
verbatim by BM25 and the entity-IDF computation so both draw on a single
vocabulary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import groupby
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import (
    EmptyIndexError,
    InvalidKError,
    NoTokensError,
    UnknownPassageError,
)

SIDECAR_FORMAT = "spankey-bm25"
SIDECAR_VERSION = 1


def tokenize(text: str) -> list[str]:
    """Lowercase and split on maximal runs of non-alphanumeric characters."""
    return ["".join(run) for is_alnum, run in groupby(text.lower(), key=str.isalnum)
            if is_alnum]


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 0.9
    b: float = 0.4

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0 <= self.b <= 1:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


@dataclass(eq=False)
class InvertedIndex:
    """Postings over a passage corpus; immutable after build.

    postings maps term -> [(passage_id, term_frequency), ...] sorted by
    passage_id; doc_len holds per-passage token counts; avgdl their mean.
    """

    doc_count: int = 0
    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    doc_len: dict[str, int] = field(default_factory=dict)
    avgdl: float = 0.0


def build_inverted_index(docs: Iterable[tuple[str, str]]) -> InvertedIndex:
    """Index (passage_id, text) pairs. Duplicate passage ids are an error."""
    postings: dict[str, dict[str, int]] = {}
    doc_len: dict[str, int] = {}
    for passage_id, text in docs:
        if passage_id in doc_len:
            raise ValueError(f"duplicate passage id {passage_id!r}")
        terms = tokenize(text)
        doc_len[passage_id] = len(terms)
        for term in terms:
            tf = postings.setdefault(term, {})
            tf[passage_id] = tf.get(passage_id, 0) + 1
    index = InvertedIndex(
        doc_count=len(doc_len),
        postings={term: sorted(tf.items()) for term, tf in postings.items()},
        doc_len=doc_len,
        avgdl=(sum(doc_len.values()) / len(doc_len)) if doc_len else 0.0,
    )
    return index


def idf(index: InvertedIndex, term: str) -> float:
    """ln((N - n_t + 0.5) / (n_t + 0.5)); absent terms use n_t = 0.

    The formula goes negative once a term appears in more than half the
    passages; that is intentional (see module docstring).
    """
    if index.doc_count == 0:
        raise EmptyIndexError("IDF is undefined over an empty index")
    n_t = len(index.postings.get(term, ()))
    return math.log((index.doc_count - n_t + 0.5) / (n_t + 0.5))


def _tf_weight(tf: int, params: Bm25Params, dl: int, avgdl: float) -> float:
    return tf / (tf + params.k1 * (1.0 - params.b + params.b * dl / avgdl))


def bm25_score(index: InvertedIndex, params: Bm25Params,
               query_terms: Sequence[str], passage_id: str) -> float:
    """Score one passage against a term list; absent terms contribute 0.

    A term repeated in the query contributes once per occurrence, matching
    how a boolean query with duplicate clauses accumulates.
    """
    if passage_id not in index.doc_len:
        raise UnknownPassageError(f"passage {passage_id!r} is not indexed")
    dl = index.doc_len[passage_id]
    score = 0.0
    for term in query_terms:
        tf = _posting_tf(index, term, passage_id)
        if tf:
            score += idf(index, term) * _tf_weight(tf, params, dl, index.avgdl)
    return score


def _posting_tf(index: InvertedIndex, term: str, passage_id: str) -> int:
    plist = index.postings.get(term)
    if not plist:
        return 0
    lo, hi = 0, len(plist)
    while lo < hi:
        mid = (lo + hi) // 2
        if plist[mid][0] < passage_id:
            lo = mid + 1
        else:
            hi = mid
    if lo < len(plist) and plist[lo][0] == passage_id:
        return plist[lo][1]
    return 0


def bm25_topk(index: InvertedIndex, params: Bm25Params,
              question_text: str, k: int) -> list[tuple[str, float]]:
    """Exact top-k over the whole corpus for the tokenized question.

    Passages matching no query term score exactly 0 and still take part in
    the ranking; ties rank by ascending passage_id.
    """
    if k < 1:
        raise InvalidKError(f"k must be >= 1, got {k}")
    query_terms = tokenize(question_text)
    scores: dict[str, float] = {pid: 0.0 for pid in index.doc_len}
    for term in query_terms:
        term_idf = idf(index, term)
        for passage_id, tf in index.postings.get(term, ()):
            scores[passage_id] += term_idf * _tf_weight(
                tf, params, index.doc_len[passage_id], index.avgdl)
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def idf_ent(index: InvertedIndex, entity_surface: str, *,
            idf_fn: Optional[Callable[[str], float]] = None) -> float:
    """Maximum IDF over the tokens of an entity surface.

    Uses the corpus IDF by default; `idf_fn` lets callers inject per-token
    values (analysis over a precomputed table). Raises NoTokensError when
    the surface contains no alphanumeric runs.
    """
    tokens = tokenize(entity_surface)
    if not tokens:
        raise NoTokensError(f"entity surface {entity_surface!r} has no tokens")
    fn = idf_fn if idf_fn is not None else (lambda t: idf(index, t))
    return max(fn(token) for token in tokens)


# --- persistence (JSON sidecar) ------------------------------------------------

def save_index(index: InvertedIndex, path) -> None:
    """Persist the index as a versioned JSON sidecar (sorted keys, compact)."""
    payload = {
        "format": SIDECAR_FORMAT,
        "version": SIDECAR_VERSION,
        "doc_count": index.doc_count,
        "avgdl": index.avgdl,
        "doc_len": dict(sorted(index.doc_len.items())),
        "postings": {term: [[pid, tf] for pid, tf in plist]
                     for term, plist in sorted(index.postings.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, separators=(",", ":"))


def load_index(path) -> InvertedIndex:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != SIDECAR_FORMAT:
        raise ValueError(f"not a {SIDECAR_FORMAT} sidecar: {path}")
    if payload.get("version") != SIDECAR_VERSION:
        raise ValueError(f"unsupported sidecar version {payload.get('version')}")
    return InvertedIndex(
        doc_count=payload["doc_count"],
        postings={term: [(pid, int(tf)) for pid, tf in plist]
                  for term, plist in payload["postings"].items()},
        doc_len={pid: int(n) for pid, n in payload["doc_len"].items()},
        avgdl=float(payload["avgdl"]),
    )
