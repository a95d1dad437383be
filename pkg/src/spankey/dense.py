"""Multi-key dense retrieval: grouped key storage, maxpool scoring, exact top-k.

Every passage owns one or more unit-norm key vectors; a query scores a
passage as the maximum cosine similarity over that passage's keys, and
search returns an exact ranking (no ANN). Tie-breaking is total and fixed:
score ties rank by ascending passage_id, best-key ties resolve to the
lowest key_id, so identical inputs always produce byte-identical rankings.

Numerical contract: keys are stored f32, similarities are accumulated in
f64 via elementwise multiply + numpy pairwise summation. That reduction is
bitwise identical whether applied row-wise over a matrix or per key vector,
which makes results independent of how the key set is partitioned across
workers and lets tests compare against a naive per-key oracle exactly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .core import Query, ScoredHit
from .errors import (
    DimensionMismatchError,
    DuplicateKeyIdError,
    InvalidKError,
    MissingIdfError,
    NoKeysError,
)

# Keys arrive through the embedding-file loader, so build tolerates the
# file-level norm bound rather than the stricter in-memory one.
_BUILD_NORM_ATOL = 1e-5


@dataclass(frozen=True)
class FullSet:
    """Keep every key of every passage (the headline configuration)."""


@dataclass(frozen=True)
class RandomSingle:
    """Keep one uniformly chosen key per passage, deterministic under seed."""

    seed: int = 0


@dataclass(frozen=True)
class MaxIdfSingle:
    """Keep the key whose surface has the maximum IDF value per passage."""


KeySampler = Union[FullSet, RandomSingle, MaxIdfSingle]


class MultiKeyIndex:
    """Immutable store of key vectors grouped contiguously by passage.

    Row layout: keys of one passage occupy the half-open row range
    ``offsets[i]..offsets[i+1]`` for passage ``passage_ids[i]``. Passages
    appear in first-appearance order of the build input; keys keep their
    input order within a passage.
    """

    def __init__(self, dim: int, key_ids: Sequence[str], passage_ids: Sequence[str],
                 matrix: np.ndarray, offsets: np.ndarray):
        self.dim = dim
        self.key_ids = list(key_ids)
        self.passage_ids = list(passage_ids)
        self.matrix = matrix
        self.offsets = offsets
        self.matrix.setflags(write=False)
        self.offsets.setflags(write=False)

    @property
    def key_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def passage_count(self) -> int:
        return len(self.passage_ids)

    def passage_rows(self, i: int) -> range:
        return range(int(self.offsets[i]), int(self.offsets[i + 1]))

    def iter_keys(self) -> Iterable[tuple[str, str, np.ndarray]]:
        """Yield (key_id, passage_id, vector) in index row order."""
        for i, pid in enumerate(self.passage_ids):
            for row in self.passage_rows(i):
                yield self.key_ids[row], pid, self.matrix[row]


def build_index(keys: Iterable[tuple[str, str, np.ndarray]], dim: int) -> MultiKeyIndex:
    """Group (key_id, passage_id, vector) triples into a searchable index.

    Deterministic given input order; passages are laid out in first-appearance
    order. Raises DuplicateKeyIdError / DimensionMismatchError on bad input.
    """
    if dim < 1:
        raise DimensionMismatchError(f"dim must be >= 1, got {dim}")
    by_passage: dict[str, list[tuple[str, np.ndarray]]] = {}
    seen_keys: set[str] = set()
    for key_id, passage_id, vector in keys:
        if key_id in seen_keys:
            raise DuplicateKeyIdError(f"duplicate key id {key_id!r}")
        seen_keys.add(key_id)
        vec = np.asarray(vector, dtype=np.float32)
        if vec.ndim != 1 or vec.shape[0] != dim:
            raise DimensionMismatchError(
                f"key {key_id!r}: expected dim {dim}, got shape {vec.shape}")
        norm = float(np.linalg.norm(vec.astype(np.float64)))
        if abs(norm - 1.0) > _BUILD_NORM_ATOL:
            raise ValueError(f"key {key_id!r}: vector norm {norm} is not 1")
        by_passage.setdefault(passage_id, []).append((key_id, vec))

    key_ids: list[str] = []
    passage_ids: list[str] = list(by_passage.keys())
    offsets = np.zeros(len(passage_ids) + 1, dtype=np.int64)
    rows: list[np.ndarray] = []
    for i, pid in enumerate(passage_ids):
        for key_id, vec in by_passage[pid]:
            key_ids.append(key_id)
            rows.append(vec)
        offsets[i + 1] = len(key_ids)
    matrix = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float32)
    return MultiKeyIndex(dim, key_ids, passage_ids, matrix, offsets)


QueryLike = Union[Query, np.ndarray, Sequence[float]]


def _as_vector(query: QueryLike) -> np.ndarray:
    if isinstance(query, Query):
        return np.asarray(query.vector, dtype=np.float64)
    return np.asarray(query, dtype=np.float64)


def cosine(q: np.ndarray, k: np.ndarray) -> float:
    """Dot product of two pre-normalized vectors, accumulated in f64."""
    qv = np.asarray(q, dtype=np.float64)
    kv = np.asarray(k, dtype=np.float64)
    if qv.shape != kv.shape:
        raise DimensionMismatchError(f"shape mismatch {qv.shape} vs {kv.shape}")
    return float((qv * kv).sum())


def score_passage(query: QueryLike, passage_id: str,
                  keys: Sequence[tuple[str, np.ndarray]]) -> ScoredHit:
    """Maxpool the query's cosine similarities over one passage's keys.

    best_key_id is the argmax; on score ties the lowest key_id wins.
    Accepts a Query object or a bare vector.
    """
    if not keys:
        raise NoKeysError(f"passage {passage_id!r} has no keys")
    query_vector = _as_vector(query)
    best_score = -np.inf
    best_key_id = ""
    for key_id, vec in keys:
        s = cosine(query_vector, vec)
        if s > best_score or (s == best_score and key_id < best_key_id):
            best_score = s
            best_key_id = key_id
    return ScoredHit(passage_id=passage_id, score=best_score, best_key_id=best_key_id)


def _key_scores(index: MultiKeyIndex, q64: np.ndarray, workers: int) -> np.ndarray:
    """Per-key f64 similarity scores; bitwise independent of worker count."""
    if index.key_count == 0:
        return np.zeros(0, dtype=np.float64)

    def chunk_scores(lo: int, hi: int) -> np.ndarray:
        # Elementwise multiply + pairwise row sum: the reduction is row-local,
        # so chunking cannot change any score bit.
        return (index.matrix[lo:hi].astype(np.float64) * q64).sum(axis=1)

    if workers <= 1 or index.key_count < 2 * workers:
        return chunk_scores(0, index.key_count)
    bounds = np.linspace(0, index.key_count, workers + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda ab: chunk_scores(*ab), zip(bounds[:-1], bounds[1:])))
    return np.concatenate(parts)


def _maxpool(index: MultiKeyIndex, key_scores: np.ndarray) -> tuple[np.ndarray, list[str]]:
    """Per-passage max score and winning key id (ties -> lowest key_id)."""
    starts = index.offsets[:-1]
    passage_scores = np.maximum.reduceat(key_scores, starts)
    best_key_ids: list[str] = []
    for i in range(index.passage_count):
        lo, hi = int(index.offsets[i]), int(index.offsets[i + 1])
        mx = passage_scores[i]
        best_key_ids.append(min(index.key_ids[r] for r in range(lo, hi)
                                if key_scores[r] == mx))
    return passage_scores, best_key_ids


def search_topk(query: QueryLike, index: MultiKeyIndex, k: int,
                sampler: KeySampler = FullSet(), *,
                idf_of_key: Optional[Mapping[str, float]] = None,
                workers: int = 1) -> list[ScoredHit]:
    """Exact top-k passages by maxpooled cosine, descending.

    Ties rank by ascending passage_id. Accepts a Query object or a bare
    vector. A non-FullSet sampler prunes the key set before scoring
    (callers running many queries should prune once via
    :func:`apply_sampler` and pass FullSet here).
    """
    if k < 1:
        raise InvalidKError(f"k must be >= 1, got {k}")
    if not isinstance(sampler, FullSet):
        index = apply_sampler(index, sampler, idf_of_key)
    if index.passage_count == 0:
        return []
    q64 = _as_vector(query)
    if q64.shape != (index.dim,):
        raise DimensionMismatchError(
            f"query shape {q64.shape} does not match index dim {index.dim}")

    key_scores = _key_scores(index, q64, workers)
    passage_scores, best_key_ids = _maxpool(index, key_scores)
    order = sorted(range(index.passage_count),
                   key=lambda i: (-passage_scores[i], index.passage_ids[i]))
    return [ScoredHit(passage_id=index.passage_ids[i],
                      score=float(passage_scores[i]),
                      best_key_id=best_key_ids[i])
            for i in order[:k]]


def apply_sampler(index: MultiKeyIndex, sampler: KeySampler,
                  idf_of_key: Optional[Mapping[str, float]] = None) -> MultiKeyIndex:
    """Reduce each passage to a single key per the sampling rule.

    FullSet is the identity. RandomSingle draws per-passage uniformly from a
    generator seeded once, walking passages in index order, so the same seed
    always prunes identically. MaxIdfSingle keeps the key with the largest
    IDF value (ties -> lowest key_id) and requires idf_of_key to cover every
    key in the index.
    """
    if isinstance(sampler, FullSet):
        return index
    kept_rows: list[int] = []
    if isinstance(sampler, RandomSingle):
        rng = np.random.default_rng(sampler.seed)
        for i in range(index.passage_count):
            rows = index.passage_rows(i)
            kept_rows.append(rows[int(rng.integers(len(rows)))])
    elif isinstance(sampler, MaxIdfSingle):
        if idf_of_key is None:
            raise MissingIdfError("max-IDF sampling requires an idf_of_key map")
        missing = [kid for kid in index.key_ids if kid not in idf_of_key]
        if missing:
            raise MissingIdfError(
                f"idf_of_key misses {len(missing)} keys (first: {missing[0]!r})")
        for i in range(index.passage_count):
            rows = index.passage_rows(i)
            kept_rows.append(min(rows, key=lambda r: (-idf_of_key[index.key_ids[r]],
                                                      index.key_ids[r])))
    else:
        raise TypeError(f"unknown sampler {sampler!r}")

    return build_index(((index.key_ids[r],
                         index.passage_ids[int(np.searchsorted(index.offsets, r, side="right")) - 1],
                         index.matrix[r]) for r in kept_rows), index.dim)
