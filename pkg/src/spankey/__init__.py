"""Entity-keyed multi-vector passage retrieval.

Passages are indexed under several unit-norm key vectors (one per entity
span plus one per non-empty title) and score against a query as the maximum
cosine similarity over their keys. The package bundles the exact dense
search core, a deterministic mock embedder and binary vector format, a BM25
baseline sharing one tokenizer with the entity-IDF analysis, and a recall@k
evaluation harness with bucket and ablation reports.
"""

from .core import (
    ConditioningMode,
    EntitySpan,
    EntityType,
    EvalRecord,
    Passage,
    Query,
    RetrievalKey,
    ScoredHit,
    ValidationReport,
    expected_key_count,
    validate_corpus,
)
from .dense import (
    FullSet,
    KeySampler,
    MaxIdfSingle,
    MultiKeyIndex,
    RandomSingle,
    apply_sampler,
    build_index,
    cosine,
    score_passage,
    search_topk,
)
from .embed_io import MockEmbedder, mock_embed, read_embeddings, write_embeddings

__version__ = "0.1.0"

__all__ = [
    "ConditioningMode",
    "EntitySpan",
    "EntityType",
    "EvalRecord",
    "FullSet",
    "KeySampler",
    "MaxIdfSingle",
    "MockEmbedder",
    "MultiKeyIndex",
    "Passage",
    "Query",
    "RandomSingle",
    "RetrievalKey",
    "ScoredHit",
    "ValidationReport",
    "apply_sampler",
    "build_index",
    "cosine",
    "expected_key_count",
    "mock_embed",
    "read_embeddings",
    "score_passage",
    "search_topk",
    "validate_corpus",
    "write_embeddings",
]
