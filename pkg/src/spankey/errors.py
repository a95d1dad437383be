"""Exception types shared across the package.

Every failure mode a caller is expected to handle has its own class so that
call sites can catch precisely; all inherit from :class:`SpankeyError`.
"""


class SpankeyError(Exception):
    """Base class for all package-specific errors."""


# --- embedding file format ---------------------------------------------------

class EmbeddingFormatError(SpankeyError):
    """Base class for binary embedding-file failures."""


class BadMagicError(EmbeddingFormatError):
    pass


class UnsupportedVersionError(EmbeddingFormatError):
    pass


class TruncatedFileError(EmbeddingFormatError):
    pass


class DuplicateIdError(EmbeddingFormatError):
    pass


class ZeroVectorError(EmbeddingFormatError):
    pass


class NormDriftError(EmbeddingFormatError):
    """Stored vector norm drifted too far from 1 to be silently repaired."""


class EmptyInputError(SpankeyError):
    """An embedder was asked to embed empty text."""


# --- vectors / dense index ----------------------------------------------------

class DimensionMismatchError(SpankeyError):
    pass


class DuplicateKeyIdError(SpankeyError):
    pass


class NoKeysError(SpankeyError):
    """A passage was scored without any retrieval keys."""


class InvalidKError(SpankeyError):
    """Top-k requested with k < 1."""


class MissingIdfError(SpankeyError):
    """Max-IDF key sampling requires an IDF value for every key."""


# --- ingestion ----------------------------------------------------------------

class TemplateError(SpankeyError):
    """A question template is malformed (placeholder count, empty literals)."""


class NoMatchError(SpankeyError):
    """A question does not align with a template's literal prefix/suffix."""


class UnknownRelationError(SpankeyError):
    pass


class CorpusFormatError(SpankeyError):
    """A corpus/questions/templates file failed to parse; message carries line info."""


# --- sparse index ---------------------------------------------------------------

class EmptyIndexError(SpankeyError):
    """IDF is undefined over an index with zero passages."""


class UnknownPassageError(SpankeyError):
    pass


class NoTokensError(SpankeyError):
    """An entity surface produced no tokens under the shared tokenizer."""


# --- evaluation -----------------------------------------------------------------

class MissingEntityError(SpankeyError):
    """Bucket analysis requires an extracted entity with a finite IDF value."""


class BucketCountError(SpankeyError):
    """More buckets requested than records available."""


class ConfigError(SpankeyError):
    """Run configuration failed validation (missing path, bad k values, ...)."""
