"""Exception hierarchy for the patsim pipeline.

Every error that crosses a module boundary derives from PatsimError and
carries a short machine-readable ``code`` used in reports and logs.
"""


class PatsimError(Exception):
    code = "error"


class SchemaError(PatsimError):
    """A required column is missing from an input table header."""

    code = "schema"


class IngestConflictError(PatsimError):
    """Duplicate patent_id rows carry contradicting field values."""

    code = "ingest-conflict"


class FormatError(PatsimError):
    """A PATSIM-* file violates its format contract.

    ``line`` is the 1-based offending line number when known.
    """

    code = "format"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ParameterError(PatsimError, ValueError):
    """An operation was called with out-of-contract parameters."""

    code = "parameter"


class ConfigError(PatsimError):
    """Run configuration is missing keys or holds unusable values."""

    code = "config"


class UnsatisfiableNegativeError(PatsimError):
    """No patent outside the anchor's CPC class exists to serve as negative."""

    code = "unsatisfiable-negative"


class UndefinedEmbeddingError(PatsimError):
    """A text cannot be embedded (e.g. every token is out of vocabulary)."""

    code = "undefined-embedding"


class UndefinedSimilarityError(PatsimError):
    """Cosine similarity is undefined (zero vector)."""

    code = "undefined-similarity"


class DimensionMismatchError(PatsimError):
    """Two vectors that must share a dimensionality do not."""

    code = "dim-mismatch"


class SelectionError(PatsimError):
    """Representative-pair selection failed on a specific claim."""

    code = "selection"


class TrainingError(PatsimError):
    """Model training cannot proceed (e.g. empty vocabulary)."""

    code = "training"
