"""Understanding pipeline: tokenize, tag, chunk, detect acts, extract, merge."""
from .acts import detect_acts
from .chunker import chunk
from .extract import MergeOutcome, extract, merge
from .taggers import annotate
from .tokenize import tokenize
from .types import (
    ActReport,
    AmbiguityReport,
    CorrectionAct,
    ExtractionResult,
    FieldBinding,
    PhraseChunk,
    SemanticTag,
    Span,
    Token,
)

__all__ = [
    "ActReport",
    "AmbiguityReport",
    "CorrectionAct",
    "ExtractionResult",
    "FieldBinding",
    "MergeOutcome",
    "PhraseChunk",
    "SemanticTag",
    "Span",
    "Token",
    "annotate",
    "chunk",
    "detect_acts",
    "extract",
    "merge",
    "tokenize",
]
