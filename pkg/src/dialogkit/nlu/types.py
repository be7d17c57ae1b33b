"""Value types produced by the understanding pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

WORD = "word"
NUMBER = "number"
PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    text: str
    index: int
    category: str  # word | number | punct

    @property
    def norm(self) -> str:
        return self.text.lower()


@dataclass(frozen=True)
class Span:
    """Half-open token index range [start, end)."""

    start: int
    end: int

    def __post_init__(self):
        if self.end <= self.start:
            raise ValueError("span must be non-empty")

    def __contains__(self, index: int) -> bool:
        return self.start <= index < self.end

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def indices(self) -> range:
        return range(self.start, self.end)


@dataclass(frozen=True)
class SemanticTag:
    span: Span
    semantic_class: str
    value: object  # canonical text, or minutes / number as int
    source: str  # domain_independent | domain_specific
    approx: bool = False
    # All (canonical, class) readings when a surface is ambiguous in the
    # lexicon; the primary reading comes first.
    alternates: tuple[tuple[str, str], ...] = ()

    def surface(self, tokens: list[Token]) -> str:
        return " ".join(tokens[i].text for i in self.span.indices())


@dataclass(frozen=True)
class PhraseChunk:
    kind: str  # NP | PP | VP | WH | UNKNOWN
    span: Span
    tags: tuple[SemanticTag, ...] = ()


@dataclass(frozen=True)
class CorrectionAct:
    old_value: object
    new_value: object
    semantic_class: str | None


@dataclass(frozen=True)
class ActReport:
    quit: bool = False
    help: bool = False
    meta_query: bool = False
    meta_topic: str | None = None  # resolved semantic class
    repeat: bool = False
    dont_know: bool = False
    affirm: bool = False
    deny: bool = False
    correction: CorrectionAct | None = None
    silence: bool = False
    consumed: frozenset = frozenset()  # token indexes claimed by act patterns

    def state_changing(self) -> bool:
        """True when some act drives a state on its own."""
        return bool(self.quit or self.help or self.meta_query or self.correction)


@dataclass(frozen=True)
class FieldBinding:
    field: str
    value: object
    semantic_class: str
    status: str = "new"  # new | confirmed | corrected
    turn: int = 0
    approx: bool = False

    def with_status(self, status: str) -> "FieldBinding":
        return replace(self, status=status)


@dataclass(frozen=True)
class AmbiguityReport:
    kind: str  # lexical | class | field
    term: str
    candidates: tuple[str, ...]
    # Full readings behind each candidate: (candidate label, semantic class,
    # canonical value); for field ambiguity the label is the field name.
    options: tuple[tuple[str, str, object], ...] = ()
    approx: bool = False  # the ambiguous value carried an approximation marker

    def __post_init__(self):
        if len(self.candidates) < 2:
            raise ValueError("ambiguity needs at least two candidates")


@dataclass(frozen=True)
class ExtractionResult:
    bindings: tuple[FieldBinding, ...]
    ambiguities: tuple[AmbiguityReport, ...]
    acts: ActReport
    unknown_terms: tuple[str, ...]
    out_of_scope_hits: tuple[tuple[str, str], ...]
    query_type: str | None = None
    tokens: tuple[Token, ...] = ()
