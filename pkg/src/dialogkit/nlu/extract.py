"""Field extraction and frame merging.

`extract` maps each tagged term to a candidate binding when the reading is
unique, or to an ambiguity report when it is not, and accounts for every
remaining content word as either out-of-scope or unknown. `merge` folds one
turn's extraction into the dialogue context: corrections first, then pending
clarification answers, then expectation resolution, then plain bindings with
latest-turn-wins.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from ..errors import CorrectionTargetNotFound
from ..query import DEFAULT_WINDOW
from ..schema import DomainPack
from .resources import resources_for
from .types import (
    ActReport,
    AmbiguityReport,
    ExtractionResult,
    FieldBinding,
    PhraseChunk,
    SemanticTag,
    Token,
    WORD,
)

if TYPE_CHECKING:  # pragma: no cover
    from ..dialog.context import DialogueContext


def _cue_role_before(tokens: list[Token], start: int, pack: DomainPack) -> str | None:
    """Nearest cue word to the left decides which role a value plays."""
    for i in range(start - 1, -1, -1):
        role = pack.cue_role_of(tokens[i].norm)
        if role:
            return role
    return None


def _field_for_role(pack: DomainPack, semantic_class: str, role: str | None):
    if role is None:
        return None
    hits = [
        f
        for f in pack.schema.fields_of_class(semantic_class)
        if f.cue_role == role
    ]
    return hits[0] if len(hits) == 1 else None


def _match_query_type(tokens: list[Token], pack: DomainPack) -> str | None:
    norms = [t.norm for t in tokens]
    for qt in pack.schema.query_types:
        for pattern in qt.trigger_patterns:
            n = len(pattern)
            for i in range(len(norms) - n + 1):
                if tuple(norms[i : i + n]) == pattern:
                    return qt.name
    return None


def _clarification_words(context) -> set[str]:
    """Words a pending clarification makes acceptable as an answer."""
    pc = getattr(context, "pending_clarification", None) if context is not None else None
    if pc is None:
        return set()
    words: set[str] = set()
    for label, cls, value in pc.options:
        words.update(str(label).lower().replace("_", " ").split())
        words.update(cls.lower().replace("_", " ").split())
        values = value if isinstance(value, tuple) else (value,)
        for v in values:
            words.update(str(v).lower().replace(",", " ").split())
    return words


def _scan_out_of_scope(
    tokens: list[Token], tags: list[SemanticTag], pack: DomainPack
) -> tuple[list[tuple[str, str]], set[int]]:
    tagged = {i for tag in tags for i in tag.span.indices()}
    norms = [t.norm for t in tokens]
    hits: list[tuple[str, str]] = []
    consumed: set[int] = set()
    for term, explanation in pack.schema.out_of_scope_terms:
        n = len(term)
        for i in range(len(norms) - n + 1):
            if tuple(norms[i : i + n]) != term:
                continue
            if any(k in tagged or k in consumed for k in range(i, i + n)):
                continue
            surface = " ".join(tokens[k].text for k in range(i, i + n))
            hits.append((surface, explanation))
            consumed.update(range(i, i + n))
    return hits, consumed


def extract(
    chunks: list[PhraseChunk],
    tags: list[SemanticTag],
    pack: DomainPack,
    context: "DialogueContext | None" = None,
    acts: ActReport | None = None,
    tokens: list[Token] | None = None,
) -> ExtractionResult:
    acts = acts or ActReport(silence=not tokens)
    tokens = tokens if tokens is not None else []
    res = resources_for(pack)
    schema = pack.schema

    oos_hits, oos_consumed = _scan_out_of_scope(tokens, tags, pack)

    bindings: list[FieldBinding] = []
    ambiguities: list[AmbiguityReport] = []
    for tag in tags:
        if any(i in acts.consumed for i in tag.span.indices()):
            continue
        surface = tag.surface(tokens) if tokens else str(tag.value)

        if tag.alternates:
            readings = list(tag.alternates)  # (canonical, class) in lexicon order
        else:
            readings = [(tag.value, tag.semantic_class)]

        classes: list[str] = []
        for _, cls in readings:
            if cls not in classes:
                classes.append(cls)

        if len(classes) > 1:
            role = _cue_role_before(tokens, tag.span.start, pack)
            resolved = None
            if role is not None:
                matching = [cls for cls in classes if _field_for_role(pack, cls, role)]
                if len(matching) == 1:
                    resolved = matching[0]
            if resolved is None:
                options = tuple(
                    (cls, cls, tuple(canon for canon, c in readings if c == cls)) for cls in classes
                )
                ambiguities.append(
                    AmbiguityReport(kind="class", term=surface, candidates=tuple(classes), options=options)
                )
                continue
            classes = [resolved]
            readings = [(canon, cls) for canon, cls in readings if cls == resolved]

        semantic_class = classes[0]
        canonicals: list = []
        for canon, _ in readings:
            if canon not in canonicals:
                canonicals.append(canon)
        if len(canonicals) > 1:
            ambiguities.append(
                AmbiguityReport(
                    kind="lexical",
                    term=surface,
                    candidates=tuple(str(c) for c in canonicals),
                    options=tuple((str(c), semantic_class, c) for c in canonicals),
                )
            )
            continue
        value = canonicals[0]

        fields = schema.fields_of_class(semantic_class)
        if not fields:
            continue  # tagged but unusable in this domain; counted as unknown below
        if len(fields) == 1:
            target = fields[0]
        else:
            role = _cue_role_before(tokens, tag.span.start, pack)
            target = _field_for_role(pack, semantic_class, role)
            if target is None:
                ambiguities.append(
                    AmbiguityReport(
                        kind="field",
                        term=surface,
                        candidates=tuple(f.name for f in fields),
                        options=tuple((f.name, semantic_class, value) for f in fields),
                        approx=tag.approx,
                    )
                )
                continue
        bindings.append(
            FieldBinding(
                field=target.name,
                value=value,
                semantic_class=semantic_class,
                status="new",
                approx=tag.approx,
            )
        )

    # Unknown content words: not tagged, not glue, not domain vocabulary.
    usable_classes = {f.semantic_class for f in schema.fields}
    tagged_usable = {
        i
        for tag in tags
        for i in tag.span.indices()
        if usable_classes & ({cls for _, cls in tag.alternates} or {tag.semantic_class})
    }
    clarify_words = _clarification_words(context)
    unknown_terms: list[str] = []
    seen_unknown: set[str] = set()
    for t in tokens:
        if t.category != WORD or t.index in tagged_usable or t.index in acts.consumed or t.index in oos_consumed:
            continue
        if res.is_known(t.norm) or t.norm in clarify_words:
            continue
        if t.norm not in seen_unknown:
            seen_unknown.add(t.norm)
            unknown_terms.append(t.text)

    return ExtractionResult(
        bindings=tuple(bindings),
        ambiguities=tuple(ambiguities),
        acts=acts,
        unknown_terms=tuple(unknown_terms),
        out_of_scope_hits=tuple(oos_hits),
        query_type=_match_query_type(tokens, pack),
        tokens=tuple(tokens),
    )


@dataclass
class MergeOutcome:
    changed_fields: set[str] = field(default_factory=set)
    resolved: set[int] = field(default_factory=set)  # indexes into extraction.ambiguities
    cascade: list[AmbiguityReport] = field(default_factory=list)
    correction: tuple[str, object, object] | None = None  # field, old, new
    correction_error: CorrectionTargetNotFound | None = None
    query_type_changed: bool = False

    def carries_information(self, extraction: ExtractionResult) -> bool:
        open_ambiguities = len(extraction.ambiguities) > len(self.resolved) or bool(self.cascade)
        return bool(self.changed_fields) or open_ambiguities or self.query_type_changed


def _bind(work: "DialogueContext", outcome: MergeOutcome, name: str, value, semantic_class: str, *, status: str = "new", approx: bool = False) -> None:
    old = work.bindings.get(name)
    if old is not None and old.value == value and old.approx == approx and status == "new":
        return  # restating a known value carries no new information
    work.bindings[name] = FieldBinding(
        field=name,
        value=value,
        semantic_class=semantic_class,
        status=status,
        turn=work.turn_index,
        approx=approx,
    )
    outcome.changed_fields.add(name)
    if approx:
        work.windows.setdefault(name, DEFAULT_WINDOW)
    else:
        work.windows.pop(name, None)


def _apply_correction(work: "DialogueContext", outcome: MergeOutcome, acts: ActReport) -> None:
    corr = acts.correction
    if corr is None:
        return
    for name, binding in work.bindings.items():
        if binding.value == corr.old_value and corr.semantic_class in (None, binding.semantic_class):
            _bind(work, outcome, name, corr.new_value, binding.semantic_class, status="corrected", approx=binding.approx)
            outcome.correction = (name, corr.old_value, corr.new_value)
            return
    for binding in work.bindings.values():
        if binding.value == corr.new_value and corr.semantic_class in (None, binding.semantic_class):
            return  # already applied; merging twice is merging once
    outcome.correction_error = CorrectionTargetNotFound(corr.old_value, corr.new_value, corr.semantic_class)


def _content_norms(extraction: ExtractionResult, pack: DomainPack) -> set[str]:
    res = resources_for(pack)
    out = set()
    for t in extraction.tokens:
        if t.category == WORD and not res.is_function_word(t.norm):
            out.add(t.norm)
    return out


def _resolve_clarification(work: "DialogueContext", outcome: MergeOutcome, extraction: ExtractionResult, pack: DomainPack) -> None:
    pc = work.pending_clarification
    if pc is None or pc.kind == "correction":
        return
    content = _content_norms(extraction, pack)
    if not content:
        return
    schema = pack.schema

    if pc.kind == "field":
        label_words = {
            label: set(schema.field_by_name(label).label.lower().split())
            | {w for ref in schema.field_by_name(label).refs for w in ref.lower().split()}
            for label, _, _ in pc.options
        }
        shared = set.intersection(*label_words.values()) if label_words else set()
        hits = [
            (label, cls, value)
            for label, cls, value in pc.options
            if content & (label_words[label] - shared)
        ]
        if len(hits) == 1:
            label, cls, value = hits[0]
            _bind(work, outcome, label, value, cls)
            work.pending_clarification = None
        return

    if pc.kind == "class":
        hits = [(label, cls, value) for label, cls, value in pc.options if cls.lower() in content]
        if len(hits) != 1:
            return
        _, cls, canonicals = hits[0]
        work.pending_clarification = None
        values = list(canonicals) if isinstance(canonicals, tuple) else [canonicals]
        if len(values) > 1:
            outcome.cascade.append(
                AmbiguityReport(
                    kind="lexical",
                    term=pc.term,
                    candidates=tuple(str(v) for v in values),
                    options=tuple((str(v), cls, v) for v in values),
                )
            )
            return
        _bind_value_to_class(work, outcome, pc.term, values[0], cls, pack)
        return

    if pc.kind == "lexical":
        hits = []
        for label, cls, value in pc.options:
            words = set(str(value).lower().replace(",", " ").split())
            if content <= words:
                hits.append((label, cls, value))
        if len(hits) == 1:
            _, cls, value = hits[0]
            _bind_value_to_class(work, outcome, pc.term, value, cls, pack)
            work.pending_clarification = None


def _bind_value_to_class(work: "DialogueContext", outcome: MergeOutcome, term: str, value, semantic_class: str, pack: DomainPack) -> None:
    fields = pack.schema.fields_of_class(semantic_class)
    if len(fields) == 1:
        _bind(work, outcome, fields[0].name, value, semantic_class)
    elif work.expected_field and any(f.name == work.expected_field for f in fields):
        _bind(work, outcome, work.expected_field, value, semantic_class)
    elif len(fields) > 1:
        outcome.cascade.append(
            AmbiguityReport(
                kind="field",
                term=term,
                candidates=tuple(f.name for f in fields),
                options=tuple((f.name, semantic_class, value) for f in fields),
            )
        )


def _resolve_expectations(work: "DialogueContext", outcome: MergeOutcome, extraction: ExtractionResult, pack: DomainPack) -> None:
    if not work.expected_field:
        return
    expected = work.expected_field
    expected_class = pack.schema.field_by_name(expected).semantic_class
    for idx, amb in enumerate(extraction.ambiguities):
        if idx in outcome.resolved:
            continue
        if amb.kind == "field" and expected in amb.candidates:
            for label, cls, value in amb.options:
                if label == expected:
                    _bind(work, outcome, expected, value, cls, approx=amb.approx)
                    outcome.resolved.add(idx)
                    break
        elif amb.kind == "class" and expected_class in amb.candidates:
            for label, cls, value in amb.options:
                if cls == expected_class:
                    values = list(value) if isinstance(value, tuple) else [value]
                    if len(values) == 1:
                        _bind(work, outcome, expected, values[0], cls)
                        outcome.resolved.add(idx)
                    break


def merge(context: "DialogueContext", extraction: ExtractionResult, pack: DomainPack):
    """Fold one extraction into a copy of the context.

    Returns (new context, MergeOutcome). A correction whose old value matches
    no binding is reported in the outcome rather than raised, so the manager
    can ask for clarification instead of guessing.
    """
    work = context.clone()
    outcome = MergeOutcome()

    _apply_correction(work, outcome, extraction.acts)
    _resolve_clarification(work, outcome, extraction, pack)
    _resolve_expectations(work, outcome, extraction, pack)

    for binding in extraction.bindings:
        _bind(work, outcome, binding.field, binding.value, binding.semantic_class, approx=binding.approx)

    if extraction.query_type and extraction.query_type != work.query_type:
        work.query_type = extraction.query_type
        outcome.query_type_changed = True

    if work.expected_field and work.expected_field in outcome.changed_fields:
        work.expected_field = None
    if work.pending_confirmation and work.pending_confirmation[0] in outcome.changed_fields:
        work.pending_confirmation = None
    pc = work.pending_clarification
    if pc is not None and outcome.changed_fields:
        if pc.kind == "field" and outcome.changed_fields & {label for label, _, _ in pc.options}:
            work.pending_clarification = None
        elif pc.kind in ("lexical", "class"):
            classes = {cls for _, cls, _ in pc.options}
            changed_classes = {work.bindings[f].semantic_class for f in outcome.changed_fields if f in work.bindings}
            if classes & changed_classes:
                work.pending_clarification = None

    return work, outcome
