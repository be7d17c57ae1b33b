"""Dialogue act detection: quit, help, meta queries, repeats, don't-know,
yes/no, and correction phrases like "I said Dallas, not Dulles"."""
from __future__ import annotations

from typing import TYPE_CHECKING

from ..schema import DomainPack
from .types import ActReport, CorrectionAct, PUNCT, SemanticTag, Token

if TYPE_CHECKING:  # pragma: no cover
    from ..dialog.context import DialogueContext

QUIT_WORDS = frozenset({"bye", "goodbye", "quit", "exit", "stop"})
HELP_PHRASES = (("what", "can", "i", "say"), ("what", "can", "you", "do"))
REPEAT_PHRASES = (("say", "that", "again"), ("come", "again"))
DONT_KNOW_PHRASES = (
    ("i", "don't", "know"),
    ("i", "dont", "know"),
    ("i", "do", "not", "know"),
    ("don't", "know"),
    ("dont", "know"),
    ("do", "not", "know"),
    ("no", "idea"),
    ("not", "sure"),
    ("dunno",),
)
AFFIRM_WORDS = frozenset({"yes", "yeah", "yep", "sure", "correct", "affirmative", "fine", "right"})
AFFIRM_PHRASES = (("that", "is", "right"), ("that's", "right"), ("sounds", "good"))
DENY_WORDS = frozenset({"no", "nope", "wrong", "incorrect"})
DENY_PHRASES = (("not", "right"), ("that", "is", "wrong"), ("that's", "wrong"))


def _find_phrase(norms: list[str], phrase: tuple[str, ...]) -> int | None:
    n = len(phrase)
    for i in range(len(norms) - n + 1):
        if tuple(norms[i : i + n]) == phrase:
            return i
    return None


def _singular_candidates(word: str) -> list[str]:
    out = [word]
    if word.endswith("ies"):
        out.append(word[:-3] + "y")
    if word.endswith("es"):
        out.append(word[:-2])
    if word.endswith("s"):
        out.append(word[:-1])
    return out


def _meta_topic(norms: list[str], pack: DomainPack) -> tuple[str | None, range | None]:
    for i, w in enumerate(norms):
        if w not in ("what", "which"):
            continue
        if i + 4 < len(norms) and norms[i + 2 : i + 5] == ["do", "you", "know"]:
            end = i + 5
            if end < len(norms) and norms[end] == "about":
                end += 1
            topic_word = norms[i + 1]
            for cand in _singular_candidates(topic_word):
                if pack.schema.class_by_name(cand):
                    return cand, range(i, end)
            return None, range(i, end)  # meta question about an unknown topic
    return None, None


def _tag_ending_at(tags: list[SemanticTag], index: int) -> SemanticTag | None:
    for tag in tags:
        if tag.span.end == index:
            return tag
    return None


def _tag_starting_at(tags: list[SemanticTag], index: int) -> SemanticTag | None:
    for tag in tags:
        if tag.span.start == index:
            return tag
    return None


def _skip_punct(tokens: list[Token], index: int, step: int) -> int:
    while 0 <= index < len(tokens) and tokens[index].category == PUNCT:
        index += step
    return index


def _detect_correction(
    tokens: list[Token], tags: list[SemanticTag], context: "DialogueContext | None"
) -> tuple[CorrectionAct | None, set[int], bool]:
    """Returns (correction, consumed token indexes, deny_suppressed)."""
    norms = [t.norm for t in tokens]
    for k, w in enumerate(norms):
        if w != "not":
            continue
        before = _skip_punct(tokens, k - 1, -1)
        after = _skip_punct(tokens, k + 1, +1)
        new_tag = _tag_ending_at(tags, before + 1) if before >= 0 else None
        old_tag = _tag_starting_at(tags, after) if after < len(tokens) else None
        if new_tag and old_tag and new_tag.semantic_class == old_tag.semantic_class:
            # "[i said] X(,) not Y"
            consumed = set(range(new_tag.span.start, old_tag.span.end))
            i = _skip_punct(tokens, new_tag.span.start - 1, -1)
            if i >= 1 and norms[i] == "said" and norms[i - 1] == "i":
                consumed.update((i - 1, i))
            return (
                CorrectionAct(
                    old_value=old_tag.value, new_value=new_tag.value, semantic_class=old_tag.semantic_class
                ),
                consumed,
                False,
            )
        if old_tag and not new_tag:
            # "not Y , X"
            after_old = _skip_punct(tokens, old_tag.span.end, +1)
            x_tag = _tag_starting_at(tags, after_old)
            if x_tag and x_tag.semantic_class == old_tag.semantic_class:
                consumed = set(range(k, x_tag.span.end))
                return (
                    CorrectionAct(
                        old_value=old_tag.value, new_value=x_tag.value, semantic_class=old_tag.semantic_class
                    ),
                    consumed,
                    False,
                )
    # "no , X" replaces the current value of X's class when one is on record
    if context is not None:
        for k, w in enumerate(norms):
            if w != "no":
                continue
            after = _skip_punct(tokens, k + 1, +1)
            x_tag = _tag_starting_at(tags, after)
            if x_tag is None:
                continue
            old = _lookup_old_value(context, x_tag)
            if old is not None:
                consumed = set(range(k, x_tag.span.end))
                return (
                    CorrectionAct(old_value=old, new_value=x_tag.value, semantic_class=x_tag.semantic_class),
                    consumed,
                    True,
                )
    return None, set(), False


def _lookup_old_value(context: "DialogueContext", tag: SemanticTag) -> object | None:
    pending = context.pending_confirmation
    if pending is not None:
        field_name, value = pending
        binding = context.bindings.get(field_name)
        cls = binding.semantic_class if binding else None
        if cls == tag.semantic_class and value != tag.value:
            return value
    same_class = [b for b in context.bindings.values() if b.semantic_class == tag.semantic_class]
    if len(same_class) == 1 and same_class[0].value != tag.value:
        return same_class[0].value
    return None


def detect_acts(
    tokens: list[Token],
    tags: list[SemanticTag],
    context: "DialogueContext | None" = None,
    pack: DomainPack | None = None,
) -> ActReport:
    content = [t for t in tokens if t.category != PUNCT]
    if not content:
        return ActReport(silence=True)
    norms = [t.norm for t in tokens]
    consumed: set[int] = set()

    quit_ = False
    for i, w in enumerate(norms):
        if w in QUIT_WORDS:
            quit_ = True
            consumed.add(i)

    help_ = False
    for i, w in enumerate(norms):
        if w == "help":
            help_ = True
            consumed.add(i)
    for phrase in HELP_PHRASES:
        pos = _find_phrase(norms, phrase)
        if pos is not None:
            help_ = True
            consumed.update(range(pos, pos + len(phrase)))

    meta_query = False
    meta_topic = None
    if pack is not None:
        topic, rng = _meta_topic(norms, pack)
        if rng is not None:
            meta_query = True
            meta_topic = topic
            consumed.update(rng)

    repeat = False
    for i, w in enumerate(norms):
        if w == "repeat":
            repeat = True
            consumed.add(i)
    for phrase in REPEAT_PHRASES:
        pos = _find_phrase(norms, phrase)
        if pos is not None:
            repeat = True
            consumed.update(range(pos, pos + len(phrase)))

    dont_know = False
    for phrase in DONT_KNOW_PHRASES:
        pos = _find_phrase(norms, phrase)
        if pos is not None:
            dont_know = True
            consumed.update(range(pos, pos + len(phrase)))

    correction, corr_consumed, deny_suppressed = _detect_correction(tokens, tags, context)
    consumed.update(corr_consumed)

    affirm = False
    for i, w in enumerate(norms):
        if w in AFFIRM_WORDS and i not in consumed:
            affirm = True
            consumed.add(i)
    for phrase in AFFIRM_PHRASES:
        pos = _find_phrase(norms, phrase)
        if pos is not None:
            affirm = True
            consumed.update(range(pos, pos + len(phrase)))
    if not affirm and all(t.norm in ("ok", "okay") for t in content):
        affirm = True
        consumed.update(t.index for t in content)

    deny = False
    if not deny_suppressed:
        for i, w in enumerate(norms):
            if w in DENY_WORDS and i not in consumed:
                deny = True
                consumed.add(i)
        for phrase in DENY_PHRASES:
            pos = _find_phrase(norms, phrase)
            if pos is not None:
                deny = True
                consumed.update(range(pos, pos + len(phrase)))

    return ActReport(
        quit=quit_,
        help=help_,
        meta_query=meta_query,
        meta_topic=meta_topic,
        repeat=repeat,
        dont_know=dont_know,
        affirm=affirm,
        deny=deny,
        correction=correction,
        silence=False,
        consumed=frozenset(consumed),
    )
