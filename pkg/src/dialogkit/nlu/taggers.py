"""Semantic taggers: clock times and dates first, then the domain lexicon by
longest match, then number-pattern classes. Tags never overlap; at each
position the longest (then leftmost) reading wins."""
from __future__ import annotations

import re

from ..schema import DomainPack
from .types import NUMBER, Span, SemanticTag, Token

HOUR_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
}
MINUTE_TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
MINUTE_TENS = {"twenty": 20, "thirty": 30, "forty": 40, "fifty": 50}
UNIT_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4,
    "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9,
}
DIGIT_WORDS = {"zero": 0, "oh": 0, **UNIT_WORDS}
APPROX_WORDS = frozenset({"around", "about", "approximately", "roughly", "near"})
_AM_TOKENS = frozenset({"am", "a"})
_PM_TOKENS = frozenset({"pm", "p"})
_CLOCK_RE = re.compile(r"^(\d{1,2}):(\d{2})$")
_DATE_WORDS = frozenset(
    {
        "today", "tomorrow", "yesterday", "tonight",
        "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
    }
)

TIME_WORDS = (
    set(HOUR_WORDS) | set(MINUTE_TEENS) | set(MINUTE_TENS) | set(DIGIT_WORDS)
    | {"noon", "midday", "midnight", "o'clock", "oclock", "am", "pm", "a", "m", "p"}
)


def _meridiem_at(tokens: list[Token], i: int) -> tuple[str | None, int]:
    """Return ('am'|'pm', tokens consumed) for a meridiem at position i."""
    if i >= len(tokens):
        return None, 0
    t0 = tokens[i].norm.replace(".", "")
    if t0 in ("am", "pm"):
        return t0, 1
    if i + 1 < len(tokens):
        t1 = tokens[i + 1].norm.replace(".", "")
        if t0 in _AM_TOKENS and t1 == "m":
            return "am", 2
        if t0 in _PM_TOKENS and t1 == "m":
            return "pm", 2
    if tokens[i].norm == "in" and i + 2 < len(tokens) and tokens[i + 1].norm == "the":
        word = tokens[i + 2].norm
        if word == "morning":
            return "am", 3
        if word in ("afternoon", "evening"):
            return "pm", 3
    if tokens[i].norm == "at" and i + 1 < len(tokens) and tokens[i + 1].norm == "night":
        return "pm", 2
    return None, 0


def _spelled_minutes(tokens: list[Token], i: int) -> tuple[int | None, int]:
    if i >= len(tokens):
        return None, 0
    w = tokens[i].norm
    if w in MINUTE_TENS:
        if i + 1 < len(tokens) and tokens[i + 1].norm in UNIT_WORDS:
            return MINUTE_TENS[w] + UNIT_WORDS[tokens[i + 1].norm], 2
        return MINUTE_TENS[w], 1
    if w in MINUTE_TEENS:
        return MINUTE_TEENS[w], 1
    if w == "oh" and i + 1 < len(tokens) and tokens[i + 1].norm in UNIT_WORDS:
        return UNIT_WORDS[tokens[i + 1].norm], 2
    return None, 0


def _apply_meridiem(hour: int, minute: int, meridiem: str | None) -> int | None:
    if hour > 23 or minute > 59:
        return None
    if meridiem == "am":
        hour = 0 if hour == 12 else hour
    elif meridiem == "pm":
        hour = hour if hour >= 12 else hour + 12
    if hour > 23:
        return None
    return hour * 60 + minute


def _snap_to_grid(minutes: int) -> int:
    return ((minutes + 2) // 5) * 5 % (24 * 60)


def _match_time(tokens: list[Token], i: int) -> tuple[int, int] | None:
    """Try to read a clock time starting at token i.

    Returns (minutes after midnight, tokens consumed) or None.
    """
    t = tokens[i]
    word = t.norm

    if word in ("noon", "midday"):
        return 720, 1
    if word == "midnight":
        return 0, 1

    m = _CLOCK_RE.match(t.text)
    if m:
        hour, minute = int(m.group(1)), int(m.group(2))
        meridiem, used = _meridiem_at(tokens, i + 1)
        value = _apply_meridiem(hour, minute, meridiem)
        return (value, 1 + used) if value is not None else None

    hour: int | None = None
    consumed = 0
    if word in HOUR_WORDS:
        hour, consumed = HOUR_WORDS[word], 1
    elif t.category == NUMBER and ":" not in t.text and len(t.text) <= 2:
        hour, consumed = int(t.text), 1
    if hour is None:
        return None

    j = i + consumed
    # hour + spelled minutes (+ meridiem)
    minute, used = _spelled_minutes(tokens, j)
    if minute is not None:
        meridiem, m_used = _meridiem_at(tokens, j + used)
        value = _apply_meridiem(hour, minute, meridiem)
        if value is not None:
            return value, consumed + used + m_used
    # hour + o'clock (+ meridiem)
    if j < len(tokens) and tokens[j].norm in ("o'clock", "oclock"):
        meridiem, m_used = _meridiem_at(tokens, j + 1)
        value = _apply_meridiem(hour, 0, meridiem)
        if value is not None:
            return value, consumed + 1 + m_used
    # hour + meridiem
    meridiem, m_used = _meridiem_at(tokens, j)
    if meridiem is not None:
        value = _apply_meridiem(hour, 0, meridiem)
        if value is not None:
            return value, consumed + m_used
    # bare numeric hour right after "at": "arriving at 10"
    if t.category == NUMBER and i > 0 and tokens[i - 1].norm == "at" and hour <= 23:
        return hour * 60, consumed
    return None


def _is_approx(tokens: list[Token], start: int) -> bool:
    return start > 0 and tokens[start - 1].norm in APPROX_WORDS


def _tag_times(tokens: list[Token], taken: list[bool], tags: list[SemanticTag]) -> None:
    i = 0
    while i < len(tokens):
        if taken[i]:
            i += 1
            continue
        hit = _match_time(tokens, i)
        if hit is None:
            i += 1
            continue
        value, consumed = hit
        span = Span(i, i + consumed)
        tags.append(
            SemanticTag(
                span=span,
                semantic_class="time_of_day",
                value=_snap_to_grid(value),
                source="domain_independent",
                approx=_is_approx(tokens, i),
            )
        )
        for k in span.indices():
            taken[k] = True
        i += consumed


def _tag_dates(tokens: list[Token], taken: list[bool], tags: list[SemanticTag]) -> None:
    for t in tokens:
        if not taken[t.index] and t.norm in _DATE_WORDS:
            tags.append(
                SemanticTag(
                    span=Span(t.index, t.index + 1),
                    semantic_class="date",
                    value=t.norm,
                    source="domain_independent",
                )
            )
            taken[t.index] = True


def _tag_lexicon(tokens: list[Token], taken: list[bool], tags: list[SemanticTag], pack: DomainPack) -> None:
    # Surfaces grouped by token length, longest first; leftmost start wins.
    by_len: dict[int, dict[str, list]] = {}
    for entry in pack.lexicon:
        key = tuple(entry.surface.split())
        by_len.setdefault(len(key), {}).setdefault(" ".join(key), []).append(entry)
    lengths = sorted(by_len, reverse=True)

    i = 0
    while i < len(tokens):
        if taken[i]:
            i += 1
            continue
        matched = False
        for length in lengths:
            if i + length > len(tokens):
                continue
            if any(taken[k] for k in range(i, i + length)):
                continue
            surface = " ".join(tokens[k].norm for k in range(i, i + length))
            entries = by_len[length].get(surface)
            if not entries:
                continue
            alternates = tuple((e.canonical, e.semantic_class) for e in entries)
            tags.append(
                SemanticTag(
                    span=Span(i, i + length),
                    semantic_class=entries[0].semantic_class,
                    value=entries[0].canonical,
                    source="domain_specific",
                    alternates=alternates,
                )
            )
            for k in range(i, i + length):
                taken[k] = True
            i += length
            matched = True
            break
        if not matched:
            i += 1


def _match_digit_run(tokens: list[Token], i: int, taken: list[bool], max_len: int) -> tuple[int, int] | None:
    """Read a maximal spelled-digit run ("four seven two") from position i.

    Runs longer than max_len are rejected outright rather than truncated, so
    a four-digit PIN never half-matches a three-digit number class.
    """
    if i > 0 and not taken[i - 1] and tokens[i - 1].norm in DIGIT_WORDS:
        return None  # mid-run start; the full run was already rejected
    digits: list[int] = []
    j = i
    while j < len(tokens) and not taken[j] and tokens[j].norm in DIGIT_WORDS:
        digits.append(DIGIT_WORDS[tokens[j].norm])
        j += 1
    if not digits or len(digits) > max_len:
        return None
    return int("".join(str(d) for d in digits)), j - i


def _tag_number_classes(tokens: list[Token], taken: list[bool], tags: list[SemanticTag], pack: DomainPack) -> None:
    number_classes = [c for c in pack.schema.classes if c.kind == "number"]
    if not number_classes:
        return
    for spec in number_classes:
        digits = spec.digits or 3
        i = 0
        while i < len(tokens):
            if taken[i]:
                i += 1
                continue
            t = tokens[i]
            cued = i > 0 and tokens[i - 1].norm in spec.cues
            value = None
            consumed = 0
            if t.category == NUMBER and ":" not in t.text:
                if len(t.text) == digits or (cued and len(t.text) <= digits):
                    value, consumed = int(t.text), 1
            else:
                run = _match_digit_run(tokens, i, taken, digits)
                if run is not None:
                    run_value, run_len = run
                    if run_len == digits or (cued and run_len <= digits):
                        value, consumed = run_value, run_len
            if value is None:
                i += 1
                continue
            span = Span(i, i + consumed)
            tags.append(
                SemanticTag(
                    span=span,
                    semantic_class=spec.name,
                    value=value,
                    source="domain_specific",
                )
            )
            for k in span.indices():
                taken[k] = True
            i += consumed


def annotate(utterance: str, pack: DomainPack) -> tuple[list[Token], list[SemanticTag]]:
    """Tokenize and tag one utterance."""
    from .tokenize import tokenize

    tokens = tokenize(utterance)
    taken = [t.category == "punct" for t in tokens]
    tags: list[SemanticTag] = []
    _tag_times(tokens, taken, tags)
    _tag_dates(tokens, taken, tags)
    _tag_lexicon(tokens, taken, tags, pack)
    _tag_number_classes(tokens, taken, tags, pack)
    tags.sort(key=lambda tag: tag.span.start)
    return tokens, tags
