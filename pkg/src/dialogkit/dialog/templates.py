"""Formatting helpers for interaction templates: clock times, row subjects,
and enumeration lines."""
from __future__ import annotations

import string

from ..schema import DomainPack


def fmt_minutes(minutes: int) -> str:
    minutes = int(minutes) % (24 * 60)
    hour, mm = divmod(minutes, 60)
    suffix = "am" if hour < 12 else "pm"
    hour12 = hour % 12 or 12
    return f"{hour12}:{mm:02d} {suffix}"


def fmt_value(value, semantic_class: str | None) -> str:
    if semantic_class == "time_of_day":
        return fmt_minutes(int(value))
    return str(value)


def fmt_window(minutes: int) -> str:
    hours, rest = divmod(minutes, 60)
    if hours and rest:
        return f"within {hours} hours {rest} minutes"
    if hours:
        return f"within {hours} hour{'s' if hours != 1 else ''}"
    return f"within {rest} minutes"


def pluralize(word: str) -> str:
    if word.endswith("y") and word[-2:-1] not in "aeiou":
        return word[:-1] + "ies"
    if word.endswith(("s", "x", "ch", "sh")):
        return word + "es"
    return word + "s"


def row_fields(row: tuple, pack: DomainPack) -> dict[str, object]:
    """Map a result row tuple onto schema field names via the column order."""
    by_column = {name: row[i] for i, (name, _) in enumerate(pack.scrape.columns)}
    out: dict[str, object] = {}
    for f in pack.schema.fields:
        if f.db_column in by_column:
            out[f.name] = by_column[f.db_column]
    return out


def _subject_field_names(pack: DomainPack) -> set[str]:
    fmt = pack.schema.subject_format
    return {name for _, name, _, _ in string.Formatter().parse(fmt) if name}


def subject_text(row: tuple, pack: DomainPack) -> str:
    fields = row_fields(row, pack)
    fmt = pack.schema.subject_format
    if not fmt:
        first = pack.schema.fields[0]
        return f"{first.label} {fmt_value(fields.get(first.name, '?'), first.semantic_class)}"
    values = {
        f.name: fmt_value(fields[f.name], f.semantic_class)
        for f in pack.schema.fields
        if f.name in fields
    }
    try:
        return fmt.format(**values)
    except KeyError:
        return fmt


def row_line(row: tuple, pack: DomainPack) -> str:
    """One enumeration line: the subject plus the remaining field values."""
    fields = row_fields(row, pack)
    in_subject = _subject_field_names(pack)
    rest = [
        f"{f.label} {fmt_value(fields[f.name], f.semantic_class)}"
        for f in pack.schema.fields
        if f.name in fields and f.name not in in_subject
    ]
    text = subject_text(row, pack)
    if rest:
        text += ", " + ", ".join(rest)
    return text


def answer_phrases(row: tuple, pack: DomainPack, query_type: str | None) -> tuple[str, ...]:
    """Answer-field readouts for a single-match report."""
    fields = row_fields(row, pack)
    schema = pack.schema
    if query_type:
        for qt in schema.query_types:
            if qt.name == query_type:
                names = [n for n in qt.answer_fields if n in fields]
                break
        else:
            names = []
    else:
        in_subject = _subject_field_names(pack)
        names = [f.name for f in schema.fields if f.name in fields and f.name not in in_subject]
    phrases = []
    for name in names:
        f = schema.field_by_name(name)
        phrases.append(f"the {f.label} is {fmt_value(fields[name], f.semantic_class)}")
    return tuple(phrases)
