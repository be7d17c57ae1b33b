"""Whitespace-and-punctuation tokenizer.

Edge punctuation becomes separate punct tokens; word-internal apostrophes,
periods, and colons stay put so that "don't", "a.m." and "10:30" survive as
single tokens.
"""
from __future__ import annotations

import re

from .types import NUMBER, PUNCT, WORD, Token

_PUNCT_CHARS = ".,?!;:\"()'"
_NUMBERISH = re.compile(r"^\d+(:\d+)?$")


def _category(piece: str) -> str:
    if all(c in _PUNCT_CHARS for c in piece):
        return PUNCT
    if _NUMBERISH.match(piece):
        return NUMBER
    return WORD


def tokenize(text: str) -> list[Token]:
    pieces: list[str] = []
    for raw in text.split():
        head: list[str] = []
        tail: list[str] = []
        while raw and raw[0] in _PUNCT_CHARS:
            head.append(raw[0])
            raw = raw[1:]
        # keep a trailing period attached to abbreviations like "a.m."
        while raw and raw[-1] in _PUNCT_CHARS and not (raw[-1] == "." and "." in raw[:-1]):
            tail.append(raw[-1])
            raw = raw[:-1]
        pieces.extend(head)
        if raw:
            pieces.append(raw)
        pieces.extend(reversed(tail))
    return [Token(text=p, index=i, category=_category(p)) for i, p in enumerate(pieces)]
