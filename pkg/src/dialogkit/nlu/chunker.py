"""Finite-state phrase chunking over coarse token categories.

The chunker does not attempt full syntax: tagged spans act as NP heads, a
preposition in front of one makes a PP, verb-list words group into VPs, WH
words open question chunks, and any leftover content word becomes an UNKNOWN
chunk. Every token ends up in exactly one chunk (see docs/formats.md for the
rule table).
"""
from __future__ import annotations

from ..schema import DomainPack
from .resources import resources_for
from .types import PhraseChunk, Span, SemanticTag, Token, WORD


def chunk(tokens: list[Token], tags: list[SemanticTag], pack: DomainPack) -> list[PhraseChunk]:
    if not tokens:
        return []
    res = resources_for(pack)
    n = len(tokens)
    tag_at: dict[int, SemanticTag] = {}
    for tag in tags:
        for i in tag.span.indices():
            tag_at[i] = tag

    # Pass 1: decide a chunk kind for maximal runs.
    marks: list[tuple[str, int, int, tuple[SemanticTag, ...]]] = []  # kind, start, end, tags
    i = 0
    while i < n:
        t = tokens[i]
        word = t.norm
        if i in tag_at:
            tag = tag_at[i]
            start, end = tag.span.start, tag.span.end
            kind = "NP"
            # absorb the classifier noun and article in front ("the flight 472"),
            # then a leading preposition turns the whole thing into a PP
            j = start
            while j > 0 and not _claimed(marks, j - 1) and (
                tokens[j - 1].norm in res.determiners or tokens[j - 1].norm in res.known_nouns
            ):
                j -= 1
            if j > 0 and tokens[j - 1].norm in res.prepositions and not _claimed(marks, j - 1):
                j -= 1
                kind = "PP"
            marks.append((kind, j, end, (tag,)))
            i = end
            continue
        if word in res.wh_words:
            end = i + 1
            if end < n and end not in tag_at and tokens[end].norm in res.known_nouns:
                end += 1
            marks.append(("WH", i, end, ()))
            i = end
            continue
        if word in res.verbs:
            end = i + 1
            while end < n and end not in tag_at and tokens[end].norm in res.verbs:
                end += 1
            marks.append(("VP", i, end, ()))
            i = end
            continue
        if t.category == WORD and not res.is_known(word) and word not in res.prepositions and word not in res.determiners:
            start = i
            if i > 0 and tokens[i - 1].norm in res.determiners and not _claimed(marks, i - 1):
                start = i - 1
            end = i + 1
            marks.append(("UNKNOWN", start, end, ()))
            i = end
            continue
        i += 1

    # Pass 2: attach unclaimed glue tokens (function words, punctuation) to
    # the following chunk, or the preceding one at the end of the utterance.
    marks.sort(key=lambda m: m[1])
    chunks: list[PhraseChunk] = []
    if not marks:
        return [PhraseChunk(kind="UNKNOWN", span=Span(0, n))]
    cursor = 0
    for kind, start, end, chunk_tags in marks:
        s = cursor if cursor < start else start
        chunks.append(PhraseChunk(kind=kind, span=Span(s, end), tags=chunk_tags))
        cursor = end
    if cursor < n:
        last = chunks[-1]
        chunks[-1] = PhraseChunk(kind=last.kind, span=Span(last.span.start, n), tags=last.tags)
    return chunks


def _claimed(marks: list, index: int) -> bool:
    return any(start <= index < end for _, start, end, _ in marks)
