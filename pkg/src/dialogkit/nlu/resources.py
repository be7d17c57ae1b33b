"""Per-pack word lists compiled once and cached.

The function-word and verb lists ship with the framework; a pack may carry
its own function-words.txt / verbs.txt to extend them. Everything else is
derived from the pack: cue words, class names, field labels, query and
action pattern vocabulary.
"""
from __future__ import annotations

from pathlib import Path

from ..data import read_word_set
from ..schema import DomainPack

_WH_WORDS = frozenset({"what", "when", "where", "which", "who", "whom", "whose", "how", "why"})
_PREPOSITIONS = frozenset(
    {"from", "to", "at", "in", "on", "of", "for", "with", "about", "around", "into", "by", "near", "over", "under", "out", "up", "off"}
)
_DETERMINERS = frozenset({"a", "an", "the", "my", "your", "his", "her", "its", "our", "their", "this", "that", "these", "those", "some", "any"})


class NluResources:
    def __init__(self, pack: DomainPack):
        self.function_words = set(read_word_set("function-words.txt"))
        self.verbs = set(read_word_set("verbs.txt"))
        for name in ("function-words.txt", "verbs.txt"):
            extra = Path(pack.root) / name
            if extra.is_file():
                words = {
                    w.lower()
                    for line in extra.read_text(encoding="utf-8").splitlines()
                    if line.strip() and not line.strip().startswith("#")
                    for w in line.split()
                }
                (self.function_words if name.startswith("function") else self.verbs).update(words)

        self.wh_words = _WH_WORDS
        self.prepositions = _PREPOSITIONS
        self.determiners = _DETERMINERS
        self.cue_words = {cue for cue, _ in pack.cue_roles}

        schema = pack.schema
        known: set[str] = set()
        for f in schema.fields:
            known.update(f.label.lower().split())
            for ref in f.refs:
                known.update(ref.lower().split())
        for c in schema.classes:
            known.add(c.name.lower())
            known.update(c.cues)
        for qt in schema.query_types:
            for pattern in qt.trigger_patterns:
                known.update(pattern)
            known.update(qt.label.lower().split())
        for action in schema.actions:
            for pattern in action.patterns:
                known.update(pattern)
        self.domain_words = known

        # Nouns a WH chunk may absorb: "what time", "which gate".
        self.known_nouns = {w for f in schema.fields for w in f.label.lower().split()} | {
            c.name.lower() for c in schema.classes
        }

    def is_function_word(self, word: str) -> bool:
        return word in self.function_words

    def is_known(self, word: str) -> bool:
        return (
            word in self.function_words
            or word in self.verbs
            or word in self.cue_words
            or word in self.domain_words
        )


# Keyed by object identity; the pack itself is kept in the value so its id
# can never be recycled onto a different pack.
_CACHE: dict[int, tuple[DomainPack, NluResources]] = {}


def resources_for(pack: DomainPack) -> NluResources:
    hit = _CACHE.get(id(pack))
    if hit is not None and hit[0] is pack:
        return hit[1]
    resources = NluResources(pack)
    _CACHE[id(pack)] = (pack, resources)
    return resources
