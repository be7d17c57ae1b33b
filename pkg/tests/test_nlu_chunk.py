from hypothesis import given, settings
from hypothesis import strategies as st

from dialogkit.nlu import annotate, chunk
from dialogkit.schema import load_domain_pack
from dialogkit.service import packaged_pack_root

PACK = load_domain_pack(packaged_pack_root("flights"))


def kinds(utterance):
    tokens, tags = annotate(utterance, PACK)
    return [c.kind for c in chunk(tokens, tags, PACK)]


def test_flight_number_question():
    assert kinds("when does flight four seven two arrive") == ["WH", "VP", "NP", "VP"]


def test_unknown_word_chunk():
    tokens, tags = annotate("what time does my plane leave", PACK)
    chunks = chunk(tokens, tags, PACK)
    assert [c.kind for c in chunks] == ["WH", "VP", "UNKNOWN", "VP"]
    unknown = chunks[2]
    covered = " ".join(tokens[i].text for i in unknown.span.indices())
    assert "plane" in covered


def test_single_city_is_np():
    tokens, tags = annotate("Newark", PACK)
    chunks = chunk(tokens, tags, PACK)
    assert [c.kind for c in chunks] == ["NP"]
    assert chunks[0].tags[0].value == "Newark"


def test_preposition_makes_pp():
    tokens, tags = annotate("from Big Apple", PACK)
    chunks = chunk(tokens, tags, PACK)
    assert [c.kind for c in chunks] == ["PP"]
    assert chunks[0].span.start == 0
    assert chunks[0].tags[0].value == "New York"


def test_empty():
    assert chunk([], [], PACK) == []


WORDS = st.sampled_from(
    "when does flight four seven two arrive from dallas to newark the plane "
    "leave my around ten thirty am what gizmo".split()
)


@given(st.lists(WORDS, min_size=1, max_size=10))
@settings(max_examples=200, deadline=None)
def test_chunks_partition_tokens(words):
    utterance = " ".join(words)
    tokens, tags = annotate(utterance, PACK)
    chunks = chunk(tokens, tags, PACK)
    covered = []
    for c in chunks:
        covered.extend(c.span.indices())
    assert covered == list(range(len(tokens)))  # exactly once, in order
    # every tag lies within exactly one chunk
    for tag in tags:
        owners = [c for c in chunks if tag.span.start >= c.span.start and tag.span.end <= c.span.end]
        assert len(owners) == 1
