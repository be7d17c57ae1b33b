from hypothesis import given, settings
from hypothesis import strategies as st

from dialogkit.dialog import DialogueContext
from dialogkit.nlu import annotate, chunk, detect_acts, extract
from dialogkit.nlu.resources import resources_for
from dialogkit.schema import load_domain_pack
from dialogkit.service import packaged_pack_root

PACK = load_domain_pack(packaged_pack_root("flights"))
LIBRARY = load_domain_pack(packaged_pack_root("library"))


def extract_for(utterance, pack=PACK, context=None):
    context = context or DialogueContext()
    tokens, tags = annotate(utterance, pack)
    chunks = chunk(tokens, tags, pack)
    acts = detect_acts(tokens, tags, context, pack)
    return extract(chunks, tags, pack, context, acts, tokens)


def bindings_map(result):
    return {b.field: b.value for b in result.bindings}


def test_cue_words_bind_both_cities():
    result = extract_for("flight 472 from Dallas to Newark")
    assert bindings_map(result) == {
        "flight_number": 472,
        "departure_city": "Dallas",
        "arrival_city": "Newark",
    }
    assert result.ambiguities == ()


def test_bare_city_is_field_ambiguous():
    result = extract_for("Newark")
    assert result.bindings == ()
    (amb,) = result.ambiguities
    assert amb.kind == "field"
    assert amb.term == "Newark"
    assert amb.candidates == ("departure_city", "arrival_city")


def test_out_of_scope_term():
    result = extract_for("what time does Delta flight 472 reach Dallas?")
    assert result.out_of_scope_hits[0][0] == "Delta"
    # the legitimate parts of the utterance still extract
    assert bindings_map(result)["flight_number"] == 472
    assert bindings_map(result)["arrival_city"] == "Dallas"


def test_unknown_word():
    result = extract_for("what time does my plane leave")
    assert result.unknown_terms == ("plane",)
    assert result.query_type == "departure_info"


def test_query_type_detection():
    assert extract_for("when does it arrive").query_type == "arrival_info"
    assert extract_for("when does it take off").query_type == "departure_info"
    assert extract_for("Newark").query_type is None


def test_class_ambiguity_dickens():
    result = extract_for("Dickens", pack=LIBRARY)
    (amb,) = result.ambiguities
    assert amb.kind == "class"
    assert amb.candidates == ("author", "title")


def test_cue_resolves_class_ambiguity():
    result = extract_for("the book called Dickens", pack=LIBRARY)
    assert bindings_map(result) == {"title": "Dickens"}
    result = extract_for("books by Dickens", pack=LIBRARY)
    # class resolved to author; two authors remain, so it is lexically ambiguous
    (amb,) = result.ambiguities
    assert amb.kind == "lexical"
    assert set(amb.candidates) == {"Charles Dickens", "Monica Dickens"}


def test_approx_time_with_cue_binds_arrival():
    result = extract_for("arriving around ten thirty a m")
    (binding,) = result.bindings
    assert binding.field == "arrival_time"
    assert binding.value == 630
    assert binding.approx


def test_time_without_cue_is_field_ambiguous():
    result = extract_for("around ten thirty a m")
    (amb,) = result.ambiguities
    assert amb.kind == "field"
    assert amb.approx
    assert amb.candidates == ("departure_time", "arrival_time")


UTTERANCES = st.lists(
    st.sampled_from(
        "flight 472 from dallas to newark delta gizmo plane around ten thirty "
        "a m what when does arrive leave my the on time".split()
    ),
    max_size=10,
)


@given(UTTERANCES)
@settings(max_examples=200, deadline=None)
def test_term_accounting(words):
    """Every tagged-or-unknown term lands in exactly one bucket."""
    utterance = " ".join(words)
    context = DialogueContext()
    tokens, tags = annotate(utterance, PACK)
    chunks = chunk(tokens, tags, PACK)
    acts = detect_acts(tokens, tags, context, PACK)
    result = extract(chunks, tags, PACK, context, acts, tokens)

    res = resources_for(PACK)
    usable = {f.semantic_class for f in PACK.schema.fields}
    live_tags = [
        t
        for t in tags
        if not any(i in acts.consumed for i in t.span.indices())
        and (usable & ({cls for _, cls in t.alternates} or {t.semantic_class}))
    ]
    unknown_tokens = {
        t.norm
        for t in tokens
        if t.category == "word"
        and not any(t.index in tag.span.indices() for tag in live_tags)
        and t.index not in acts.consumed
        and not any(t.text == term or t.norm == term.lower() for term, _ in result.out_of_scope_hits)
        and not res.is_known(t.norm)
    }
    expected_terms = len(live_tags) + len(unknown_tokens) + len(result.out_of_scope_hits)
    accounted = (
        len(result.bindings)
        + len(result.ambiguities)
        + len(result.unknown_terms)
        + len(result.out_of_scope_hits)
    )
    assert accounted == expected_terms, (utterance, result)
