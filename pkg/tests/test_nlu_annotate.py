import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dialogkit.nlu import annotate, tokenize


def tag_values(tags, semantic_class):
    return [t.value for t in tags if t.semantic_class == semantic_class]


def test_tokenize_categories():
    tokens = tokenize("flight 472, at 10:30 a.m.!")
    assert [t.text for t in tokens] == ["flight", "472", ",", "at", "10:30", "a.m.", "!"]
    assert [t.category for t in tokens] == ["word", "number", "punct", "word", "number", "word", "punct"]
    assert [t.index for t in tokens] == list(range(7))


def test_empty_utterance(flights_pack):
    assert annotate("", flights_pack) == ([], [])


# Each row: (utterance, minutes after midnight). The arithmetic oracle:
# hours*60 + minutes, with pm adding 720 for hours below 12.
TIME_CASES = [
    ("arriving around ten thirty a m", 10 * 60 + 30),
    ("ten thirty am", 630),
    ("10:30 am", 630),
    ("10:30 a.m.", 630),
    ("10:32 am", 630),  # snapped down to the 5-minute grid
    ("10:33 am", 635),  # snapped up
    ("ten thirty p m", 10 * 60 + 30 + 720),
    ("twelve thirty pm", 750),
    ("twelve oh five am", 5),
    ("seven fifteen in the evening", 7 * 60 + 15 + 720),
    ("ten o'clock", 600),
    ("ten am", 600),
    ("7 pm", 19 * 60),
    ("at 10", 600),
    ("noon", 720),
    ("midnight", 0),
    ("22:15", 22 * 60 + 15),
    ("ten forty five am", 645),
]


@pytest.mark.parametrize("utterance,expected", TIME_CASES)
def test_time_normalization(flights_pack, utterance, expected):
    _, tags = annotate(utterance, flights_pack)
    assert tag_values(tags, "time_of_day") == [expected], utterance


def test_approx_flag(flights_pack):
    _, tags = annotate("arriving around ten thirty a m", flights_pack)
    (tag,) = [t for t in tags if t.semantic_class == "time_of_day"]
    assert tag.approx
    _, tags = annotate("arriving at ten thirty a m", flights_pack)
    (tag,) = [t for t in tags if t.semantic_class == "time_of_day"]
    assert not tag.approx


def test_big_apple_spans_two_tokens(flights_pack):
    tokens, tags = annotate("from Big Apple", flights_pack)
    (tag,) = tags
    assert tag.semantic_class == "city"
    assert tag.value == "New York"
    assert (tag.span.start, tag.span.end) == (1, 3)
    assert tag.surface(tokens) == "Big Apple"


def test_longest_match_wins(flights_pack):
    _, tags = annotate("new york city", flights_pack)
    (tag,) = tags
    assert tag.value == "New York"
    assert tag.span.end - tag.span.start == 3


def test_spelled_flight_number(flights_pack):
    _, tags = annotate("flight four seven two", flights_pack)
    assert tag_values(tags, "flight_number") == [472]


def test_cued_short_number(flights_pack):
    _, tags = annotate("flight 47", flights_pack)
    assert tag_values(tags, "flight_number") == [47]
    _, tags = annotate("47 dollars", flights_pack)
    assert tag_values(tags, "flight_number") == []


def test_four_digit_run_is_not_a_flight_number(flights_pack):
    _, tags = annotate("one two three four", flights_pack)
    assert tag_values(tags, "flight_number") == []


def test_status_lexicon(flights_pack):
    _, tags = annotate("is it on time or delayed", flights_pack)
    assert tag_values(tags, "status") == ["on time", "delayed"]


def test_date_words(flights_pack):
    _, tags = annotate("arriving tomorrow", flights_pack)
    assert tag_values(tags, "date") == ["tomorrow"]


WORDS = st.sampled_from(
    "flight from to dallas dulles newark big apple around ten thirty a m pm "
    "four seven two at noon on time delayed what when arrive leaves the and".split()
)


@given(st.lists(WORDS, max_size=12))
@settings(max_examples=200, deadline=None)
def test_tags_never_overlap_and_are_ordered(words):
    from dialogkit.schema import load_domain_pack
    from dialogkit.service import packaged_pack_root

    pack = load_domain_pack(packaged_pack_root("flights"))
    utterance = " ".join(words)
    tokens, tags = annotate(utterance, pack)
    for a, b in zip(tags, tags[1:]):
        assert a.span.end <= b.span.start
    for tag in tags:
        assert 0 <= tag.span.start < tag.span.end <= len(tokens)
        assert tag.value not in ("", None)
    # purity: same input, same output
    assert annotate(utterance, pack) == (tokens, tags)
