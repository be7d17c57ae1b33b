import pytest

from dialogkit.confparse import parse_delimited, parse_sections, split_list
from dialogkit.errors import ParseError


def write(tmp_path, text):
    path = tmp_path / "sample.conf"
    path.write_text(text, encoding="utf-8")
    return path


def test_sections_and_entries(tmp_path):
    path = write(
        tmp_path,
        """
        # comment
        [domain]
        name = flights
        label = flight info

        [field departure_city]
        class = city
        refs = departure city; origin
        """,
    )
    sections = parse_sections(path)
    assert [s.name for s in sections] == ["domain", "field"]
    assert sections[0].get("name") == "flights"
    assert sections[1].arg == "departure_city"
    assert split_list(sections[1].get("refs")) == ["departure city", "origin"]


def test_repeated_keys_keep_order(tmp_path):
    path = write(tmp_path, "[mandatory]\nset = a\nset = b c\n")
    (sec,) = parse_sections(path)
    assert sec.get_all("set") == ["a", "b c"]


def test_entry_before_section_fails(tmp_path):
    path = write(tmp_path, "name = flights\n")
    with pytest.raises(ParseError) as err:
        parse_sections(path)
    assert err.value.line == 1


def test_malformed_header_reports_location(tmp_path):
    path = write(tmp_path, "[domain\nname = x\n")
    with pytest.raises(ParseError) as err:
        parse_sections(path)
    assert err.value.line == 1
    assert "header" in err.value.reason


def test_missing_equals_fails(tmp_path):
    path = write(tmp_path, "[domain]\njust words\n")
    with pytest.raises(ParseError) as err:
        parse_sections(path)
    assert err.value.line == 2


def test_delimited_records(tmp_path):
    path = tmp_path / "lexicon.conf"
    path.write_text("# c\nbig apple|city|New York\n", encoding="utf-8")
    records = parse_delimited(path, 3)
    assert records == [(["big apple", "city", "New York"], 2)]


def test_delimited_wrong_arity(tmp_path):
    path = tmp_path / "lexicon.conf"
    path.write_text("only|two\n", encoding="utf-8")
    with pytest.raises(ParseError):
        parse_delimited(path, 3)
