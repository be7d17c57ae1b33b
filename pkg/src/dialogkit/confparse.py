"""Reader for the line-oriented sectioned key-value files used by domain packs.

Grammar (see docs/formats.md):

    file    := line*
    line    := blank | comment | header | entry
    comment := '#' ...
    header  := '[' NAME ( ' ' ARG )? ']'
    entry   := KEY '=' VALUE            # VALUE is the rest of the line, stripped

Keys may repeat within a section; order is preserved.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError

_HEADER_RE = re.compile(r"^\[\s*([A-Za-z0-9_.-]+)(?:\s+(.+?))?\s*\]$")


@dataclass
class Section:
    name: str
    arg: str
    line: int
    file: str
    entries: list[tuple[str, str, int]] = field(default_factory=list)

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v, _ in self.entries:
            if k == key:
                return v
        return default

    def require(self, key: str) -> str:
        value = self.get(key)
        if value is None:
            raise ParseError(self.file, self.line, f"section [{self.header()}] is missing key '{key}'")
        return value

    def get_all(self, key: str) -> list[str]:
        return [v for k, v, _ in self.entries if k == key]

    def header(self) -> str:
        return f"{self.name} {self.arg}".strip()


def parse_sections(path: str | Path) -> list[Section]:
    path = Path(path)
    return parse_sections_text(path.read_text(encoding="utf-8"), str(path))


def parse_sections_text(text: str, filename: str) -> list[Section]:
    sections: list[Section] = []
    current: Section | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            m = _HEADER_RE.match(line)
            if not m:
                raise ParseError(filename, lineno, f"malformed section header: {line!r}")
            current = Section(name=m.group(1), arg=m.group(2) or "", line=lineno, file=filename)
            sections.append(current)
            continue
        if "=" not in line:
            raise ParseError(filename, lineno, f"expected 'key = value', got: {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ParseError(filename, lineno, "empty key")
        if current is None:
            raise ParseError(filename, lineno, "entry appears before any [section] header")
        current.entries.append((key, value.strip(), lineno))
    return sections


def parse_delimited(path: str | Path, n_fields: int, sep: str = "|") -> list[tuple[list[str], int]]:
    """Parse a pipe-delimited file (lexicon format): one record per line."""
    path = Path(path)
    records: list[tuple[list[str], int]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(sep)]
        if len(parts) != n_fields:
            raise ParseError(str(path), lineno, f"expected {n_fields} '{sep}'-separated fields, got {len(parts)}")
        records.append((parts, lineno))
    return records


def split_list(value: str, sep: str = ";") -> list[str]:
    """Split a config value on `sep`, dropping empty items."""
    return [item.strip() for item in value.split(sep) if item.strip()]


def split_words(value: str) -> list[str]:
    return value.split()
