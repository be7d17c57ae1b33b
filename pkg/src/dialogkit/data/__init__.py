"""Framework-level data files (word lists, default rendering rules)."""
from importlib import resources


def read_data_file(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def read_word_set(name: str) -> frozenset[str]:
    words = set()
    for line in read_data_file(name).splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.update(w.lower() for w in line.split())
    return frozenset(words)
