"""Domain pack loading.

A domain pack is a directory of seven plain-text files (schema.conf,
db-map.conf, lexicon.conf, consistency.conf, render-rules.conf, help.conf,
scrape.conf) describing everything the engine needs to run one application:
its fields and semantic classes, query types, mandatory field sets,
consistency rules, the user vocabulary, rendering rules, help texts, and the
web-form description for the CGI back-end.  Packs are immutable after load
and safe to share across sessions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .confparse import Section, parse_delimited, parse_sections, split_list, split_words
from .errors import DanglingReference, MissingFile, ParseError

PACK_FILES = (
    "schema.conf",
    "db-map.conf",
    "lexicon.conf",
    "consistency.conf",
    "render-rules.conf",
    "help.conf",
    "scrape.conf",
)

# Semantic classes the framework itself can produce values for.
BUILTIN_CLASSES = ("time_of_day", "date", "place")

CLASS_KINDS = ("builtin", "lexicon", "number")

RELATIONS = ("not_equal", "less_than", "greater_than")


@dataclass(frozen=True)
class ClassSpec:
    name: str
    kind: str  # builtin | lexicon | number
    digits: int | None = None
    cues: tuple[str, ...] = ()


@dataclass(frozen=True)
class FieldSpec:
    name: str
    semantic_class: str
    prompt_text: str
    db_column: str
    cgi_param: str | None = None
    cue_role: str | None = None  # e.g. departure / arrival
    refs: tuple[str, ...] = ()  # phrases a user may answer a clarification with

    @property
    def label(self) -> str:
        return self.name.replace("_", " ")


@dataclass(frozen=True)
class LexiconEntry:
    surface: str  # lowercase match key
    semantic_class: str
    canonical: str


@dataclass(frozen=True)
class ConsistencyRule:
    id: str
    relation: str  # not_equal | less_than | greater_than
    left_field: str
    right_field: str
    message: str


@dataclass(frozen=True)
class QueryTypeSpec:
    name: str
    label: str
    trigger_patterns: tuple[tuple[str, ...], ...]  # token sequences
    answer_fields: tuple[str, ...]


@dataclass(frozen=True)
class RelaxPolicy:
    field: str
    widen_steps: tuple[int, ...]


@dataclass(frozen=True)
class ActionSpec:
    """A post-success action guarded by the demo PIN check."""

    name: str
    label: str
    patterns: tuple[tuple[str, ...], ...]
    notice: str
    pins: tuple[str, ...]


@dataclass(frozen=True)
class ApplicationSchema:
    domain_name: str
    domain_label: str
    dataset_file: str | None
    subject_format: str
    fields: tuple[FieldSpec, ...]
    classes: tuple[ClassSpec, ...]
    query_types: tuple[QueryTypeSpec, ...]
    mandatory_sets: tuple[tuple[str, ...], ...]
    consistency_rules: tuple[ConsistencyRule, ...]
    out_of_scope_terms: tuple[tuple[tuple[str, ...], str], ...]  # (token seq, explanation)
    relaxable_fields: tuple[RelaxPolicy, ...]
    actions: tuple[ActionSpec, ...] = ()

    def field_by_name(self, name: str) -> FieldSpec:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)

    def field_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fields)

    def fields_of_class(self, semantic_class: str) -> tuple[FieldSpec, ...]:
        return tuple(f for f in self.fields if f.semantic_class == semantic_class)

    def class_by_name(self, name: str) -> ClassSpec | None:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def relax_policy(self, field_name: str) -> RelaxPolicy | None:
        for p in self.relaxable_fields:
            if p.field == field_name:
                return p
        return None


@dataclass(frozen=True)
class CgiFormSpec:
    form_id: str
    url_path: str
    hidden_params: tuple[tuple[str, str], ...]  # includes fltAns-style selector
    params: tuple[str, ...]  # full ordered param list the form accepts
    required_params: tuple[str, ...]


@dataclass(frozen=True)
class ScrapeSpec:
    """How to build requests for, and read result pages from, the CGI site."""

    url_path: str
    table_start: str
    table_end: str
    row_start: str
    row_end: str
    cell_start: str
    cell_end: str
    count_start: str
    count_end: str
    no_match_marker: str
    columns: tuple[tuple[str, str], ...]  # (column name, text|number|minutes)
    window_codes: tuple[tuple[int, str], ...]  # (minutes, wire code)
    forms: tuple[CgiFormSpec, ...]

    def window_code(self, minutes: int) -> str:
        for m, code in self.window_codes:
            if m == minutes:
                return code
        raise KeyError(f"no wire code for a {minutes}-minute window")

    def window_minutes(self, code: str) -> int:
        for m, c in self.window_codes:
            if c == code:
                return m
        raise KeyError(f"unknown window code {code!r}")


@dataclass(frozen=True)
class RenderRule:
    act: str
    present: tuple[str, ...] = ()  # slots that must be present
    equals: tuple[tuple[str, str], ...] = ()  # slot must equal value
    output: str = ""
    variants: tuple[str, ...] = ()


@dataclass(frozen=True)
class HelpEntry:
    state: str  # "" = any
    field: str  # "" = any
    text: str


@dataclass(frozen=True)
class DomainPack:
    root: str
    schema: ApplicationSchema
    lexicon: tuple[LexiconEntry, ...]
    render_rules: tuple[RenderRule, ...]
    help_entries: tuple[HelpEntry, ...]
    scrape: ScrapeSpec
    cue_roles: tuple[tuple[str, str], ...]  # cue word -> role, pack additions last

    def cue_role_of(self, word: str) -> str | None:
        for cue, role in self.cue_roles:
            if cue == word:
                return role
        return None

    def lexicon_values(self, semantic_class: str) -> tuple[str, ...]:
        seen: list[str] = []
        for entry in self.lexicon:
            if entry.semantic_class == semantic_class and entry.canonical not in seen:
                seen.append(entry.canonical)
        return tuple(seen)


def resolve_user_term(
    term: str,
    class_filter: str | None,
    lexicon: tuple[LexiconEntry, ...] | list[LexiconEntry],
) -> list[tuple[str, str]]:
    """Map a user surface term to (canonical, semantic_class) candidates.

    Matching is case-insensitive and exact over surface keys; results keep
    lexicon file order.  An empty list means no match.
    """
    key = " ".join(term.lower().split())
    out: list[tuple[str, str]] = []
    for entry in lexicon:
        if entry.surface == key and (class_filter is None or entry.semantic_class == class_filter):
            out.append((entry.canonical, entry.semantic_class))
    return out


def _require_file(root: Path, name: str) -> Path:
    path = root / name
    if not path.is_file():
        raise MissingFile(name.removesuffix(".conf"), str(root))
    return path


def _parse_schema(path: Path) -> tuple[ApplicationSchema, list[tuple[str, str]]]:
    sections = parse_sections(path)
    fname = str(path)

    domain_name = ""
    domain_label = ""
    dataset_file: str | None = None
    subject_format = ""
    classes: list[ClassSpec] = []
    fields: list[FieldSpec] = []  # db columns filled in later from db-map
    field_sections: list[Section] = []
    query_types: list[QueryTypeSpec] = []
    mandatory_sets: list[tuple[str, ...]] = []
    out_of_scope: list[tuple[tuple[str, ...], str]] = []
    relax: list[RelaxPolicy] = []
    actions: list[ActionSpec] = []
    extra_cues: list[tuple[str, str]] = []

    for sec in sections:
        if sec.name == "domain":
            domain_name = sec.require("name")
            domain_label = sec.get("label", domain_name) or domain_name
            dataset_file = sec.get("dataset")
            subject_format = sec.get("subject", "") or ""
        elif sec.name == "class":
            if not sec.arg:
                raise ParseError(fname, sec.line, "[class] needs a name argument")
            kind = sec.require("kind")
            if kind not in CLASS_KINDS:
                raise ParseError(fname, sec.line, f"unknown class kind {kind!r}")
            digits = sec.get("digits")
            classes.append(
                ClassSpec(
                    name=sec.arg,
                    kind=kind,
                    digits=int(digits) if digits else None,
                    cues=tuple(split_list(sec.get("cues", "") or "")),
                )
            )
        elif sec.name == "field":
            if not sec.arg:
                raise ParseError(fname, sec.line, "[field] needs a name argument")
            field_sections.append(sec)
        elif sec.name == "query":
            if not sec.arg:
                raise ParseError(fname, sec.line, "[query] needs a name argument")
            patterns = tuple(
                tuple(p.lower().split()) for p in split_list(sec.require("patterns"))
            )
            query_types.append(
                QueryTypeSpec(
                    name=sec.arg,
                    label=sec.get("label", sec.arg.replace("_", " ")) or sec.arg,
                    trigger_patterns=patterns,
                    answer_fields=tuple(split_words(sec.require("answers"))),
                )
            )
        elif sec.name == "mandatory":
            for value in sec.get_all("set"):
                names = tuple(split_words(value))
                if names:
                    mandatory_sets.append(names)
        elif sec.name == "out_of_scope":
            for key, value, _ in sec.entries:
                out_of_scope.append((tuple(key.lower().split("_")), value))
        elif sec.name == "relax":
            for key, value, lineno in sec.entries:
                steps = tuple(int(s) for s in split_words(value))
                if any(b <= a for a, b in zip(steps, steps[1:])):
                    raise ParseError(fname, lineno, f"widen steps for {key} must be strictly increasing")
                relax.append(RelaxPolicy(field=key, widen_steps=steps))
        elif sec.name == "action":
            if not sec.arg:
                raise ParseError(fname, sec.line, "[action] needs a name argument")
            actions.append(
                ActionSpec(
                    name=sec.arg,
                    label=sec.get("label", sec.arg.replace("_", " ")) or sec.arg,
                    patterns=tuple(tuple(p.lower().split()) for p in split_list(sec.require("patterns"))),
                    notice=sec.require("notice"),
                    pins=tuple(split_list(sec.require("pins"))),
                )
            )
        elif sec.name == "cues":
            for key, value, _ in sec.entries:
                extra_cues.append((key.lower(), value))
        else:
            raise ParseError(fname, sec.line, f"unknown section [{sec.name}]")

    if not domain_name:
        raise ParseError(fname, 1, "missing [domain] section with a name")
    if not any(mandatory_sets):
        raise ParseError(fname, 1, "at least one non-empty mandatory set is required")

    for sec in field_sections:
        fields.append(
            FieldSpec(
                name=sec.arg,
                semantic_class=sec.require("class"),
                prompt_text=sec.get("prompt", "") or "",
                db_column="",  # provided by db-map.conf
                cue_role=sec.get("cue_role"),
                refs=tuple(split_list(sec.get("refs", "") or "")),
            )
        )

    names = [f.name for f in fields]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ParseError(fname, 1, f"duplicate field name {dup!r}")

    schema = ApplicationSchema(
        domain_name=domain_name,
        domain_label=domain_label,
        dataset_file=dataset_file,
        subject_format=subject_format,
        fields=tuple(fields),
        classes=tuple(classes),
        query_types=tuple(query_types),
        mandatory_sets=tuple(mandatory_sets),
        consistency_rules=(),
        out_of_scope_terms=tuple(out_of_scope),
        relaxable_fields=tuple(relax),
        actions=tuple(actions),
    )
    return schema, extra_cues


def _parse_db_map(path: Path, schema: ApplicationSchema) -> ApplicationSchema:
    from dataclasses import replace

    sections = parse_sections(path)
    fname = str(path)
    columns: dict[str, tuple[str, str | None]] = {}
    for sec in sections:
        if sec.name != "field":
            raise ParseError(fname, sec.line, f"unknown section [{sec.name}]")
        if sec.arg not in schema.field_names():
            raise DanglingReference(fname, sec.arg, "db-map names a field not in the schema")
        columns[sec.arg] = (sec.require("column"), sec.get("cgi"))

    new_fields = []
    for f in schema.fields:
        if f.name not in columns:
            raise DanglingReference(fname, f.name, "schema field has no db-map entry")
        col, cgi = columns[f.name]
        new_fields.append(replace(f, db_column=col, cgi_param=cgi))
    return replace(schema, fields=tuple(new_fields))


def _parse_lexicon(path: Path) -> tuple[LexiconEntry, ...]:
    entries: list[LexiconEntry] = []
    seen: set[tuple[str, str, str]] = set()
    for (surface, semantic_class, canonical), lineno in parse_delimited(path, 3):
        if not canonical:
            raise ParseError(str(path), lineno, "empty canonical value")
        key = (surface.lower(), semantic_class, canonical)
        if key in seen:
            raise ParseError(str(path), lineno, f"duplicate lexicon entry {surface!r}|{semantic_class}|{canonical!r}")
        seen.add(key)
        entries.append(LexiconEntry(surface=" ".join(surface.lower().split()), semantic_class=semantic_class, canonical=canonical))
    return tuple(entries)


def _parse_consistency(path: Path) -> tuple[ConsistencyRule, ...]:
    rules = []
    fname = str(path)
    for sec in parse_sections(path):
        if sec.name != "rule":
            raise ParseError(fname, sec.line, f"unknown section [{sec.name}]")
        if not sec.arg:
            raise ParseError(fname, sec.line, "[rule] needs an id argument")
        relation = sec.require("relation")
        if relation not in RELATIONS:
            raise ParseError(fname, sec.line, f"unknown relation {relation!r}")
        left = sec.require("left")
        right = sec.require("right")
        if left == right:
            raise ParseError(fname, sec.line, "a rule cannot compare a field with itself")
        rules.append(
            ConsistencyRule(
                id=sec.arg,
                relation=relation,
                left_field=left,
                right_field=right,
                message=sec.require("message"),
            )
        )
    return tuple(rules)


def parse_render_rules_text(text: str, filename: str) -> tuple[RenderRule, ...]:
    from .confparse import parse_sections_text

    return _render_rules_from_sections(parse_sections_text(text, filename), filename)


def _parse_render_rules(path: Path) -> tuple[RenderRule, ...]:
    return _render_rules_from_sections(parse_sections(path), str(path))


def _render_rules_from_sections(sections, fname: str) -> tuple[RenderRule, ...]:
    rules = []
    for sec in sections:
        if sec.name != "rule":
            raise ParseError(fname, sec.line, f"unknown section [{sec.name}]")
        act = sec.require("act")
        present: list[str] = []
        equals: list[tuple[str, str]] = []
        for value in sec.get_all("when"):
            if "=" in value:
                slot, _, expect = value.partition("=")
                equals.append((slot.strip(), expect.strip()))
            else:
                present.append(value.strip())
        output = sec.get("text")
        if output is None:
            raise ParseError(fname, sec.line, f"rule for {act} has no text")
        rules.append(
            RenderRule(
                act=act,
                present=tuple(present),
                equals=tuple(equals),
                output=output,
                variants=tuple(sec.get_all("alt")),
            )
        )
    return tuple(rules)


def _parse_help(path: Path) -> tuple[HelpEntry, ...]:
    entries = []
    fname = str(path)
    for sec in parse_sections(path):
        if sec.name != "help":
            raise ParseError(fname, sec.line, f"unknown section [{sec.name}]")
        entries.append(
            HelpEntry(
                state=sec.get("state", "") or "",
                field=sec.get("field", "") or "",
                text=sec.require("text"),
            )
        )
    return tuple(entries)


def _parse_scrape(path: Path) -> ScrapeSpec:
    sections = parse_sections(path)
    fname = str(path)
    site: Section | None = None
    response: Section | None = None
    windows: list[tuple[int, str]] = []
    forms: list[CgiFormSpec] = []
    for sec in sections:
        if sec.name == "site":
            site = sec
        elif sec.name == "response":
            response = sec
        elif sec.name == "windows":
            for key, value, lineno in sec.entries:
                try:
                    windows.append((int(key), value))
                except ValueError:
                    raise ParseError(fname, lineno, f"window size must be minutes, got {key!r}")
        elif sec.name == "form":
            if not sec.arg:
                raise ParseError(fname, sec.line, "[form] needs an id argument")
            params = tuple(split_words(sec.require("params")))
            required = tuple(split_words(sec.require("required")))
            missing = [p for p in required if p not in params]
            if missing:
                raise ParseError(fname, sec.line, f"required param {missing[0]!r} not in form params")
            selector = sec.require("fltans")
            if selector != sec.arg:
                raise ParseError(fname, sec.line, f"hidden selector {selector!r} must match form id {sec.arg!r}")
            forms.append(
                CgiFormSpec(
                    form_id=sec.arg,
                    url_path=(site.get("path") if site else None) or "/query",
                    hidden_params=(("fltAns", selector),),
                    params=params,
                    required_params=required,
                )
            )
        else:
            raise ParseError(fname, sec.line, f"unknown section [{sec.name}]")

    def resp(key: str, default: str = "") -> str:
        if response is None:
            return default
        return response.get(key, default) or default

    columns: list[tuple[str, str]] = []
    for part in split_words(resp("columns")):
        name, _, ctype = part.partition(":")
        columns.append((name, ctype or "text"))

    return ScrapeSpec(
        url_path=(site.get("path") if site else None) or "/query",
        table_start=resp("table_start", '<table class="results">'),
        table_end=resp("table_end", "</table>"),
        row_start=resp("row_start", "<tr>"),
        row_end=resp("row_end", "</tr>"),
        cell_start=resp("cell_start", "<td>"),
        cell_end=resp("cell_end", "</td>"),
        count_start=resp("count_start", '<span class="count">'),
        count_end=resp("count_end", "</span>"),
        no_match_marker=resp("no_match", "No matches."),
        columns=tuple(columns),
        window_codes=tuple(windows),
        forms=tuple(forms),
    )


def _framework_cues() -> list[tuple[str, str]]:
    from .data import read_data_file

    cues: list[tuple[str, str]] = []
    for line in read_data_file("cue-words.conf").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, role = line.partition("=")
        cues.append((word.strip().lower(), role.strip()))
    return cues


def _cross_validate(pack: DomainPack) -> None:
    schema = pack.schema
    fname = str(Path(pack.root) / "schema.conf")
    known_fields = set(schema.field_names())
    class_names = {c.name for c in schema.classes}

    for f in schema.fields:
        if f.semantic_class not in class_names:
            raise DanglingReference(fname, f.semantic_class, f"field {f.name} uses an undeclared class")
    for c in schema.classes:
        if c.kind == "builtin" and c.name not in BUILTIN_CLASSES:
            raise DanglingReference(fname, c.name, "not a framework-provided class")
    for qt in schema.query_types:
        for a in qt.answer_fields:
            if a not in known_fields:
                raise DanglingReference(fname, a, f"query type {qt.name} answers unknown field")
    for mset in schema.mandatory_sets:
        for name in mset:
            if name not in known_fields:
                raise DanglingReference(fname, name, "mandatory set names unknown field")
    for rule in schema.consistency_rules:
        cname = str(Path(pack.root) / "consistency.conf")
        for name in (rule.left_field, rule.right_field):
            if name not in known_fields:
                raise DanglingReference(cname, name, f"rule {rule.id} names unknown field")
        if rule.relation in ("less_than", "greater_than"):
            left = schema.field_by_name(rule.left_field)
            right = schema.field_by_name(rule.right_field)
            if left.semantic_class != right.semantic_class:
                raise DanglingReference(
                    cname, rule.id, "comparison rules only apply between fields of one semantic class"
                )
    for policy in schema.relaxable_fields:
        if policy.field not in known_fields:
            raise DanglingReference(fname, policy.field, "relax policy names unknown field")

    lexname = str(Path(pack.root) / "lexicon.conf")
    for entry in pack.lexicon:
        if entry.semantic_class not in class_names:
            raise DanglingReference(lexname, entry.semantic_class, f"lexicon entry {entry.surface!r} uses undeclared class")

    # Every class needs a producer: a framework tagger, a number pattern, or
    # at least one lexicon entry.
    lexicon_classes = {e.semantic_class for e in pack.lexicon}
    for c in schema.classes:
        if c.kind == "lexicon" and c.name not in lexicon_classes:
            raise DanglingReference(lexname, c.name, "lexicon-backed class has no entries")

    # CGI params named by forms must be produced by some field mapping or a
    # derived window param.
    scrapename = str(Path(pack.root) / "scrape.conf")
    cgi_params = {f.cgi_param for f in schema.fields if f.cgi_param}
    derived = {p + "Window" for p in cgi_params}
    for form in pack.scrape.forms:
        for p in form.params:
            if p not in cgi_params and p not in derived:
                raise DanglingReference(scrapename, p, f"form {form.form_id} names unmapped param")


def load_domain_pack(root_path: str | Path) -> DomainPack:
    """Load and cross-validate one domain pack directory."""
    root = Path(root_path)
    if not root.is_dir():
        raise MissingFile("schema", str(root))
    paths = {name: _require_file(root, name) for name in PACK_FILES}

    schema, extra_cues = _parse_schema(paths["schema.conf"])
    schema = _parse_db_map(paths["db-map.conf"], schema)
    from dataclasses import replace

    schema = replace(schema, consistency_rules=_parse_consistency(paths["consistency.conf"]))

    pack = DomainPack(
        root=str(root),
        schema=schema,
        lexicon=_parse_lexicon(paths["lexicon.conf"]),
        render_rules=_parse_render_rules(paths["render-rules.conf"]),
        help_entries=_parse_help(paths["help.conf"]),
        scrape=_parse_scrape(paths["scrape.conf"]),
        cue_roles=tuple(_framework_cues() + extra_cues),
    )
    _cross_validate(pack)
    return pack
