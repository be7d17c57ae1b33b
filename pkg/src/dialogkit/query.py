"""Query execution over either back-end.

The local path filters an in-memory table store; the CGI path serializes the
same constraints into a web-form GET request, fetches the result page, and
scrapes typed rows back out of it. Both paths return the same result shape,
and for any constraint set a form can fully express they agree exactly (the
querier post-filters whatever a form cannot express).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol
from urllib.parse import urlencode

from .errors import NoFormSatisfiable, QuerierUnavailable, ScrapeMismatch, UnmappedField
from .schema import CgiFormSpec, DomainPack, ScrapeSpec

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 120  # minutes; base width for approximate time constraints
CAP_ROWS = 50

COLUMN_TYPES = ("text", "number", "minutes")


@dataclass(frozen=True)
class TableStore:
    columns: tuple[tuple[str, str], ...]  # (name, text|number|minutes)
    rows: tuple[tuple, ...]

    def __post_init__(self):
        for name, ctype in self.columns:
            if ctype not in COLUMN_TYPES:
                raise ValueError(f"unknown column type {ctype!r} for {name}")
        arity = len(self.columns)
        for row in self.rows:
            if len(row) != arity:
                raise ValueError(f"row arity {len(row)} != column arity {arity}")

    def column_index(self, name: str) -> int:
        for i, (cname, _) in enumerate(self.columns):
            if cname == name:
                return i
        raise KeyError(name)

    def column_type(self, name: str) -> str:
        return self.columns[self.column_index(name)][1]


@dataclass(frozen=True)
class QueryConstraint:
    column: str
    op: str  # eq | within_window
    value: object
    window: int = 0

    def __post_init__(self):
        if self.op not in ("eq", "within_window"):
            raise ValueError(f"unknown op {self.op!r}")
        if self.op == "within_window" and self.window <= 0:
            raise ValueError("within_window needs a positive window")


@dataclass(frozen=True)
class QueryResultSet:
    count: int
    rows: tuple[tuple, ...]
    truncated: bool = False


def parse_cell(text: str, ctype: str):
    if ctype in ("number", "minutes"):
        return int(text)
    return text


def load_dataset(path: str | Path) -> TableStore:
    """Read a delimited dataset file: `name:type` header line, then rows."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty dataset file")
    columns = []
    for part in lines[0].split(","):
        name, _, ctype = part.strip().partition(":")
        columns.append((name, ctype or "text"))
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(columns):
            raise ValueError(f"{path}: row arity {len(cells)} != header arity {len(columns)}")
        rows.append(tuple(parse_cell(c.strip(), columns[i][1]) for i, c in enumerate(cells)))
    return TableStore(columns=tuple(columns), rows=tuple(rows))


def store_to_text(store: TableStore) -> str:
    header = ",".join(f"{name}:{ctype}" for name, ctype in store.columns)
    lines = [header]
    for row in store.rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def compile_constraints(context, pack: DomainPack) -> list[QueryConstraint]:
    """Turn the bound fields of a dialogue context into column constraints.

    Approximate time bindings become within_window constraints at the
    context's current window for that field (base 120 minutes, widened by
    relaxation steps); everything else is an equality. The query type never
    constrains anything; it only selects answer fields.
    """
    out: list[QueryConstraint] = []
    for spec in pack.schema.fields:  # schema order keeps serialization canonical
        binding = context.bindings.get(spec.name)
        if binding is None:
            continue
        if not spec.db_column:
            raise UnmappedField(spec.name)
        window = context.windows.get(spec.name)
        if window:
            out.append(
                QueryConstraint(column=spec.db_column, op="within_window", value=binding.value, window=window)
            )
        else:
            out.append(QueryConstraint(column=spec.db_column, op="eq", value=binding.value))
    return out


def _matches(store: TableStore, row: tuple, constraint: QueryConstraint) -> bool:
    idx = store.column_index(constraint.column)
    cell = row[idx]
    if constraint.op == "eq":
        return cell == constraint.value
    ctype = store.columns[idx][1]
    if ctype != "minutes":
        raise ValueError(f"within_window on non-minutes column {constraint.column}")
    return abs(int(cell) - int(constraint.value)) <= constraint.window


def exec_local(store: TableStore, constraints: list[QueryConstraint], cap_rows: int = CAP_ROWS) -> QueryResultSet:
    """Conjunctive filter in store order; exact count even when rows are capped."""
    hits = [row for row in store.rows if all(_matches(store, row, c) for c in constraints)]
    truncated = len(hits) > cap_rows
    return QueryResultSet(count=len(hits), rows=tuple(hits[:cap_rows]), truncated=truncated)


def to_sql(constraints: list[QueryConstraint], table: str = "flights") -> str:
    """SQL rendering of a constraint list, for logs only."""
    if not constraints:
        return f"SELECT * FROM {table};"
    parts = []
    for c in constraints:
        value = f"'{c.value}'" if isinstance(c.value, str) else str(c.value)
        if c.op == "eq":
            parts.append(f"{c.column} = {value}")
        else:
            parts.append(f"{c.column} BETWEEN {int(c.value) - c.window} AND {int(c.value) + c.window}")
    return f"SELECT * FROM {table} WHERE " + " AND ".join(parts) + ";"


@dataclass(frozen=True)
class CgiRequest:
    method: str
    url_path: str
    params: tuple[tuple[str, str], ...]

    @property
    def query_string(self) -> str:
        return urlencode(list(self.params))

    @property
    def url(self) -> str:
        return f"{self.url_path}?{self.query_string}"


def _cgi_param_for(column: str, pack: DomainPack) -> str | None:
    for f in pack.schema.fields:
        if f.db_column == column:
            return f.cgi_param
    return None


def _constraint_params(constraints: list[QueryConstraint], pack: DomainPack) -> dict[str, tuple[str, QueryConstraint]]:
    """Map cgi param name -> (wire value, source constraint)."""
    out: dict[str, tuple[str, QueryConstraint]] = {}
    for c in constraints:
        param = _cgi_param_for(c.column, pack)
        if param is None:
            continue
        out[param] = (str(c.value), c)
        if c.op == "within_window":
            out[param + "Window"] = (pack.scrape.window_code(c.window), c)
    return out


def select_form(constraints: list[QueryConstraint], pack: DomainPack) -> CgiFormSpec:
    """First declared form whose required params the constraints cover."""
    available = set(_constraint_params(constraints, pack))
    for form in pack.scrape.forms:
        if set(form.required_params) <= available:
            return form
    raise NoFormSatisfiable(f"no form covers params {sorted(available)}")


def unsent_constraints(constraints: list[QueryConstraint], form: CgiFormSpec, pack: DomainPack) -> list[QueryConstraint]:
    """Constraints the chosen form cannot carry; the querier applies them locally."""
    params = _constraint_params(constraints, pack)
    sent = {c for name, (_, c) in params.items() if name in form.params}
    return [c for c in constraints if c not in sent]


def build_cgi_request(constraints: list[QueryConstraint], pack: DomainPack) -> CgiRequest:
    """Serialize constraints as a GET request against the best matching form.

    The hidden form selector comes first, then the form's parameters in
    declaration order, URL-encoded. Time windows travel as a center value
    plus a coded width parameter (see scrape.conf).
    """
    form = select_form(constraints, pack)
    values = _constraint_params(constraints, pack)
    params: list[tuple[str, str]] = list(form.hidden_params)
    for name in form.params:
        if name in values:
            params.append((name, values[name][0]))
    return CgiRequest(method="GET", url_path=form.url_path, params=tuple(params))


def _cut(body: str, start_marker: str, end_marker: str, what: str) -> str:
    start = body.find(start_marker)
    if start < 0:
        raise ScrapeMismatch(f"missing {what} start marker")
    start += len(start_marker)
    end = body.find(end_marker, start)
    if end < 0:
        raise ScrapeMismatch(f"missing {what} end marker")
    return body[start:end]


def scrape_rows(html_body: str, scrape_spec: ScrapeSpec) -> QueryResultSet:
    """Extract typed result rows from a result page.

    A page carrying the no-match marker is an exact empty result. Anything
    that fails to carry the expected markers raises ScrapeMismatch, the
    signal that the site's format drifted.
    """
    if scrape_spec.no_match_marker and scrape_spec.no_match_marker in html_body:
        return QueryResultSet(count=0, rows=(), truncated=False)
    count_text = _cut(html_body, scrape_spec.count_start, scrape_spec.count_end, "count").strip()
    try:
        count = int(count_text)
    except ValueError:
        raise ScrapeMismatch(f"count marker holds {count_text!r}, not a number")
    table = _cut(html_body, scrape_spec.table_start, scrape_spec.table_end, "table")
    rows: list[tuple] = []
    cursor = 0
    while True:
        rstart = table.find(scrape_spec.row_start, cursor)
        if rstart < 0:
            break
        rend = table.find(scrape_spec.row_end, rstart)
        if rend < 0:
            raise ScrapeMismatch("row start without row end")
        row_html = table[rstart + len(scrape_spec.row_start) : rend]
        cells: list[str] = []
        ccur = 0
        while True:
            cstart = row_html.find(scrape_spec.cell_start, ccur)
            if cstart < 0:
                break
            cend = row_html.find(scrape_spec.cell_end, cstart)
            if cend < 0:
                raise ScrapeMismatch("cell start without cell end")
            cells.append(row_html[cstart + len(scrape_spec.cell_start) : cend])
            ccur = cend + len(scrape_spec.cell_end)
        if len(cells) != len(scrape_spec.columns):
            raise ScrapeMismatch(
                f"row has {len(cells)} cells, spec names {len(scrape_spec.columns)} columns"
            )
        rows.append(
            tuple(parse_cell(cell.strip(), ctype) for cell, (_, ctype) in zip(cells, scrape_spec.columns))
        )
        cursor = rend + len(scrape_spec.row_end)
    if count < len(rows):
        raise ScrapeMismatch(f"count {count} smaller than scraped row count {len(rows)}")
    return QueryResultSet(count=count, rows=tuple(rows), truncated=count > len(rows))


class Querier(Protocol):  # pragma: no cover - typing helper
    backend: str
    supports_row_stats: bool

    def run(self, constraints: list[QueryConstraint]) -> QueryResultSet: ...


class LocalQuerier:
    backend = "local"
    supports_row_stats = True

    def __init__(self, store: TableStore, cap_rows: int = CAP_ROWS):
        self.store = store
        self.cap_rows = cap_rows

    def run(self, constraints: list[QueryConstraint]) -> QueryResultSet:
        log.debug("local query: %s", to_sql(constraints))
        return exec_local(self.store, constraints, cap_rows=self.cap_rows)


class CgiQuerier:
    """Queries a web site by building form GETs and scraping result pages.

    `fetch(path, params) -> body` is injectable so tests can talk straight to
    the mock site handler; the default uses HTTP with one retry and a 5 s
    timeout, surfacing failures as QuerierUnavailable.
    """

    backend = "cgi"
    supports_row_stats = False

    def __init__(
        self,
        pack: DomainPack,
        base_url: str | None = None,
        fetch: Callable[[str, tuple[tuple[str, str], ...]], str] | None = None,
        timeout: float = 5.0,
    ):
        self.pack = pack
        self.base_url = (base_url or "").rstrip("/")
        self._fetch = fetch or self._http_fetch
        self.timeout = timeout

    def _http_fetch(self, path: str, params: tuple[tuple[str, str], ...]) -> str:
        import httpx

        url = f"{self.base_url}{path}"
        last_error: Exception | None = None
        for _ in range(2):  # one retry
            try:
                response = httpx.get(url, params=list(params), timeout=self.timeout)
                if response.status_code != 200:
                    raise QuerierUnavailable(f"site answered {response.status_code} for {path}")
                return response.text
            except QuerierUnavailable:
                raise
            except Exception as exc:  # connect/timeout errors
                last_error = exc
        raise QuerierUnavailable(f"site unreachable: {last_error}")

    def run(self, constraints: list[QueryConstraint]) -> QueryResultSet:
        request = build_cgi_request(constraints, self.pack)
        form = select_form(constraints, self.pack)
        leftover = unsent_constraints(constraints, form, self.pack)
        body = self._fetch(request.url_path, request.params)
        result = scrape_rows(body, self.pack.scrape)
        if not leftover:
            return result
        # Refine rows the form could not filter. Counts stay exact as long as
        # the page was not truncated (it never is at desk scale).
        pseudo = TableStore(columns=self.pack.scrape.columns, rows=result.rows)
        refined = exec_local(pseudo, leftover, cap_rows=CAP_ROWS)
        if result.truncated:
            log.warning("post-filtering a truncated CGI result; count is a lower bound")
        return QueryResultSet(count=refined.count, rows=refined.rows, truncated=result.truncated)
