"""A small airline web site standing in for the real thing.

One query endpoint serves three logical forms told apart by the hidden
`fltAns` parameter, exactly as declared in the pack's scrape.conf; the three
form pages carry that hidden field in their source. Result pages embed the
match count and one marked-up table row per flight, which is what the
scraper reads back.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qsl, urlparse

import click

from .query import QueryConstraint, TableStore, exec_local, load_dataset, parse_cell
from .schema import DomainPack, ScrapeSpec

log = logging.getLogger(__name__)

FORM_PAGE_PREFIX = "/aa/"


@dataclass(frozen=True)
class HttpRequest:
    method: str
    path: str
    params: tuple[tuple[str, str], ...]

    def param_dict(self) -> dict[str, str]:
        return dict(self.params)


@dataclass(frozen=True)
class HttpResponse:
    status: int
    body: str
    content_type: str = "text/html"


@dataclass(frozen=True)
class MockSiteConfig:
    dataset_path: str | None  # None = the bundled flight dataset
    port: int = 8080
    latency_ms: int = 0


def _page(title: str, body: str) -> str:
    return f"<html><head><title>{title}</title></head><body>{body}</body></html>"


def _error_page(status: int, message: str) -> HttpResponse:
    return HttpResponse(status=status, body=_page("Error", f'<div class="error">{message}</div>'))


def _form_page(form_id: str, spec: ScrapeSpec) -> str:
    form = next(f for f in spec.forms if f.form_id == form_id)
    inputs = [f'<input type="hidden" name="{k}" value="{v}">' for k, v in form.hidden_params]
    for name in form.params:
        required = " (required)" if name in form.required_params else ""
        inputs.append(f'<label>{name}{required} <input type="text" name="{name}"></label><br>')
    return _page(
        f"Flight lookup: {form_id}",
        f'<form action="{spec.url_path}" method="get">' + "".join(inputs) + '<input type="submit" value="Search"></form>',
    )


def render_result_page(rows: list[tuple], count: int, spec: ScrapeSpec) -> str:
    if count == 0:
        return _page("No flights", spec.no_match_marker)
    cells = []
    for row in rows:
        inner = "".join(f"{spec.cell_start}{value}{spec.cell_end}" for value in row)
        cells.append(f"{spec.row_start}{inner}{spec.row_end}")
    body = (
        f"<p>{spec.count_start}{count}{spec.count_end} flights found.</p>"
        f"{spec.table_start}{''.join(cells)}{spec.table_end}"
    )
    return _page("Flight results", body)


def _constraints_from_params(params: dict[str, str], form, spec: ScrapeSpec, store: TableStore):
    """Translate submitted form parameters into store constraints."""
    window_params = {p: p[: -len("Window")] for p in form.params if p.endswith("Window")}
    plain = [p for p in form.params if p not in window_params]
    constraints: list[QueryConstraint] = []
    for name in plain:
        if name not in params:
            continue
        ctype = store.column_type(name)
        try:
            value = parse_cell(params[name], ctype)
        except ValueError:
            raise ValueError(f"parameter {name} must be a number")
        window_param = name + "Window"
        if window_param in params:
            if window_param not in form.params:
                raise ValueError(f"unexpected parameter {window_param}")
            try:
                window = spec.window_minutes(params[window_param])
            except KeyError:
                raise ValueError(f"unknown window code {params[window_param]!r}")
            constraints.append(QueryConstraint(column=name, op="within_window", value=value, window=window))
        else:
            constraints.append(QueryConstraint(column=name, op="eq", value=value))
    return constraints


def handle_request(request: HttpRequest, store: TableStore, spec: ScrapeSpec, latency_ms: int = 0) -> HttpResponse:
    if latency_ms:
        time.sleep(latency_ms / 1000.0)
    if request.method != "GET":
        return _error_page(400, "only GET is supported")

    if request.path in ("/", "/aa", "/aa/"):
        links = "".join(
            f'<li><a href="{FORM_PAGE_PREFIX}{f.form_id}">Search {f.form_id}</a></li>' for f in spec.forms
        )
        return HttpResponse(status=200, body=_page("Flight information", f"<ul>{links}</ul>"))

    form_ids = {f.form_id for f in spec.forms}
    if request.path.startswith(FORM_PAGE_PREFIX) and request.path[len(FORM_PAGE_PREFIX) :] in form_ids:
        return HttpResponse(status=200, body=_form_page(request.path[len(FORM_PAGE_PREFIX) :], spec))

    if request.path != spec.url_path:
        return _error_page(404, f"no such page: {request.path}")

    params = request.param_dict()
    selector = params.pop("fltAns", None)
    if selector is None:
        return _error_page(400, "missing fltAns form selector")
    form = next((f for f in spec.forms if f.form_id == selector), None)
    if form is None:
        return _error_page(400, f"unknown fltAns value {selector!r}")
    missing = [p for p in form.required_params if p not in params]
    if missing:
        return _error_page(400, f"missing required parameter {missing[0]}")
    unknown = [p for p in params if p not in form.params]
    if unknown:
        return _error_page(400, f"unexpected parameter {unknown[0]}")
    try:
        constraints = _constraints_from_params(params, form, spec, store)
    except (ValueError, KeyError) as exc:
        return _error_page(400, str(exc))

    result = exec_local(store, constraints)
    return HttpResponse(status=200, body=render_result_page(list(result.rows), result.count, spec))


def make_direct_fetch(store: TableStore, spec: ScrapeSpec, latency_ms: int = 0):
    """An in-process transport with the wire semantics of the HTTP server."""

    def fetch(path: str, params: tuple[tuple[str, str], ...]) -> str:
        response = handle_request(HttpRequest("GET", path, tuple(params)), store, spec, latency_ms)
        if response.status != 200:
            from .errors import QuerierUnavailable

            raise QuerierUnavailable(f"site answered {response.status}")
        return response.body

    return fetch


def serve(store: TableStore, spec: ScrapeSpec, port: int, latency_ms: int = 0) -> ThreadingHTTPServer:
    class Handler(BaseHTTPRequestHandler):
        def do_GET(self):  # noqa: N802 (http.server API)
            parsed = urlparse(self.path)
            request = HttpRequest("GET", parsed.path, tuple(parse_qsl(parsed.query)))
            response = handle_request(request, store, spec, latency_ms)
            payload = response.body.encode("utf-8")
            self.send_response(response.status)
            self.send_header("Content-Type", response.content_type + "; charset=utf-8")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, fmt, *args):
            log.debug("mock-aa: " + fmt, *args)

    return ThreadingHTTPServer(("127.0.0.1", port), Handler)


def _default_pack() -> DomainPack:
    from .service import packaged_pack_root
    from .schema import load_domain_pack

    return load_domain_pack(packaged_pack_root("flights"))


@click.group()
def main():
    """Mock airline web site."""


def serve_from_config(config: MockSiteConfig) -> ThreadingHTTPServer:
    pack = _default_pack()
    if config.dataset_path:
        store = load_dataset(config.dataset_path)
    else:
        from .service import pack_store

        store = pack_store(pack)
    return serve(store, pack.scrape, config.port, config.latency_ms)


@main.command("serve")
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--dataset", "dataset_path", default=None, help="Dataset file; defaults to the bundled flights data.")
@click.option("--latency-ms", default=0, show_default=True, type=int)
def serve_command(port: int, dataset_path: str | None, latency_ms: int):
    """Serve the three query forms and the result pages."""
    logging.basicConfig(level=logging.INFO)
    config = MockSiteConfig(dataset_path=dataset_path, port=port, latency_ms=latency_ms)
    server = serve_from_config(config)
    click.echo(f"mock-aa listening on http://127.0.0.1:{port}{_default_pack().scrape.url_path}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


if __name__ == "__main__":
    main()
