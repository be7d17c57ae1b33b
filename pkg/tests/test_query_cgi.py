import pytest

from dialogkit.errors import NoFormSatisfiable, QuerierUnavailable, ScrapeMismatch
from dialogkit.mock_site import make_direct_fetch, render_result_page
from dialogkit.query import (
    CgiQuerier,
    QueryConstraint,
    build_cgi_request,
    exec_local,
    scrape_rows,
    select_form,
)

PINNED_REQUESTS = {
    "byNumber": "/aa/flight?fltAns=byNumber&fltNumber=472",
    "byArrival": "/aa/flight?fltAns=byArrival&depCity=Dallas&arrCity=New+York&arrTime=630&arrTimeWindow=w2",
    "byDeparture": "/aa/flight?fltAns=byDeparture&depCity=Dallas&arrCity=New+York&depTime=540",
}


def mandatory_constraint_sets():
    return {
        "byNumber": [QueryConstraint("fltNumber", "eq", 472)],
        "byArrival": [
            QueryConstraint("depCity", "eq", "Dallas"),
            QueryConstraint("arrCity", "eq", "New York"),
            QueryConstraint("arrTime", "within_window", 630, 120),
        ],
        "byDeparture": [
            QueryConstraint("depCity", "eq", "Dallas"),
            QueryConstraint("arrCity", "eq", "New York"),
            QueryConstraint("depTime", "eq", 540),
        ],
    }


def test_request_strings_byte_exact(flights_pack):
    for form_id, constraints in mandatory_constraint_sets().items():
        request = build_cgi_request(constraints, flights_pack)
        assert request.method == "GET"
        assert request.url == PINNED_REQUESTS[form_id], form_id
        assert ("fltAns", form_id) == request.params[0]


def test_form_selection_prefers_number(flights_pack):
    constraints = mandatory_constraint_sets()["byArrival"] + [QueryConstraint("fltNumber", "eq", 472)]
    assert select_form(constraints, flights_pack).form_id == "byNumber"


def test_no_form_satisfiable(flights_pack):
    with pytest.raises(NoFormSatisfiable):
        build_cgi_request([QueryConstraint("arrCity", "eq", "Dallas")], flights_pack)
    with pytest.raises(NoFormSatisfiable):
        build_cgi_request([], flights_pack)


def test_request_injective_on_constraints(flights_pack):
    seen = {}
    for city in ("Dallas", "Boston"):
        for time in (600, 660):
            constraints = [
                QueryConstraint("depCity", "eq", city),
                QueryConstraint("arrCity", "eq", "Newark"),
                QueryConstraint("arrTime", "within_window", time, 120),
            ]
            url = build_cgi_request(constraints, flights_pack).url
            assert url not in seen
            seen[url] = constraints


def test_scrape_roundtrip(flights_pack, flights_store):
    spec = flights_pack.scrape
    result = exec_local(flights_store, [QueryConstraint("fltNumber", "eq", 472)])
    page = render_result_page(list(result.rows), result.count, spec)
    scraped = scrape_rows(page, spec)
    assert scraped.count == 1
    assert scraped.rows == result.rows  # typed equality, ints included


def test_scrape_no_match_page(flights_pack):
    spec = flights_pack.scrape
    page = render_result_page([], 0, spec)
    scraped = scrape_rows(page, spec)
    assert scraped.count == 0 and scraped.rows == ()


def test_scrape_mismatch_on_garbled_body(flights_pack, flights_store):
    spec = flights_pack.scrape
    result = exec_local(flights_store, [QueryConstraint("fltNumber", "eq", 472)])
    page = render_result_page(list(result.rows), result.count, spec)
    with pytest.raises(ScrapeMismatch):
        scrape_rows(page[: len(page) // 2], spec)
    with pytest.raises(ScrapeMismatch):
        scrape_rows("<html><body>totally different site</body></html>", spec)


def test_scrape_mismatch_on_wrong_cell_count(flights_pack):
    spec = flights_pack.scrape
    body = (
        f"<p>{spec.count_start}1{spec.count_end}</p>{spec.table_start}"
        f"{spec.row_start}{spec.cell_start}only one cell{spec.cell_end}{spec.row_end}{spec.table_end}"
    )
    with pytest.raises(ScrapeMismatch):
        scrape_rows(body, spec)


def test_cgi_querier_matches_local(flights_pack, flights_store):
    querier = CgiQuerier(flights_pack, fetch=make_direct_fetch(flights_store, flights_pack.scrape))
    for constraints in mandatory_constraint_sets().values():
        local = exec_local(flights_store, constraints)
        via_site = querier.run(constraints)
        assert via_site.count == local.count
        assert sorted(via_site.rows) == sorted(local.rows)


def test_cgi_querier_post_filters_unsent_constraints(flights_pack, flights_store):
    constraints = [
        QueryConstraint("fltNumber", "eq", 472),
        QueryConstraint("status", "eq", "on time"),  # no form carries status
    ]
    local = exec_local(flights_store, constraints)
    querier = CgiQuerier(flights_pack, fetch=make_direct_fetch(flights_store, flights_pack.scrape))
    assert querier.run(constraints).count == local.count == 0  # flight 472 is delayed


def test_cgi_querier_unavailable():
    import dialogkit.schema as schema_mod
    from dialogkit.service import packaged_pack_root

    pack = schema_mod.load_domain_pack(packaged_pack_root("flights"))

    def broken_fetch(path, params):
        raise QuerierUnavailable("down")

    querier = CgiQuerier(pack, fetch=broken_fetch)
    with pytest.raises(QuerierUnavailable):
        querier.run([QueryConstraint("fltNumber", "eq", 472)])
