"""Querying through web forms instead of the local table.

The same constraints can be serialized as a form GET against the airline
site; the hidden fltAns field tells the site's one script which of its three
forms is submitting. The result page is scraped back into typed rows, so
both back-ends return identical results.
"""
from dialogkit.mock_site import HttpRequest, handle_request, make_direct_fetch
from dialogkit.query import CgiQuerier, QueryConstraint, build_cgi_request, exec_local, scrape_rows
from dialogkit.schema import load_domain_pack
from dialogkit.service import DialogService, pack_store, packaged_pack_root

pack = load_domain_pack(packaged_pack_root("flights"))
store = pack_store(pack)

print("=== what goes on the wire ===")
for constraints in [
    [QueryConstraint("fltNumber", "eq", 472)],
    [
        QueryConstraint("depCity", "eq", "Dallas"),
        QueryConstraint("arrCity", "eq", "Newark"),
        QueryConstraint("arrTime", "within_window", 800, 120),
    ],
]:
    request = build_cgi_request(constraints, pack)
    print("GET", request.url)

print("\n=== a result page, scraped back into rows ===")
request = build_cgi_request([QueryConstraint("fltNumber", "eq", 472)], pack)
response = handle_request(HttpRequest("GET", request.url_path, request.params), store, pack.scrape)
print("page excerpt:", response.body[response.body.find("<table") : response.body.find("</table>") + 8][:200], "...")
result = scrape_rows(response.body, pack.scrape)
print("scraped:", result.count, "row(s):", result.rows)

local = exec_local(store, [QueryConstraint("fltNumber", "eq", 472)])
print("local path returns the same rows:", result.rows == local.rows)

print("\n=== a dialogue running entirely over the form back-end ===")
service = DialogService()
session = service.create_session("flights", backend="cgi")
for utterance in ["flights from Dallas to Newark arriving around 1:20 pm", "four seven two"]:
    response = service.step(session.id, utterance)
    print(f"you   > {utterance}")
    print(f"system> {response.reply}")
