"""Choosing the most informative question when too many rows match.

With row access, the engine asks for the unbound field minimizing the
expected residual match count E(f) = sum over values v of count(v)^2 / N:
the fewer rows an average answer leaves alive, the better the question.
"""
from dialogkit.dialog import select_informative_field
from dialogkit.dialog.templates import row_fields
from dialogkit.query import QueryConstraint, exec_local
from dialogkit.schema import load_domain_pack
from dialogkit.service import pack_store, packaged_pack_root

pack = load_domain_pack(packaged_pack_root("flights"))
store = pack_store(pack)

result = exec_local(
    store,
    [QueryConstraint("depCity", "eq", "Dallas"), QueryConstraint("arrCity", "eq", "Newark")],
)
rows = [row_fields(row, pack) for row in result.rows]
print(f"{result.count} flights go Dallas -> Newark; which question narrows this best?")

bound = {"departure_city", "arrival_city"}
unbound = [f.name for f in pack.schema.fields if f.name not in bound]

for spec in pack.schema.fields:
    if spec.name not in unbound:
        continue
    values = [row[spec.name] for row in rows]
    residual = sum(values.count(v) ** 2 for v in set(values)) / len(values)
    print(f"  E({spec.name}) = {residual:.2f}")

choice = select_informative_field(rows, unbound, pack.schema)
print("ask for:", choice)
print("(flight numbers are unique, so one answer pins the flight exactly)")
