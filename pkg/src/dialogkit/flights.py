"""Deterministic flight dataset generation.

The generator uses the fixed linear congruential generator from `rand` so a
given (seed, n) always produces byte-identical data, here and in any faithful
reimplementation. The first twelve rows are structural: a Dallas-to-Newark
bank of eight arrivals inside a two-hour band (drives MANY_MATCHES), three
Boston-to-Chicago flights (drives FEW_MATCHES), and one Dallas-to-Dulles
flight (so both Dallas and Dulles exist for the correction demo). Everything
after that is uniform. The full draw order is documented in
docs/formats.md; changing it changes every pinned fixture.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .query import TableStore
from .rand import Lcg

CITY_LIST = (
    "Dallas",
    "Dulles",
    "Newark",
    "New York",
    "Boston",
    "Chicago",
    "Denver",
    "Atlanta",
    "Austin",
    "Seattle",
    "Portland",
    "Miami",
    "Orlando",
    "Phoenix",
    "Tucson",
    "Houston",
    "Memphis",
    "Nashville",
    "Omaha",
    "Detroit",
)

GATE_LETTERS = "ABCDEF"

DATASET_COLUMNS = (
    ("fltNumber", "number"),
    ("depCity", "text"),
    ("arrCity", "text"),
    ("depTime", "minutes"),
    ("arrTime", "minutes"),
    ("gate", "text"),
    ("status", "text"),
)

FIXED_FLIGHT_NUMBER = 472  # row 0 carries a stable, documented flight number

MANY_PAIR = ("Dallas", "Newark")  # 8 flights, arrivals 15 minutes apart
FEW_PAIR = ("Boston", "Chicago")  # 3 flights, arrivals 30 minutes apart


@dataclass(frozen=True)
class FlightRow:
    flight_number: int
    departure_city: str
    arrival_city: str
    departure_time: int  # minutes after midnight, 5-minute grid
    arrival_time: int
    gate: str
    status: str

    def to_tuple(self) -> tuple:
        return (
            self.flight_number,
            self.departure_city,
            self.arrival_city,
            self.departure_time,
            self.arrival_time,
            self.gate,
            self.status,
        )


def _duration(rng: Lcg) -> int:
    return 60 + rng.randint(49) * 5  # 60..300 minutes


def _gate(rng: Lcg) -> str:
    return GATE_LETTERS[rng.randint(len(GATE_LETTERS))] + str(1 + rng.randint(30))


def _status(rng: Lcg) -> str:
    r = rng.randint(10)
    if r < 6:
        return "on time"
    if r < 9:
        return "delayed"
    return "landed"


def generate_dataset(seed: int, n: int) -> list[FlightRow]:
    """Generate n flights; deterministic in (seed, n).

    Structural guarantees need room: the MANY bank needs n >= 8, the FEW
    trio n >= 11, and the Dulles row n >= 12. Below those thresholds the
    remaining guarantees are waived. Flight numbers are unique three-digit
    values, so n may not exceed 900.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > 900:
        raise ValueError("only 900 distinct three-digit flight numbers exist")
    rng = Lcg(seed)
    used = {FIXED_FLIGHT_NUMBER}

    def next_number() -> int:
        while True:
            value = 100 + rng.randint(900)
            if value not in used:
                used.add(value)
                return value

    many_base = 600 + rng.randint(121) * 5  # 10:00 .. 20:00
    few_base = 600 + rng.randint(121) * 5

    rows: list[FlightRow] = []
    for i in range(n):
        if i < 8:
            dep_city, arr_city = MANY_PAIR
            arr = many_base + 15 * i
            dur = _duration(rng)
            dep = arr - dur
            number = FIXED_FLIGHT_NUMBER if i == 0 else next_number()
        elif i < 11:
            dep_city, arr_city = FEW_PAIR
            arr = few_base + 30 * (i - 8)
            dur = _duration(rng)
            dep = arr - dur
            number = next_number()
        else:
            if i == 11:
                dep_city, arr_city = "Dallas", "Dulles"
            else:
                dep_idx = rng.randint(len(CITY_LIST))
                arr_idx = rng.randint(len(CITY_LIST))
                while arr_idx == dep_idx or (CITY_LIST[dep_idx], CITY_LIST[arr_idx]) == FEW_PAIR:
                    arr_idx = (arr_idx + 1) % len(CITY_LIST)
                dep_city, arr_city = CITY_LIST[dep_idx], CITY_LIST[arr_idx]
            dep = 300 + rng.randint(168) * 5  # 05:00 .. 18:55
            dur = _duration(rng)
            arr = dep + dur
            number = next_number()
        rows.append(
            FlightRow(
                flight_number=number,
                departure_city=dep_city,
                arrival_city=arr_city,
                departure_time=dep,
                arrival_time=arr,
                gate=_gate(rng),
                status=_status(rng),
            )
        )
    return rows


def dataset_to_text(rows: list[FlightRow]) -> str:
    header = ",".join(f"{name}:{ctype}" for name, ctype in DATASET_COLUMNS)
    lines = [header]
    for row in rows:
        lines.append(",".join(str(v) for v in row.to_tuple()))
    return "\n".join(lines) + "\n"


def dataset_digest(rows: list[FlightRow]) -> str:
    return hashlib.sha256(dataset_to_text(rows).encode("utf-8")).hexdigest()


def dataset_store(rows: list[FlightRow]) -> TableStore:
    return TableStore(columns=DATASET_COLUMNS, rows=tuple(r.to_tuple() for r in rows))
