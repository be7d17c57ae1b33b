"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""
import time

from helpers import Scenario, run_scenario
from test_library_pack import LIBRARY_SCENARIOS

from dialogkit.dialog import UpperState
from dialogkit.flights import dataset_digest
from dialogkit.query import (
    CgiQuerier,
    QueryConstraint,
    build_cgi_request,
    exec_local,
)
from dialogkit.mock_site import make_direct_fetch
from dialogkit.rand import Lcg
from dialogkit.service import DialogService, replay_transcript

PRE_QUERY = {
    "INITIAL",
    "QUIT",
    "META_QUERY",
    "OUT_OF_BOUNDS",
    "STATUS_QUO",
    "AMBIGUOUS",
    "INCONSISTENT",
    "CORRECTION",
    "MANDATORY_FIELDS",
}


def report(number, name):
    print(f"\nACCEPTANCE {number} ({name}): PASS")


# --------------------------------------------------------------- criterion 1

# One scripted dialogue per upper-layer state; exact state sequences and
# exact final replies. Values come from the pinned (seed 7, n 200) dataset:
# flight 472 Dallas->Newark 8:50 am -> 12:20 pm; eight Dallas->Newark
# arrivals 12:20-2:05 pm; Boston->Chicago at 7:10, 7:40, 8:10 pm.
STATE_SCENARIOS = [
    Scenario(
        name="QUIT",
        domain="flights",
        turns=[("quit", "QUIT")],
        final_reply="Goodbye.",
    ),
    Scenario(
        name="META_QUERY",
        domain="flights",
        turns=[("what cities do you know about", "META_QUERY")],
        final_reply=(
            "I know about these cities: Dallas, Dulles, Newark, New York, Boston, "
            "Chicago, Denver, Atlanta, Austin, Seattle, and 10 more."
        ),
    ),
    Scenario(
        name="OUT_OF_BOUNDS",
        domain="flights",
        turns=[("what time does Delta flight 472 reach Dallas?", "OUT_OF_BOUNDS")],
        final_reply=(
            "I only cover American Airlines flights, so I cannot look up Delta. "
            "Feel free to ask about another American Airlines flight."
        ),
    ),
    Scenario(
        name="STATUS_QUO",
        domain="flights",
        turns=[("i don't know", "STATUS_QUO")],
        final_reply="That is all right. Say help if you would like some guidance.",
    ),
    Scenario(
        name="AMBIGUOUS",
        domain="flights",
        turns=[("Newark", "AMBIGUOUS")],
        final_reply="Is Newark the departure city or arrival city?",
    ),
    Scenario(
        name="INCONSISTENT",
        domain="flights",
        turns=[("from Boston", "MANDATORY_FIELDS"), ("to Boston", "INCONSISTENT")],
        final_reply=(
            "That cannot be right: the departure city and the arrival city are "
            "both Boston. Please correct one of them."
        ),
    ),
    Scenario(
        name="CORRECTION",
        domain="flights",
        turns=[("to Dulles", "MANDATORY_FIELDS"), ("I said Dallas, not Dulles", "CORRECTION")],
        final_reply="Okay, Dallas instead of Dulles. The arrival city is now Dallas.",
    ),
    Scenario(
        name="MANDATORY_FIELDS",
        domain="flights",
        turns=[("from Dallas", "MANDATORY_FIELDS")],
        final_reply="What is the flight number?",
    ),
    Scenario(
        name="SUCCESS",
        domain="flights",
        turns=[("when does flight four seven two arrive", "SUCCESS")],
        final_reply="Flight 472 from Dallas to Newark: the arrival time is 12:20 pm.",
    ),
    Scenario(
        name="DATABASE_CONFLICT",
        domain="flights",
        turns=[("when does flight 100 arrive", "DATABASE_CONFLICT", "CONFIRM_VALUE")],
        final_reply="You said the flight number is 100. Is that right?",
    ),
    Scenario(
        name="UNKNOWN_QUERY",
        domain="flights",
        turns=[("from Dallas to Newark due around 1:20 pm", "UNKNOWN_QUERY")],
        final_reply=(
            "There are 8 matches. What would you like to know: the arrival time, "
            "the departure time, the flight status, or the full schedule?"
        ),
    ),
    Scenario(
        name="FEW_MATCHES",
        domain="flights",
        turns=[("flights from Boston to Chicago arriving around 7:40 pm", "FEW_MATCHES")],
        final_reply=(
            "I found 3 flights.\n"
            "1. Flight 561 from Boston to Chicago, departure time 4:55 pm, arrival time 7:10 pm, status on time\n"
            "2. Flight 663 from Boston to Chicago, departure time 3:10 pm, arrival time 7:40 pm, status on time\n"
            "3. Flight 328 from Boston to Chicago, departure time 6:30 pm, arrival time 8:10 pm, status on time\n"
            "Give me a flight number or a tighter time to narrow it down."
        ),
    ),
    Scenario(
        name="MANY_MATCHES",
        domain="flights",
        turns=[("flights from Dallas to Newark arriving around 1:20 pm", "MANY_MATCHES", "GET_CONSTRAINT")],
        final_reply="There are 8 matches. What is the flight number?",
    ),
]

GREETING = (
    "Welcome to the flight information service. Ask me about American Airlines "
    "arrivals and departures, or say help."
)


def run_state_suite():
    service = DialogService()
    runs = []
    # INITIAL: the resting state every dialogue starts in
    session = service.create_session("flights", backend="local", seed=0)
    assert session.transcript[0].state == "INITIAL"
    assert session.transcript[0].reply == GREETING
    for scenario in STATE_SCENARIOS:
        runs.append((scenario, run_scenario(service, scenario)))
    return runs


def test_criterion_1_state_coverage():
    started = time.monotonic()
    runs = run_state_suite()
    elapsed = time.monotonic() - started
    covered = {"INITIAL"} | {s.name for s, _ in runs}
    assert covered == {s.value for s in UpperState}
    assert elapsed < 5.0, f"state suite took {elapsed:.2f}s"
    report(1, "state coverage scenario suite, 14 dialogues")


# --------------------------------------------------------------- criterion 2

# Order soundness: for (S_i, S_j) with i earlier in the decision order, a
# turn satisfying both triggers classifies as S_i. Each case is
# (earlier state, later state, setup utterances, trigger utterance).
ORDER_PAIRS = [
    ("QUIT", "META_QUERY", [], "bye help"),
    ("QUIT", "OUT_OF_BOUNDS", [], "bye Delta"),
    ("QUIT", "STATUS_QUO", [], "bye i don't know"),
    ("QUIT", "AMBIGUOUS", [], "bye Newark"),
    ("QUIT", "INCONSISTENT", ["from Boston", "to Boston"], "bye"),
    ("QUIT", "CORRECTION", ["to Dulles"], "bye i said Dallas not Dulles"),
    ("QUIT", "MANDATORY_FIELDS", ["from Dallas"], "bye"),
    ("QUIT", "SUCCESS", [], "bye flight 472"),
    ("QUIT", "DATABASE_CONFLICT", [], "bye flight 100"),
    ("QUIT", "UNKNOWN_QUERY", [], "bye from Dallas to Newark due around 1:20 pm"),
    ("QUIT", "FEW_MATCHES", [], "bye flights from Boston to Chicago arriving around 7:40 pm"),
    ("QUIT", "MANY_MATCHES", [], "bye flights from Dallas to Newark arriving around 1:20 pm"),
    ("META_QUERY", "OUT_OF_BOUNDS", [], "help Delta"),
    ("META_QUERY", "AMBIGUOUS", [], "help Newark"),
    ("META_QUERY", "INCONSISTENT", ["from Boston", "to Boston"], "help"),
    ("META_QUERY", "CORRECTION", ["to Dulles"], "help i said Dallas not Dulles"),
    ("META_QUERY", "MANDATORY_FIELDS", ["from Dallas"], "what cities do you know about"),
    ("META_QUERY", "SUCCESS", [], "help flight 472"),
    ("META_QUERY", "MANY_MATCHES", [], "help flights from Dallas to Newark arriving around 1:20 pm"),
    ("OUT_OF_BOUNDS", "STATUS_QUO", [], "Delta i don't know"),
    ("OUT_OF_BOUNDS", "AMBIGUOUS", [], "Delta Newark"),
    ("OUT_OF_BOUNDS", "INCONSISTENT", ["from Boston", "to Boston"], "Delta"),
    ("OUT_OF_BOUNDS", "CORRECTION", ["to Dulles"], "Delta i said Dallas not Dulles"),
    ("OUT_OF_BOUNDS", "MANDATORY_FIELDS", [], "Delta from Dallas"),
    ("OUT_OF_BOUNDS", "SUCCESS", [], "Delta flight 472"),
    ("OUT_OF_BOUNDS", "MANY_MATCHES", [], "Delta flights from Dallas to Newark arriving around 1:20 pm"),
    ("STATUS_QUO", "INCONSISTENT", ["from Boston", "to Boston"], "i don't know"),
    ("STATUS_QUO", "MANDATORY_FIELDS", ["from Dallas"], "i don't know"),
    ("STATUS_QUO", "DATABASE_CONFLICT", ["when does flight 100 arrive"], "i don't know"),
    ("STATUS_QUO", "UNKNOWN_QUERY", ["from Dallas to Newark due around 1:20 pm"], "i don't know"),
    ("STATUS_QUO", "FEW_MATCHES", ["flights from Boston to Chicago arriving around 7:40 pm"], "i don't know"),
    ("STATUS_QUO", "MANY_MATCHES", ["flights from Dallas to Newark arriving around 1:20 pm"], ""),
    ("AMBIGUOUS", "INCONSISTENT", ["from Boston", "to Boston"], "Newark"),
    ("AMBIGUOUS", "CORRECTION", ["to Dulles"], "Newark i said Dallas not Dulles"),
    ("AMBIGUOUS", "MANDATORY_FIELDS", [], "Newark"),
    ("AMBIGUOUS", "SUCCESS", [], "Newark flight 472"),
    ("INCONSISTENT", "CORRECTION", ["from Boston", "to Dulles"], "to Boston i said Dallas not Dulles"),
    ("INCONSISTENT", "MANDATORY_FIELDS", ["from Boston"], "to Boston"),
    ("INCONSISTENT", "SUCCESS", ["from Boston"], "to Boston flight 472"),
    ("CORRECTION", "MANDATORY_FIELDS", ["to Dulles"], "i said Dallas, not Dulles"),
    ("CORRECTION", "SUCCESS", ["to Dulles"], "flight 472 i said Dallas not Dulles"),
    ("MANDATORY_FIELDS", "FEW_MATCHES", ["from Boston to Chicago"], "delayed flights"),
    ("MANDATORY_FIELDS", "MANY_MATCHES", ["from Dallas to Newark"], "delayed flights"),
    ("SUCCESS", "UNKNOWN_QUERY", [], "flight 472"),
    ("DATABASE_CONFLICT", "UNKNOWN_QUERY", [], "flight 100"),
    ("UNKNOWN_QUERY", "FEW_MATCHES", [], "from Boston to Chicago due around 7:40 pm"),
    ("UNKNOWN_QUERY", "MANY_MATCHES", [], "from Dallas to Newark due around 1:20 pm"),
]

ORDER = [s.value for s in UpperState]


def test_criterion_2_order_soundness():
    service = DialogService()
    assert len(ORDER_PAIRS) >= 30
    for earlier, later, setup, trigger in ORDER_PAIRS:
        assert ORDER.index(earlier) < ORDER.index(later)
        session = service.create_session("flights")
        for utterance in setup:
            service.step(session.id, utterance)
        response = service.step(session.id, trigger)
        assert response.state == earlier, (
            f"({earlier}, {later}): {trigger!r} -> {response.state} (cause {response.debug['cause']})"
        )
    report(2, f"order soundness on {len(ORDER_PAIRS)} constructed pairs")


# --------------------------------------------------------------- criterion 3


def test_criterion_3_query_frugality():
    turns_checked = 0
    service = DialogService()
    for scenario in STATE_SCENARIOS:
        session = service.create_session("flights")
        for step in scenario.turns:
            response = service.step(session.id, step[0])
            if response.state in PRE_QUERY:
                assert response.debug["query_count"] == 0, (scenario.name, step, response.debug)
            else:
                assert response.debug["query_count"] == 1, (scenario.name, step, response.debug)
            turns_checked += 1
    assert turns_checked >= 14
    report(3, f"query frugality over {turns_checked} scenario turns")


# --------------------------------------------------------------- criterion 4


def test_criterion_4_get_constraint_oracle(flights_pack):
    from dialogkit.dialog import select_informative_field
    from test_select_field import oracle_argmin, random_slice

    rng = Lcg(424242)
    agreements = 0
    for _ in range(100):
        rows, unbound = random_slice(rng, flights_pack.schema)
        assert len(rows) <= 1000 and len(unbound) <= 6
        chosen = select_informative_field(rows, unbound, flights_pack.schema)
        assert chosen == oracle_argmin(rows, unbound, flights_pack.schema)
        agreements += 1
    assert agreements == 100
    report(4, "select_informative_field matches the exhaustive oracle 100/100")


# --------------------------------------------------------------- criterion 5


def random_constraint_set(rng: Lcg, store):
    cities = [
        "Dallas", "Dulles", "Newark", "New York", "Boston", "Chicago", "Denver",
        "Atlanta", "Nowhere",
    ]
    kind = rng.randint(3)
    constraints = []
    if kind == 0:
        constraints.append(QueryConstraint("fltNumber", "eq", 100 + rng.randint(900)))
    else:
        time_col = "arrTime" if kind == 1 else "depTime"
        constraints.append(QueryConstraint("depCity", "eq", cities[rng.randint(len(cities))]))
        constraints.append(QueryConstraint("arrCity", "eq", cities[rng.randint(len(cities))]))
        center = 300 + rng.randint(228) * 5
        if rng.randint(2):
            window = (120, 240, 480)[rng.randint(3)]
            constraints.append(QueryConstraint(time_col, "within_window", center, window))
        else:
            constraints.append(QueryConstraint(time_col, "eq", center))
    if rng.randint(3) == 0:  # sometimes add a constraint no form carries
        constraints.append(
            QueryConstraint("status", "eq", ("on time", "delayed", "landed")[rng.randint(3)])
        )
    return constraints


def test_criterion_5_backend_equivalence(flights_pack, flights_store):
    querier = CgiQuerier(flights_pack, fetch=make_direct_fetch(flights_store, flights_pack.scrape))
    rng = Lcg(515151)
    agreements = 0
    for _ in range(200):
        constraints = random_constraint_set(rng, flights_store)
        local = exec_local(flights_store, constraints)
        remote = querier.run(constraints)
        assert remote.count == local.count, constraints
        assert sorted(remote.rows) == sorted(local.rows), constraints
        agreements += 1
    assert agreements == 200
    report(5, "local and CGI back-ends agree on 200/200 random constraint sets")


# --------------------------------------------------------------- criterion 6

REPLAY_SCRIPTS = [
    ["when does flight four seven two arrive", "bye"],
    ["flight 472", "when does it arrive?", "what is the status"],
    ["what time does Delta flight 472 reach Dallas?", "when does flight 472 arrive"],
    ["Newark", "the arrival city", "from Dallas", "around 12:20 pm", "when does it arrive"],
    ["from Boston", "to Boston", "I said Chicago, not Boston", "when do flights arrive"],
    ["what cities do you know about", "help", "i don't know", "repeat that"],
    # CONFIRM_VALUE -> RELAX_CONSTRAINT -> FEW_MATCHES
    ["flights from Boston to Chicago arriving around 3:50 pm", "yes", "yes", "yes", "yes"],
    # MANY_MATCHES -> GET_CONSTRAINT -> SUCCESS
    ["flights from Dallas to Newark arriving around 1:20 pm", "four seven two"],
    # SUCCESS -> VERIFY_USER -> SIDE_EFFECTS
    ["when does flight 472 arrive", "notify me when it lands", "1234"],
    ["when does flight 100 arrive", "no", "flight 472", "quit"],
    ["from Dallas to Newark due around 1:20 pm", "the arrival time", "four seven two"],
    ["flights from Boston to Chicago arriving around 7:40 pm", "flight 663"],
]


def test_criterion_6_replay_determinism(tmp_path):
    assert len(REPLAY_SCRIPTS) >= 10
    recorder = DialogService(persist_dir=str(tmp_path))
    paths = []
    for i, script in enumerate(REPLAY_SCRIPTS):
        session = recorder.create_session("flights", seed=100 + i)
        for utterance in script:
            recorder.step(session.id, utterance)
        paths.append(tmp_path / f"{session.id}.jsonl")
    for path in paths:
        ok, mismatches = replay_transcript(path, DialogService())
        assert ok, (path, mismatches)
    report(6, f"replay reproduced {len(paths)} transcripts byte-for-byte")


# --------------------------------------------------------------- criterion 7


def test_criterion_7_cgi_byte_exactness(flights_pack):
    cases = {
        "byNumber": (
            [QueryConstraint("fltNumber", "eq", 472)],
            "/aa/flight?fltAns=byNumber&fltNumber=472",
        ),
        "byArrival": (
            [
                QueryConstraint("depCity", "eq", "Dallas"),
                QueryConstraint("arrCity", "eq", "New York"),
                QueryConstraint("arrTime", "within_window", 630, 120),
            ],
            "/aa/flight?fltAns=byArrival&depCity=Dallas&arrCity=New+York&arrTime=630&arrTimeWindow=w2",
        ),
        "byDeparture": (
            [
                QueryConstraint("depCity", "eq", "Dallas"),
                QueryConstraint("arrCity", "eq", "New York"),
                QueryConstraint("depTime", "eq", 540),
            ],
            "/aa/flight?fltAns=byDeparture&depCity=Dallas&arrCity=New+York&depTime=540",
        ),
    }
    for form_id, (constraints, expected) in cases.items():
        request = build_cgi_request(constraints, flights_pack)
        assert request.url == expected
        assert dict(request.params)["fltAns"] == form_id
    report(7, "three mandatory-set requests byte-exact, hidden selector included")


# --------------------------------------------------------------- criterion 8


def test_criterion_8_dataset_fixture(flights_rows):
    from test_generator import PINNED_DIGEST, check_guarantees

    assert dataset_digest(flights_rows) == PINNED_DIGEST
    check_guarantees(flights_rows, 200)
    report(8, "generate_dataset(7, 200) digest and guarantee clauses hold")


# --------------------------------------------------------------- criterion 9


def test_criterion_9_porting_smoke():
    service = DialogService()
    assert len(LIBRARY_SCENARIOS) == 5
    for scenario in LIBRARY_SCENARIOS:
        run_scenario(service, scenario)
    report(9, "library pack passes its 5-dialogue suite with zero engine changes")
