"""A tour of all fourteen upper-layer dialogue states.

Each block shows a minimal utterance (or short exchange) that lands the
dialogue in one state. States are tried in a fixed order every turn, so an
utterance that could mean several things settles on the earliest state whose
condition holds.
"""
from dialogkit.service import DialogService

service = DialogService()


def show(title, utterances):
    print(f"\n=== {title} ===")
    session = service.create_session("flights")
    for utterance in utterances:
        response = service.step(session.id, utterance)
        print(f"you   > {utterance}")
        state = response.state + (f"/{response.sub_state}" if response.sub_state else "")
        print(f"system> {response.reply}")
        print(f"        [{state}]")


# INITIAL is where every dialogue starts (the greeting turn).
session = service.create_session("flights")
print("=== INITIAL ===")
print("system>", session.transcript[0].reply)

show("QUIT", ["bye"])
show("META_QUERY", ["what cities do you know about"])
show("OUT_OF_BOUNDS (out-of-scope airline)", ["what time does Delta flight 472 reach Dallas?"])
show("OUT_OF_BOUNDS (unknown word)", ["what time does my plane leave"])
show("STATUS_QUO", ["i don't know"])
show("AMBIGUOUS (which field?)", ["Newark"])
show("INCONSISTENT", ["from Boston", "to Boston"])
show("CORRECTION", ["to Dulles", "I said Dallas, not Dulles"])
show("MANDATORY_FIELDS", ["from Dallas"])
show("SUCCESS", ["when does flight 472 arrive"])
show("DATABASE_CONFLICT", ["when does flight 100 arrive"])
show("UNKNOWN_QUERY", ["from Dallas to Newark due around 1:20 pm"])
show("FEW_MATCHES", ["flights from Boston to Chicago arriving around 7:40 pm"])
show("MANY_MATCHES", ["flights from Dallas to Newark arriving around 1:20 pm"])
