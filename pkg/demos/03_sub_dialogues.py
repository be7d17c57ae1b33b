"""Sub-dialogues: confirming values, relaxing constraints, verifying a user.

A query that matches nothing opens a confirmation pass over the bound values
(maybe one of them is wrong), then offers to widen a negotiable constraint,
probing the back-end first so it never proposes a widening that would fail.
A successful lookup can be followed by an action, which is PIN-guarded.
"""
from dialogkit.service import DialogService

service = DialogService()

print("=== no matches: confirm, then relax, then enumerate ===")
session = service.create_session("flights")
for utterance in [
    "flights from Boston to Chicago arriving around 3:50 pm",  # nothing lands then
    "yes",  # Boston is right
    "yes",  # Chicago is right
    "yes",  # 3:50 pm is what I said
    "yes",  # fine, widen the window
    "flight 663",  # pick one of the enumerated flights
]:
    response = service.step(session.id, utterance)
    state = response.state + (f"/{response.sub_state}" if response.sub_state else "")
    print(f"you   > {utterance}")
    print(f"system> {response.reply}")
    print(f"        [{state}, probes={response.debug['probe_count']}]")

print("\n=== a PIN-guarded follow-up action ===")
session = service.create_session("flights")
for utterance in [
    "when does flight 472 arrive",
    "notify me when it lands",
    "9999",  # wrong PIN
    "1234",  # demo PIN
]:
    response = service.step(session.id, utterance)
    state = response.state + (f"/{response.sub_state}" if response.sub_state else "")
    print(f"you   > {utterance}")
    print(f"system> {response.reply}")
    print(f"        [{state}]")
