"""A first conversation with the flight information service.

The service wires the whole pipeline: tokenizing and tagging the utterance,
chunking it, reading dialogue acts, extracting field bindings, folding them
into the frame, classifying the dialogue state, and rendering the reply.
"""
from dialogkit.service import DialogService

service = DialogService()
session = service.create_session("flights", backend="local", seed=7)

print("system>", session.transcript[0].reply)

for utterance in [
    "when does flight four seven two arrive",
    "and flight 561",            # new value, same question
    "what is the status",        # new question, same flight
    "what cities do you know about",
    "bye",
]:
    response = service.step(session.id, utterance)
    print("you   >", utterance)
    print("system>", response.reply)
    print(f"        [{response.state}, cause={response.debug['cause']}, queries={response.debug['query_count']}]")
