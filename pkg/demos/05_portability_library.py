"""Porting: the same engine running a library catalogue.

Nothing here touches engine code; the library pack is seven small text
files. It also shows the two harder ambiguity kinds: "Dickens" is both a
last name shared by two authors (lexical) and a book title (class).
"""
from dialogkit.service import DialogService

service = DialogService()
session = service.create_session("library")
print("system>", session.transcript[0].reply)

for utterance in [
    "Dickens",           # author or title?
    "the author",        # ...which author?
    "Charles",           # Charles Dickens; what about him?
    "where can i find them",
    "Oliver Twist",
    "where is the book called Dickens",  # a cue word settles the class
]:
    response = service.step(session.id, utterance)
    print("you   >", utterance)
    print("system>", response.reply)
    print(f"        [{response.state}, cause={response.debug['cause']}]")
