"""Record a real six-turn server session into the chat UI's test fixture.

The frontend mirror test replays these exact wire payloads through the view
logic, so the UI is tested against genuine server behavior without having to
spawn the Python service from vitest. Re-run after any change to the HTTP
shapes or the flight pack:

    python3 scripts/record_ui_fixture.py
"""
import json
from pathlib import Path

from fastapi.testclient import TestClient

from dialogkit.http_api import create_app
from dialogkit.service import DialogService

TURNS = [
    "flights from Dallas to Newark arriving around 1:20 pm",
    "i don't know",
    "four seven two",
    "notify me when it lands",
    "1234",
    "bye",
]

OUT = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures" / "session6.json"


def main():
    client = TestClient(create_app(DialogService()))
    create_body = {"domain": "flights", "backend": "local", "seed": 7}
    created = client.post("/api/session", json=create_body).json()
    session_id = created["session_id"]

    turns = []
    for text in TURNS:
        response = client.post(f"/api/session/{session_id}/utterance", json={"text": text})
        turns.append({"text": text, "response": response.json()})

    transcript = client.get(f"/api/session/{session_id}/transcript").json()
    closed_attempt = client.post(f"/api/session/{session_id}/utterance", json={"text": "hello"})

    fixture = {
        "create": {"request": create_body, "response": created},
        "turns": turns,
        "transcript": transcript,
        "closed_status": closed_attempt.status_code,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixture, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(turns)} turns)")


if __name__ == "__main__":
    main()
