"""HTTP front door for the dialogue service."""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import SessionClosed, UnknownDomain, UnknownSession
from .service import DialogService


class CreateSessionRequest(BaseModel):
    domain: str
    backend: str = "local"
    seed: int = 0
    vary: bool = False


class UtteranceRequest(BaseModel):
    text: str = Field(max_length=2000)


def create_app(service: DialogService) -> FastAPI:
    app = FastAPI(title="dialogkit", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def error(status: int, kind: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": kind, "detail": detail})

    @app.exception_handler(UnknownDomain)
    async def unknown_domain(_: Request, exc: UnknownDomain):
        return error(404, "unknown_domain", str(exc))

    @app.exception_handler(UnknownSession)
    async def unknown_session(_: Request, exc: UnknownSession):
        return error(404, "unknown_session", str(exc))

    @app.exception_handler(SessionClosed)
    async def session_closed(_: Request, exc: SessionClosed):
        return error(409, "session_closed", str(exc))

    @app.get("/api/domains")
    def domains():
        return {
            "domains": [
                {"name": pack.schema.domain_name, "label": pack.schema.domain_label}
                for pack in service.packs.values()
            ]
        }

    @app.post("/api/session")
    def create_session(body: CreateSessionRequest):
        session = service.create_session(body.domain, backend=body.backend, seed=body.seed, vary=body.vary)
        return {"session_id": session.id, "greeting": session.transcript[0].reply}

    @app.post("/api/session/{session_id}/utterance")
    def utterance(session_id: str, body: UtteranceRequest):
        response = service.step(session_id, body.text)
        return {
            "reply": response.reply,
            "state": response.state,
            "sub_state": response.sub_state,
            "bindings": response.bindings,
            "turn": response.turn,
            "closed": response.closed,
            "debug": response.debug,
        }

    @app.get("/api/session/{session_id}/transcript")
    def transcript(session_id: str):
        entries = service.transcript(session_id)
        return {
            "session_id": session_id,
            "entries": [e.to_json() for e in entries],
            "context": service.session_view(session_id),
        }

    return app
