"""Session orchestration: one engine per session, transcripts, persistence,
and deterministic replay."""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .dialog import DialogueContext, DialogueEngine, UpperState
from .errors import QuerierUnavailable, SessionClosed, UnknownDomain, UnknownSession
from .interactor import render_or_apologize, rules_for
from .mock_site import make_direct_fetch
from .query import CgiQuerier, LocalQuerier, TableStore, load_dataset
from .schema import DomainPack, load_domain_pack

DEFAULT_TTL_SECONDS = 30 * 60

UNAVAILABLE_REPLY = "Sorry, the information service is unreachable right now. Please try again in a moment."


def packaged_pack_root(name: str) -> Path:
    return Path(str(resources.files("dialogkit").joinpath("packs", name)))


def discover_packs(extra_dir: str | None = None) -> dict[str, DomainPack]:
    packs: dict[str, DomainPack] = {}
    base = resources.files("dialogkit").joinpath("packs")
    for child in sorted(Path(str(base)).iterdir()):
        if (child / "schema.conf").is_file():
            pack = load_domain_pack(child)
            packs[pack.schema.domain_name] = pack
    if extra_dir:
        for child in sorted(Path(extra_dir).iterdir()):
            if (child / "schema.conf").is_file():
                pack = load_domain_pack(child)
                packs[pack.schema.domain_name] = pack
    return packs


_STORE_CACHE: dict[str, TableStore] = {}


def pack_store(pack: DomainPack, dataset_path: str | None = None) -> TableStore:
    """The pack's table store; datasets are cached per path."""
    if dataset_path is None:
        if not pack.schema.dataset_file:
            raise UnknownDomain(f"{pack.schema.domain_name} declares no dataset")
        dataset_path = str(Path(pack.root) / pack.schema.dataset_file)
    key = dataset_path
    if key not in _STORE_CACHE:
        _STORE_CACHE[key] = load_dataset(dataset_path)
    return _STORE_CACHE[key]


@dataclass
class TranscriptEntry:
    turn: int
    utterance: str
    state: str
    sub_state: str | None
    reply: str
    queried: bool
    match_count: int | None
    timestamp: float

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class TurnResponse:
    reply: str
    state: str
    sub_state: str | None
    bindings: dict
    turn: int
    closed: bool
    debug: dict


@dataclass
class Session:
    id: str
    domain: str
    backend: str
    seed: int
    vary: bool
    engine: DialogueEngine
    context: DialogueContext
    transcript: list[TranscriptEntry] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = 0.0
    closed: bool = False


class DialogService:
    def __init__(
        self,
        packs: dict[str, DomainPack] | None = None,
        *,
        few_threshold: int = 5,
        cgi_url: str | None = None,
        persist_dir: str | None = None,
        ttl_seconds: float = DEFAULT_TTL_SECONDS,
        clock=time.time,
        dataset_path: str | None = None,
    ):
        self.packs = packs if packs is not None else discover_packs()
        self.few_threshold = few_threshold
        self.cgi_url = cgi_url
        self.persist_dir = Path(persist_dir) if persist_dir else None
        self.ttl_seconds = ttl_seconds
        self.clock = clock
        self.dataset_path = dataset_path
        self.sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    # ------------------------------------------------------------ sessions

    def _make_querier(self, pack: DomainPack, backend: str):
        if backend == "local":
            return LocalQuerier(pack_store(pack, self.dataset_path))
        if backend == "cgi":
            if self.cgi_url:
                return CgiQuerier(pack, base_url=self.cgi_url)
            # No site configured: run the bundled site in-process.
            store = pack_store(pack, self.dataset_path)
            return CgiQuerier(pack, fetch=make_direct_fetch(store, pack.scrape))
        raise UnknownDomain(f"unknown backend {backend!r}")

    def create_session(self, domain: str, backend: str = "local", seed: int = 0, vary: bool = False) -> Session:
        if domain not in self.packs:
            raise UnknownDomain(domain)
        if backend not in ("local", "cgi"):
            raise ValueError(f"backend must be local or cgi, not {backend!r}")
        pack = self.packs[domain]
        engine = DialogueEngine(pack, self._make_querier(pack, backend), few_threshold=self.few_threshold)
        session = Session(
            id=uuid.uuid4().hex,
            domain=domain,
            backend=backend,
            seed=seed,
            vary=vary,
            engine=engine,
            context=engine.initial_context(),
            last_access=self.clock(),
        )
        greeting = self._render(session, engine.greeting_template(), turn=0)
        session.context.last_template = engine.greeting_template()
        entry = TranscriptEntry(
            turn=0,
            utterance="",
            state=UpperState.INITIAL.value,
            sub_state=None,
            reply=greeting,
            queried=False,
            match_count=None,
            timestamp=self.clock(),
        )
        session.transcript.append(entry)
        with self._registry_lock:
            self.sessions[session.id] = session
        self._persist_header(session)
        self._persist_entry(session, entry)
        self._sweep()
        return session

    def _render(self, session: Session, template, turn: int) -> str:
        rules = rules_for(session.engine.pack)
        seed = session.seed if session.vary else None
        return render_or_apologize(template, rules, seed=seed, turn=turn)

    def _get(self, session_id: str) -> Session:
        self._sweep()
        session = self.sessions.get(session_id)
        if session is None:
            session = self._rehydrate(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def step(self, session_id: str, utterance: str) -> TurnResponse:
        session = self._get(session_id)
        with session.lock:
            if session.closed:
                raise SessionClosed(f"session {session_id} already ended")
            session.last_access = self.clock()
            turn = len(session.transcript)
            try:
                result = session.engine.run_turn(session.context, utterance)
            except QuerierUnavailable:
                reply = UNAVAILABLE_REPLY
                entry = TranscriptEntry(
                    turn=turn,
                    utterance=utterance,
                    state=session.context.upper_state.value,
                    sub_state=session.context.sub_state.value if session.context.sub_state else None,
                    reply=reply,
                    queried=False,
                    match_count=None,
                    timestamp=self.clock(),
                )
                session.transcript.append(entry)
                self._persist_entry(session, entry)
                return TurnResponse(
                    reply=reply,
                    state=session.context.upper_state.value,
                    sub_state=entry.sub_state,
                    bindings=session.context.snapshot(),
                    turn=turn,
                    closed=False,
                    debug={"cause": "querier_unavailable", "query_count": 0, "probe_count": 0, "match_count": None},
                )
            decision = result.decision
            reply = self._render(session, decision.template, turn=turn)
            session.context = result.context
            if decision.state == UpperState.QUIT:
                session.closed = True
            entry = TranscriptEntry(
                turn=turn,
                utterance=utterance,
                state=decision.state.value,
                sub_state=decision.sub_state.value if decision.sub_state else None,
                reply=reply,
                queried=decision.queried,
                match_count=decision.match_count,
                timestamp=self.clock(),
            )
            session.transcript.append(entry)
            self._persist_entry(session, entry)
            return TurnResponse(
                reply=reply,
                state=decision.state.value,
                sub_state=entry.sub_state,
                bindings=session.context.snapshot(),
                turn=turn,
                closed=session.closed,
                debug={
                    "cause": decision.cause,
                    "query_count": result.query_count,
                    "probe_count": result.probe_count,
                    "match_count": decision.match_count,
                    "changed_fields": sorted(
                        name for name, b in session.context.bindings.items() if b.turn == session.context.turn_index
                    ),
                },
            )

    def transcript(self, session_id: str) -> list[TranscriptEntry]:
        return list(self._get(session_id).transcript)

    def session_view(self, session_id: str) -> dict:
        """Current panel state, so a reloaded client can rebuild its view."""
        session = self._get(session_id)
        context = session.context
        return {
            "state": context.upper_state.value,
            "sub_state": context.sub_state.value if context.sub_state else None,
            "bindings": context.snapshot(),
            "closed": session.closed,
        }

    # --------------------------------------------------------- persistence

    def _session_file(self, session_id: str) -> Path | None:
        if self.persist_dir is None:
            return None
        return self.persist_dir / f"{session_id}.jsonl"

    def _persist_header(self, session: Session) -> None:
        path = self._session_file(session.id)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        header = {
            "kind": "session",
            "id": session.id,
            "domain": session.domain,
            "backend": session.backend,
            "seed": session.seed,
            "vary": session.vary,
            "few_threshold": self.few_threshold,
        }
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(header) + "\n")

    def _persist_entry(self, session: Session, entry: TranscriptEntry) -> None:
        path = self._session_file(session.id)
        if path is None:
            return
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps({"kind": "turn", **entry.to_json()}) + "\n")

    def _rehydrate(self, session_id: str) -> Session | None:
        """Rebuild a persisted session: transcript from disk, context by replay."""
        path = self._session_file(session_id)
        if path is None or not path.is_file():
            return None
        header, entries = read_transcript_file(path)
        if header.get("id") != session_id or header["domain"] not in self.packs:
            return None
        pack = self.packs[header["domain"]]
        engine = DialogueEngine(pack, self._make_querier(pack, header["backend"]), few_threshold=header.get("few_threshold", self.few_threshold))
        session = Session(
            id=session_id,
            domain=header["domain"],
            backend=header["backend"],
            seed=header.get("seed", 0),
            vary=header.get("vary", False),
            engine=engine,
            context=engine.initial_context(),
            last_access=self.clock(),
        )
        session.context.last_template = engine.greeting_template()
        for entry in entries[1:]:  # replay everything after the greeting
            result = engine.run_turn(session.context, entry.utterance)
            session.context = result.context
            if result.decision.state == UpperState.QUIT:
                session.closed = True
        session.transcript = entries
        with self._registry_lock:
            self.sessions[session_id] = session
        return session

    def _sweep(self) -> None:
        if not self.ttl_seconds:
            return
        now = self.clock()
        with self._registry_lock:
            stale = [sid for sid, s in self.sessions.items() if now - s.last_access > self.ttl_seconds]
            for sid in stale:
                del self.sessions[sid]


def read_transcript_file(path: str | Path) -> tuple[dict, list[TranscriptEntry]]:
    header: dict = {}
    entries: list[TranscriptEntry] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if record.get("kind") == "session":
            header = record
        elif record.get("kind") == "turn":
            record.pop("kind")
            entries.append(TranscriptEntry(**record))
    return header, entries


@dataclass
class ReplayMismatch:
    turn: int
    utterance: str
    expected: str
    actual: str


def replay_transcript(path: str | Path, service: DialogService) -> tuple[bool, list[ReplayMismatch]]:
    """Feed a recorded transcript into a fresh session; compare every reply."""
    header, entries = read_transcript_file(path)
    session = service.create_session(
        header["domain"], backend=header.get("backend", "local"), seed=header.get("seed", 0), vary=header.get("vary", False)
    )
    mismatches: list[ReplayMismatch] = []
    greeting = session.transcript[0].reply
    if entries and entries[0].reply != greeting:
        mismatches.append(ReplayMismatch(0, "", entries[0].reply, greeting))
    for entry in entries[1:]:
        response = service.step(session.id, entry.utterance)
        if response.reply != entry.reply or response.state != entry.state:
            mismatches.append(ReplayMismatch(entry.turn, entry.utterance, entry.reply, response.reply))
    return (not mismatches), mismatches
