"""Local HTTP service backing the companion UI.

Sessions hold the sensitive text and the substitution history in memory
on the user's side; the only endpoint that triggers an outbound engine
call is /send, and every outbound payload lands in the audit log. The
service binds to loopback by default because the whole point is that
secrets stay local.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .engines import EngineError, RegistryError
from .mechanisms import MIXED, PRISM_R, PRISM_STAR, EncodeResult, MechanismError, MechanismParams
from .pipeline import Pipeline
from .textcore import tokenize

STATES = ("drafted", "encoded", "sent", "decoded")


@dataclass
class Session:
    session_id: str
    created_at: str
    x_pri: str
    state: str = "drafted"
    encode_result: Optional[EncodeResult] = None
    y_pub: Optional[str] = None
    y_pri: Optional[str] = None
    misses: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class CreateSessionRequest(BaseModel):
    text: str = Field(min_length=1)


class EncodeRequest(BaseModel):
    method: str
    ratio: float = Field(gt=0.0, lt=1.0)
    seed: int = 0
    beta: float = Field(default=0.0, ge=0.0, le=1.0)


class SendRequest(BaseModel):
    engine: str


def _canonical_method(method: str) -> str:
    normalized = method.replace("-", "_").lower()
    aliases = {"prism_r": PRISM_R, "prism_star": PRISM_STAR, "prismstar": PRISM_STAR, "mixed": MIXED}
    if normalized not in aliases:
        raise HTTPException(status_code=422, detail=f"unknown method {method!r}")
    return aliases[normalized]


def _substitutions_payload(result: EncodeResult) -> list:
    """History view for the UI, with character spans into x_pub.

    Token positions are identical in x_pri and x_pub (substitution never
    changes token count), so spans come from re-tokenizing x_pub.
    """
    spans = tokenize(result.x_pub).char_spans()
    payload = []
    for record in result.history.records:
        start, end = spans[record.position]
        payload.append(
            {
                "position": record.position,
                "original": record.original,
                "substitute": record.substitute,
                "tag": record.tag.value if record.tag else None,
                "span": [start, end],
            }
        )
    return payload


def create_app(pipeline: Pipeline, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="prism local service")
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with sessions_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    @app.post("/v1/sessions")
    def create_session(request: CreateSessionRequest) -> dict:
        session = Session(
            session_id=uuid.uuid4().hex,
            created_at=datetime.now(timezone.utc).isoformat(),
            x_pri=request.text,
        )
        with sessions_lock:
            sessions[session.session_id] = session
        return {"session_id": session.session_id}

    @app.get("/v1/sessions/{session_id}")
    def session_view(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            result = session.encode_result
            return {
                "session_id": session.session_id,
                "created_at": session.created_at,
                "state": session.state,
                "x_pri": session.x_pri,
                "x_pub": result.x_pub if result else None,
                "y_pub": session.y_pub,
                "y_pri": session.y_pri,
                "substitutions": _substitutions_payload(result) if result else [],
                "misses": session.misses,
            }

    @app.delete("/v1/sessions/{session_id}")
    def delete_session(session_id: str) -> dict:
        get_session(session_id)
        with sessions_lock:
            sessions.pop(session_id, None)
        return {"deleted": True}

    @app.post("/v1/sessions/{session_id}/encode")
    def encode(session_id: str, request: EncodeRequest) -> dict:
        session = get_session(session_id)
        method = _canonical_method(request.method)
        with session.lock:
            if session.state not in ("drafted", "encoded"):
                raise HTTPException(
                    status_code=409, detail=f"cannot re-encode in state {session.state!r}"
                )
            try:
                params = MechanismParams(
                    method=method, ratio=request.ratio, beta=request.beta, seed=request.seed
                )
                result = pipeline.encode(session.x_pri, params)
            except (MechanismError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            session.encode_result = result
            session.state = "encoded"
            response = {
                "x_pub": result.x_pub,
                "substitutions": _substitutions_payload(result),
                "method": request.method,
            }
            if result.epsilon is not None:
                response["epsilon"] = result.epsilon
            if result.branch is not None:
                response["branch"] = result.branch
            if result.mixture is not None:
                response["mixture"] = result.mixture
            if result.warning is not None:
                response["warning"] = result.warning
            return response

    @app.post("/v1/sessions/{session_id}/send")
    def send(session_id: str, request: SendRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.state != "encoded":
                raise HTTPException(
                    status_code=409, detail=f"cannot send in state {session.state!r}"
                )
            try:
                pipeline.registry.get(request.engine)
            except RegistryError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            try:
                session.y_pub = pipeline.registry.translate(
                    request.engine, session.encode_result.x_pub
                )
            except EngineError as exc:
                raise HTTPException(status_code=502, detail=str(exc)) from exc
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            session.state = "sent"
            return {"y_pub": session.y_pub}

    @app.post("/v1/sessions/{session_id}/decode")
    def decode_session(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.state != "sent":
                raise HTTPException(
                    status_code=409, detail=f"cannot decode in state {session.state!r}"
                )
            result = pipeline.decode(session.y_pub, session.encode_result)
            session.y_pri = result.y_pri
            session.misses = [m.to_json() for m in result.misses]
            session.state = "decoded"
            return {"y_pri": session.y_pri, "misses": session.misses}

    @app.get("/v1/engines")
    def engines() -> dict:
        return {
            "engines": [
                {
                    "id": d.id,
                    "kind": d.kind,
                    "source_lang": d.source_lang,
                    "target_lang": d.target_lang,
                }
                for d in pipeline.registry.list()
            ]
        }

    @app.get("/v1/dict/stats")
    def dict_stats() -> dict:
        dictionary = pipeline.pos_dictionary or pipeline.plain_dictionary
        if dictionary is None:
            raise HTTPException(status_code=404, detail="no dictionary loaded")
        return {
            "entries": len(dictionary),
            "vocab_size": dictionary.source_vocab.size,
            "mode": dictionary.mode,
        }

    @app.get("/v1/audit")
    def audit() -> list:
        return [record.to_json() for record in pipeline.registry.audit.records()]

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
