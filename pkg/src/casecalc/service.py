"""HTTP facade over the engine for the what-if UI and scripts.

Sessions are in-memory evaluators over one immutable document each; the case
file remains the system of record.  Endpoints (JSON over HTTP, prefix /v1):

    POST   /v1/sessions                         upload a case document
    GET    /v1/sessions/{id}/valuation          values + colors + labels
    PUT    /v1/sessions/{id}/overrides/{node}   install a manual override
    DELETE /v1/sessions/{id}/overrides/{node}   remove it
    GET    /v1/sessions/{id}/graph              nodes and links for rendering
    GET    /v1/sessions/{id}/report             full evaluation report
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query, Request, Response

from .document import CaseDocument, parse, to_json_dict
from .errors import DocumentError, UnknownNodeId
from .evaluation import EvaluationParams, View, evaluate_document
from .graph import LinkKind
from .propagation import Color, Rule
from .report import sentencing_skeleton

DEFAULT_TTL_MINUTES = 60.0


@dataclass
class Session:
    session_id: str
    document: CaseDocument
    overrides: dict = field(default_factory=dict)     # node -> (value, note)
    view: View = View.IGNORE_DEFEATERS
    created_at: float = field(default_factory=time.monotonic)
    last_used: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def touch(self):
        self.last_used = time.monotonic()


class SessionStore:
    def __init__(self, ttl_minutes: float = DEFAULT_TTL_MINUTES):
        self._sessions: dict = {}
        self._ttl = ttl_minutes * 60.0
        self._lock = threading.Lock()

    def create(self, document: CaseDocument) -> Session:
        session = Session(session_id=uuid.uuid4().hex, document=document)
        with self._lock:
            self._expire()
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._expire()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.touch()
        return session

    def _expire(self):
        now = time.monotonic()
        stale = [k for k, s in self._sessions.items() if now - s.last_used > self._ttl]
        for k in stale:
            del self._sessions[k]


def _params(
    session: Session,
    rule: Optional[str],
    thresholds: Optional[str],
    view: Optional[str],
) -> EvaluationParams:
    parsed_thresholds = None
    if thresholds:
        try:
            cutoffs = [float(part) for part in thresholds.split(",")]
        except ValueError:
            raise HTTPException(status_code=422, detail="thresholds must be numbers")
        colors = [Color.RED, Color.AMBER, Color.GREEN]
        if len(cutoffs) > 3 or sorted(cutoffs) != cutoffs:
            raise HTTPException(status_code=422, detail="thresholds must be at most three increasing cutoffs")
        parsed_thresholds = tuple(zip(cutoffs, colors[3 - len(cutoffs):]))
    if rule is not None and rule not in (Rule.PRODUCT.value, Rule.SUM_OF_DOUBTS.value):
        raise HTTPException(status_code=422, detail=f"unknown rule {rule!r}")
    try:
        chosen_view = View(view) if view else session.view
    except ValueError:
        raise HTTPException(status_code=422, detail=f"unknown view {view!r}")
    return EvaluationParams(rule=rule, thresholds=parsed_thresholds, view=chosen_view)


def _valuation_payload(session: Session, params: EvaluationParams) -> dict:
    result = evaluate_document(session.document, params, extra_overrides=session.overrides)
    body = result.to_json_dict()
    return {
        "session": session.session_id,
        "params": {
            "rule": body["confidence"]["rule"],
            "view": params.view.value,
            "thresholds": [
                [cutoff, color.value]
                for cutoff, color in (params.thresholds or session.document.propagation.thresholds)
            ],
        },
        "top_claim": body["case"]["top_claim"],
        "values": body["confidence"]["values"],
        "labels": body["labeling"],
        "structure": body["structure"],
        "severity_gate": body["severity"]["gate"],
    }


def create_app(cors_origins=(), session_ttl_minutes: float = DEFAULT_TTL_MINUTES) -> FastAPI:
    app = FastAPI(title="casecalc evaluation service", version="1")
    store = SessionStore(ttl_minutes=session_ttl_minutes)
    app.state.store = store

    if cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/v1/sessions", status_code=201)
    async def create_session(request: Request):
        payload = await request.body()
        try:
            document = parse(payload)
        except DocumentError as exc:
            raise HTTPException(status_code=400, detail=exc.diagnostics)
        session = store.create(document)
        return {"session_id": session.session_id}

    @app.get("/v1/sessions/{session_id}/valuation")
    def get_valuation(
        session_id: str,
        rule: Optional[str] = Query(default=None),
        thresholds: Optional[str] = Query(default=None),
        view: Optional[str] = Query(default=None),
    ):
        session = store.get(session_id)
        return _valuation_payload(session, _params(session, rule, thresholds, view))

    @app.put("/v1/sessions/{session_id}/overrides/{node_id}")
    def put_override(
        session_id: str,
        node_id: str,
        body: dict = Body(...),
        rule: Optional[str] = Query(default=None),
        thresholds: Optional[str] = Query(default=None),
        view: Optional[str] = Query(default=None),
    ):
        session = store.get(session_id)
        if "value" not in body:
            raise HTTPException(status_code=422, detail="body must carry a value")
        try:
            value = float(body["value"])
        except (TypeError, ValueError):
            raise HTTPException(status_code=422, detail="value must be a number")
        if not 0.0 <= value <= 1.0:
            raise HTTPException(status_code=422, detail="value must lie in [0,1]")
        try:
            session.document.case.node(node_id)
        except UnknownNodeId:
            raise HTTPException(status_code=404, detail=f"unknown node {node_id!r}")
        params = _params(session, rule, thresholds, view)
        with session.lock:
            before = _valuation_payload(session, params)
            session.overrides[node_id] = (value, str(body.get("note", "")))
            after = _valuation_payload(session, params)
        return _with_delta(before, after)

    @app.delete("/v1/sessions/{session_id}/overrides/{node_id}")
    def delete_override(
        session_id: str,
        node_id: str,
        rule: Optional[str] = Query(default=None),
        thresholds: Optional[str] = Query(default=None),
        view: Optional[str] = Query(default=None),
    ):
        session = store.get(session_id)
        params = _params(session, rule, thresholds, view)
        with session.lock:
            before = _valuation_payload(session, params)
            session.overrides.pop(node_id, None)
            after = _valuation_payload(session, params)
        return _with_delta(before, after)

    @app.get("/v1/sessions/{session_id}/graph")
    def get_graph(session_id: str):
        session = store.get(session_id)
        graph = session.document.case
        return {
            "top_claim": graph.top_claim,
            "nodes": to_json_dict(session.document)["case"]["nodes"],
            "links": [
                {"source": l.source, "target": l.target, "kind": l.kind.value}
                for l in sorted(graph.links, key=lambda l: (l.kind.value, l.source, l.target))
            ],
        }

    @app.get("/v1/sessions/{session_id}/report")
    def get_report(
        session_id: str,
        rule: Optional[str] = Query(default=None),
        thresholds: Optional[str] = Query(default=None),
        view: Optional[str] = Query(default=None),
    ):
        session = store.get(session_id)
        params = _params(session, rule, thresholds, view)
        result = evaluate_document(session.document, params, extra_overrides=session.overrides)
        body = result.to_json_dict()
        body["sentencing"] = sentencing_skeleton(session.document, result)
        return body

    return app


def _with_delta(before: dict, after: dict) -> dict:
    changed = []
    for node, entry in after["values"].items():
        if before["values"].get(node) != entry:
            changed.append(node)
    after["delta"] = sorted(changed)
    return after


app = create_app()
