"""HTTP what-if service over a directory of model files.

Sessions live as files in a session directory: a base model id plus the
evidence applied so far.  Reports are recomputed from scratch on every
read (desk-scale networks make this cheap), so a session file alone
reproduces its report.  Every payload names the model hash, evidence
count, and a state hash so clients can tell which state produced it.
Mutations on one session are serialized by a per-session lock; reads
need none (session files are replaced atomically).
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query

from .modelio import (
    ModelDocument,
    ModelFormatError,
    SessionRecord,
    list_models,
    parse_evidence_item,
    load_model,
    load_session,
    save_session,
    serialize_evidence,
    serialize_model,
    to_spec,
)
from .moment import BeliefError
from .portfolio import EvidenceItem, evaluate


def _short_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:12]


def _evidence_json(item: EvidenceItem) -> dict:
    out = {"variable": item.variable, "kind": item.kind}
    if item.kind == "normal":
        out["mean"] = item.mean
        out["sd"] = item.sd
    else:
        out["value"] = item.mean
    out["note"] = item.note
    return out


def _report_json(doc: ModelDocument, extra, riskless_rate: float) -> dict:
    report = evaluate(to_spec(doc), tuple(doc.evidence) + tuple(extra), riskless_rate)
    stocks = doc.portfolio.stocks
    return {
        "variables": list(report.variables),
        "mean": [float(x) for x in report.mean],
        "covariance": [[float(x) for x in row] for row in report.covariance],
        "assets": {
            v: {"mean": float(m), "sd": float(s)}
            for v, m, s in zip(report.variables, report.mean, report.sd)
        },
        "riskless_rate": float(riskless_rate),
        "tangency_weights": (
            None
            if report.optimal_weights is None
            else {s: float(w) for s, w in zip(stocks, report.optimal_weights)}
        ),
        "current_weights": {
            s: float(w) for s, w in zip(stocks, doc.portfolio.weights)
        },
    }


def _bad_request(e: ModelFormatError):
    return HTTPException(
        status_code=400, detail={"field": e.path or "", "message": str(e)}
    )


def create_app(model_dir, session_dir) -> FastAPI:
    """Service over ``model_dir`` (read) and ``session_dir`` (read/write)."""
    models = Path(model_dir)
    sessions = Path(session_dir)
    app = FastAPI(title="linbelief what-if service")
    locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def _lock(session_id: str) -> threading.Lock:
        with locks_guard:
            return locks.setdefault(session_id, threading.Lock())

    def _model(model_id: str) -> tuple[ModelDocument, str]:
        try:
            doc = load_model(models, model_id)
        except FileNotFoundError:
            raise HTTPException(status_code=404, detail=f"no model {model_id!r}")
        except ModelFormatError as e:
            raise HTTPException(
                status_code=422, detail=f"model {model_id!r} does not parse: {e}"
            )
        return doc, _short_hash(serialize_model(doc))

    def _session(session_id: str) -> SessionRecord:
        try:
            return load_session(sessions, session_id)
        except (FileNotFoundError, ModelFormatError):
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")

    def _versions(rec: SessionRecord, model_hash: str) -> dict:
        return {
            "session_id": rec.session_id,
            "model_id": rec.model_id,
            "model_hash": model_hash,
            "evidence_count": len(rec.evidence),
            "state_hash": _short_hash(serialize_evidence(rec.evidence)),
        }

    def _session_payload(rec: SessionRecord, riskless_rate: float) -> dict:
        doc, model_hash = _model(rec.model_id)
        try:
            report = _report_json(doc, rec.evidence, riskless_rate)
        except BeliefError as e:
            raise HTTPException(status_code=422, detail=str(e))
        return {
            **_versions(rec, model_hash),
            "created_at": rec.created_at,
            "evidence": [_evidence_json(e) for e in rec.evidence],
            "report": report,
        }

    @app.get("/models")
    def get_models() -> dict:
        return {"models": list(list_models(models))}

    @app.get("/models/{model_id}")
    def get_model(model_id: str) -> dict:
        doc, model_hash = _model(model_id)
        return {
            "id": model_id,
            "model_hash": model_hash,
            "model": json.loads(serialize_model(doc)),
        }

    @app.post("/sessions", status_code=201)
    def create_session(
        body: dict = Body(...), riskless_rate: float = Query(default=0.0)
    ) -> dict:
        model_id = body.get("model_id")
        if not isinstance(model_id, str) or not model_id:
            raise HTTPException(
                status_code=400,
                detail={"field": "model_id", "message": "model_id must be a non-empty string"},
            )
        _model(model_id)  # 404 before creating anything
        rec = SessionRecord(
            session_id=uuid.uuid4().hex[:12],
            model_id=model_id,
            created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        save_session(sessions, rec)
        return _session_payload(rec, riskless_rate)

    @app.get("/sessions/{session_id}/report")
    def get_report(
        session_id: str, riskless_rate: float = Query(default=0.0)
    ) -> dict:
        return _session_payload(_session(session_id), riskless_rate)

    @app.post("/sessions/{session_id}/evidence")
    def post_evidence(
        session_id: str,
        body: dict = Body(...),
        riskless_rate: float = Query(default=0.0),
    ) -> dict:
        try:
            item = parse_evidence_item(body, "evidence")
        except ModelFormatError as e:
            raise _bad_request(e)
        with _lock(session_id):
            rec = _session(session_id)
            updated = SessionRecord(
                rec.session_id, rec.model_id, rec.created_at, rec.evidence + (item,)
            )
            payload = _session_payload(updated, riskless_rate)  # validate first
            save_session(sessions, updated)
        return payload

    @app.delete("/sessions/{session_id}/evidence/last")
    def delete_last_evidence(
        session_id: str, riskless_rate: float = Query(default=0.0)
    ) -> dict:
        with _lock(session_id):
            rec = _session(session_id)
            if not rec.evidence:
                raise HTTPException(status_code=409, detail="no evidence to undo")
            updated = SessionRecord(
                rec.session_id, rec.model_id, rec.created_at, rec.evidence[:-1]
            )
            save_session(sessions, updated)
        return _session_payload(updated, riskless_rate)

    @app.get("/sessions/{session_id}/whatif")
    def whatif(
        session_id: str,
        evidence: str = Query(...),
        riskless_rate: float = Query(default=0.0),
    ) -> dict:
        try:
            raw = json.loads(evidence)
        except json.JSONDecodeError as e:
            raise _bad_request(ModelFormatError(f"evidence: not valid JSON: {e.msg}", "evidence"))
        if isinstance(raw, dict):
            raw = [raw]
        if not isinstance(raw, list):
            raise _bad_request(
                ModelFormatError("evidence: expected an object or array", "evidence")
            )
        try:
            items = tuple(
                parse_evidence_item(x, f"evidence[{i}]") for i, x in enumerate(raw)
            )
        except ModelFormatError as e:
            raise _bad_request(e)
        rec = _session(session_id)
        preview = SessionRecord(
            rec.session_id, rec.model_id, rec.created_at, rec.evidence + items
        )
        payload = _session_payload(preview, riskless_rate)
        payload["preview"] = True
        return payload

    return app
