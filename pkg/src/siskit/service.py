"""Session-scoped HTTP service for model inspection and what-if editing.

Each session holds an immutable baseline model plus a pending patch of cell
overrides. Edits merge into the pending patch (last write per cell wins);
commit folds the patch into the baseline, reset discards it. Sessions are
independent and serialized internally per session.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .analysis import (
    CellOverride,
    WhatIfError,
    WhatIfPatch,
    apply_patch,
    find_synergy_chains,
    find_tradeoffs,
    matrix_chains,
    most_affected_qas,
)
from .model import (
    AssessmentModel,
    Dimension,
    ModelError,
    parse_document,
    resolve_matrices,
    serialize_matrix,
    serialize_model,
)
from .render import scores_document
from .scoring import ScoringError, score_model

DEFAULT_IDLE_TIMEOUT = 60 * 60  # seconds


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: Any = None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


@dataclass
class Session:
    session_id: str
    baseline: AssessmentModel
    raw_priorities: bool
    pending: dict[tuple, CellOverride] = field(default_factory=dict)
    created_at: float = field(default_factory=time.monotonic)
    last_touched: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def pending_patch(self) -> WhatIfPatch:
        return WhatIfPatch(tuple(self.pending.values()))

    def effective_model(self, include_pending: bool) -> AssessmentModel:
        if include_pending and self.pending:
            return apply_patch(self.baseline, self.pending_patch())
        return self.baseline

    def scores(self, include_pending: bool) -> list:
        model = self.effective_model(include_pending)
        return score_model(model, use_raw_priorities=self.raw_priorities)


class SessionStore:
    def __init__(self, idle_timeout: float = DEFAULT_IDLE_TIMEOUT):
        self.idle_timeout = idle_timeout
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, baseline: AssessmentModel, raw_priorities: bool) -> Session:
        session = Session(secrets.token_hex(16), baseline, raw_priorities)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise ServiceError(404, "session_not_found", f"no session {session_id!r}")
            if time.monotonic() - session.last_touched > self.idle_timeout:
                del self._sessions[session_id]
                raise ServiceError(404, "session_expired", f"session {session_id!r} expired")
            session.last_touched = time.monotonic()
            return session


def _parse_cell_body(body: Any, model: AssessmentModel) -> CellOverride:
    if not isinstance(body, dict):
        raise ServiceError(400, "invalid_body", "request body must be a JSON object")
    missing = [k for k in ("alternative", "dim_from", "dim_to", "row", "col", "effect") if k not in body]
    if missing:
        raise ServiceError(400, "invalid_body", f"missing fields: {', '.join(missing)}")
    effect = body["effect"]
    if not isinstance(effect, int) or isinstance(effect, bool) or effect not in (-1, 0, 1):
        raise ServiceError(400, "invalid_effect", f"effect must be -1, 0 or +1, got {effect!r}")
    try:
        dim_from = Dimension(body["dim_from"])
        dim_to = Dimension(body["dim_to"])
    except ValueError as exc:
        raise ServiceError(400, "invalid_body", str(exc)) from None
    try:
        alt = model.alternative(body["alternative"])
    except KeyError:
        raise ServiceError(404, "unknown_cell", f"unknown alternative {body['alternative']!r}") from None
    if alt.is_theoretical_optimal:
        raise ServiceError(403, "optimal_readonly", "the theoretical optimal is read-only")
    for matrix in resolve_matrices(alt, model):
        if matrix.pair == (dim_from, dim_to):
            if body["row"] in matrix.row_qas and body["col"] in matrix.col_qas:
                return CellOverride(alt.id, dim_from, dim_to, body["row"], body["col"], effect)
            break
    raise ServiceError(
        404,
        "unknown_cell",
        f"no cell {body['row']!r} -> {body['col']!r} in matrix "
        f"{dim_from.value}-{dim_to.value} of alternative {alt.id!r}",
    )


def create_app(
    idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
    snapshot_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="siskit service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(idle_timeout)
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    def scores_or_409(session: Session, include_pending: bool) -> dict:
        try:
            return scores_document(
                session.effective_model(include_pending), session.scores(include_pending)
            )
        except ScoringError as exc:
            raise ServiceError(409, "no_theoretical_optimal", str(exc)) from None

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "model" not in body:
            raise ServiceError(400, "invalid_body", "expected {\"model\": {...}}")
        try:
            model = parse_document(body["model"])
        except ModelError as exc:
            raise ServiceError(400, "invalid_model", str(exc), detail={"path": exc.path}) from None
        session = store.create(model, bool(body.get("raw_priorities", False)))
        return {"session_id": session.session_id}

    @app.get("/sessions/{session_id}/model")
    async def get_model(session_id: str, pending: bool = False):
        session = store.get(session_id)
        with session.lock:
            model = session.effective_model(pending)
            doc = serialize_model(model)
            # clients render grids for every alternative, including those
            # authored as decision maps only
            for entry in doc["alternatives"]:
                alt = model.alternative(entry["id"])
                entry["resolved_matrices"] = [
                    serialize_matrix(m) for m in resolve_matrices(alt, model)
                ]
            return doc

    @app.get("/sessions/{session_id}/scores")
    async def get_scores(session_id: str, pending: bool = False):
        session = store.get(session_id)
        with session.lock:
            return scores_or_409(session, pending)

    @app.patch("/sessions/{session_id}/cells")
    async def patch_cell(session_id: str, request: Request):
        session = store.get(session_id)
        body = await request.json()
        with session.lock:
            override = _parse_cell_body(body, session.baseline)
            key = (override.alternative_id, override.dim_from, override.dim_to,
                   override.row_qa, override.col_qa)
            old_scores = {(r.dim_from, r.dim_to): r for r in session.scores(include_pending=True)}
            session.pending[key] = override
            new_scores = {(r.dim_from, r.dim_to): r for r in session.scores(include_pending=True)}
            pair = (override.dim_from, override.dim_to)
            old = old_scores.get(pair)
            new = new_scores.get(pair)
            alt_id = override.alternative_id
            old_raw = old.raw.get(alt_id, 0.0) if old else 0.0
            new_raw = new.raw.get(alt_id, 0.0) if new else 0.0
            old_pct = old.normalized_percent.get(alt_id) if old else None
            new_pct = new.normalized_percent.get(alt_id) if new else None
            return {
                "pair": {"dim_from": pair[0].value, "dim_to": pair[1].value},
                "alternative": alt_id,
                "old_raw": old_raw,
                "new_raw": new_raw,
                "delta_raw": new_raw - old_raw,
                "old_pct": old_pct,
                "new_pct": new_pct,
                "delta_pct": (new_pct - old_pct)
                if old_pct is not None and new_pct is not None
                else None,
                "pair_scores": {
                    "raw": dict(new.raw) if new else {},
                    "normalized_percent": dict(new.normalized_percent) if new else {},
                },
            }

    @app.post("/sessions/{session_id}/commit")
    async def commit(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if session.pending:
                try:
                    session.baseline = apply_patch(session.baseline, session.pending_patch())
                except WhatIfError as exc:
                    raise ServiceError(409, "patch_conflict", str(exc)) from None
                session.pending.clear()
                if snapshot_dir is not None:
                    path = Path(snapshot_dir) / f"{session.session_id}.json"
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(json.dumps(serialize_model(session.baseline), indent=2))
            return {"status": "committed"}

    @app.post("/sessions/{session_id}/reset")
    async def reset(session_id: str):
        session = store.get(session_id)
        with session.lock:
            session.pending.clear()
            return {"status": "reset"}

    @app.get("/sessions/{session_id}/analysis")
    async def analysis(session_id: str, pending: bool = False):
        session = store.get(session_id)
        with session.lock:
            model = session.effective_model(pending)
            dims = {qa.id: qa.dimension for qa in model.qas}
            out = []
            for alt in model.alternatives:
                if alt.is_theoretical_optimal:
                    continue
                if alt.dmap is not None:
                    chains = find_synergy_chains(alt.dmap, min_length=2)
                else:
                    chains = [
                        c for c in matrix_chains(resolve_matrices(alt, model), model)
                        if c.length >= 2
                    ]
                summary = most_affected_qas(alt, model)
                out.append(
                    {
                        "alternative": alt.id,
                        "tradeoffs": [
                            {
                                "from": t.from_qa,
                                "to": t.to_qa,
                                "same_dimension": t.same_dimension,
                                "impact_level": t.impact_level.value if t.impact_level else None,
                            }
                            for t in find_tradeoffs(alt, model)
                        ],
                        "chains": [
                            {
                                "path": list(c.path),
                                "dimensions": sorted(d.value for d in c.dimensions_crossed),
                                "length": c.length,
                            }
                            for c in chains
                        ],
                        "most_affected": [
                            {
                                "qa": c.qa_id,
                                "positive_in": c.positive_in,
                                "negative_in": c.negative_in,
                            }
                            for c in summary.ranked_by_negative()
                        ],
                    }
                )
            return {"alternatives": out}

    return app
