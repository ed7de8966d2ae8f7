"""HTTP facade for interactive, analyst-steered filtering.

Each uploaded log opens a session holding a stack of immutable snapshots:
applying a pipeline pushes a new snapshot, undo pops one. Reads are pure
functions of the current snapshot, so concurrent readers never observe
partial state; mutations are serialized per session by a lock. Sessions are
memory-only and expire after an idle timeout.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .filters import FilterPipeline, PipelineError
from .io import parse_json_ocel, write_json_ocel, OcelParseError
from .model import OcelLog, validate
from .sampling import SampleSpec, Strategy, sample
from .stats import LogSummary, relation_matrix, summarize

MAX_PAGE_SIZE = 1000


@dataclass(frozen=True)
class ServiceConfig:
    session_ttl: float = 3600.0
    max_snapshots: int = 16
    max_upload_bytes: int = 64 * 1024 * 1024
    static_dir: Path | None = None


@dataclass(frozen=True)
class Snapshot:
    """One immutable (log, summary) pair; readers always grab both at once."""

    log: OcelLog
    summary: LogSummary


@dataclass
class Session:
    id: str
    stack: list  # Snapshot | None once evicted
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)

    def touch(self) -> None:
        self.last_access = time.monotonic()

    @property
    def depth(self) -> int:
        return len(self.stack)

    def current(self) -> Snapshot:
        return self.stack[-1]


class SessionStore:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, log: OcelLog) -> Session:
        session = Session(id=uuid.uuid4().hex[:12],
                          stack=[Snapshot(log, summarize(log))])
        with self._lock:
            self._purge_expired()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge_expired()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown log id {session_id!r}")
        session.touch()
        return session

    def _purge_expired(self) -> None:
        cutoff = time.monotonic() - self.config.session_ttl
        expired = [sid for sid, s in self._sessions.items() if s.last_access < cutoff]
        for sid in expired:
            del self._sessions[sid]

    def push_snapshot(self, session: Session, log: OcelLog) -> int:
        """Append a snapshot, evicting the oldest live one beyond the cap."""
        session.stack.append(Snapshot(log, summarize(log)))
        live = sum(1 for s in session.stack if s is not None)
        if live > self.config.max_snapshots:
            for index, snapshot in enumerate(session.stack):
                if snapshot is not None:
                    session.stack[index] = None
                    break
        return len(session.stack) - 1


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = SessionStore(config)
    app = FastAPI(title="ocelkit service", version="0.1.0")
    app.state.store = store

    @app.post("/api/logs")
    async def upload_log(request: Request):
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            raise HTTPException(status_code=413, detail="uploaded document too large")
        try:
            log = parse_json_ocel(body)
        except OcelParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        report = validate(log)
        if not report.ok:
            raise HTTPException(
                status_code=400,
                detail=[v.message for v in report.violations][:20],
            )
        session = store.create(log)
        return {"log_id": session.id, "snapshot": 0,
                "summary": session.current().summary.to_dict()}

    @app.get("/api/logs/{log_id}/summary")
    def get_summary(log_id: str):
        session = store.get(log_id)
        return {"snapshot": session.depth - 1, "depth": session.depth,
                "summary": session.current().summary.to_dict()}

    @app.get("/api/logs/{log_id}/matrix")
    def get_matrix(log_id: str):
        session = store.get(log_id)
        return {"snapshot": session.depth - 1,
                "matrix": relation_matrix(session.current().log).to_dict()}

    @app.get("/api/logs/{log_id}/events")
    def get_events(log_id: str, offset: int = 0, limit: int = 100):
        session = store.get(log_id)
        if offset < 0 or limit < 0 or limit > MAX_PAGE_SIZE:
            raise HTTPException(status_code=422, detail="offset/limit out of range")
        log = session.current().log
        page = log.events[offset:offset + limit]
        from .io import format_timestamp

        return {
            "total": len(log.events),
            "offset": offset,
            "rows": [
                {
                    "id": e.id,
                    "activity": e.activity,
                    "timestamp": format_timestamp(e.timestamp),
                    "omap": sorted(e.omap),
                    "otypes": sorted({log.objects[o].otype for o in e.omap if o in log.objects}),
                }
                for e in page
            ],
        }

    @app.post("/api/logs/{log_id}/pipeline")
    async def apply_pipeline_endpoint(log_id: str, request: Request):
        session = store.get(log_id)
        body = await request.body()
        try:
            pipeline = FilterPipeline.from_json(body)
        except PipelineError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        with session.lock:
            base = session.current().log
            try:
                filtered, report = pipeline.apply(base)
            except PipelineError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            index = store.push_snapshot(session, filtered)
        return {"snapshot": index, "diff": report.to_dict(),
                "summary": session.current().summary.to_dict()}

    @app.post("/api/logs/{log_id}/undo")
    def undo(log_id: str):
        session = store.get(log_id)
        with session.lock:
            if session.depth <= 1:
                raise HTTPException(status_code=409, detail="nothing to undo")
            if session.stack[-2] is None:
                raise HTTPException(status_code=410,
                                    detail="previous snapshot was evicted")
            session.stack.pop()
            return {"snapshot": session.depth - 1,
                    "summary": session.current().summary.to_dict()}

    @app.get("/api/logs/{log_id}/export")
    def export(log_id: str):
        session = store.get(log_id)
        data = write_json_ocel(session.current().log)
        return Response(content=data, media_type="application/json",
                        headers={"Content-Disposition":
                                 f'attachment; filename="{log_id}.jsonocel"'})

    def _sample_spec(strategy: str, k: int | None, seed: int) -> SampleSpec:
        try:
            chosen = Strategy(strategy)
        except ValueError:
            raise HTTPException(status_code=422,
                                detail=f"unknown strategy {strategy!r}") from None
        if chosen is Strategy.CONNECTED:
            return SampleSpec(strategy=chosen)
        if k is None:
            raise HTTPException(status_code=422,
                                detail=f"strategy {strategy!r} requires k")
        return SampleSpec(strategy=chosen, k=k, seed=seed)

    @app.get("/api/logs/{log_id}/samples")
    def get_samples(log_id: str, strategy: str, k: int | None = None, seed: int = 0):
        session = store.get(log_id)
        spec = _sample_spec(strategy, k, seed)
        log = session.current().log
        try:
            result = sample(log, spec)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        if spec.strategy is Strategy.CONNECTED:
            blocks = result.blocks
            return {
                "strategy": spec.strategy.value,
                "blocks": [{"index": i, "events": len(b), "first_event": b[0]}
                           for i, b in enumerate(blocks)],
            }
        return {"strategy": spec.strategy.value, "k": spec.k, "seed": spec.seed,
                "summary": summarize(result).to_dict()}

    @app.get("/api/logs/{log_id}/samples/export")
    def export_sample(log_id: str, strategy: str, k: int | None = None,
                      seed: int = 0, block: int | None = None):
        session = store.get(log_id)
        spec = _sample_spec(strategy, k, seed)
        log = session.current().log
        try:
            result = sample(log, spec)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        if spec.strategy is Strategy.CONNECTED:
            if block is None or not 0 <= block < len(result):
                raise HTTPException(status_code=422,
                                    detail=f"block must be in [0, {len(result)})")
            payload = write_json_ocel(result.block_log(block))
            name = f"{log_id}.block{block:03d}.jsonocel"
        else:
            payload = write_json_ocel(result)
            name = f"{log_id}.sample.jsonocel"
        return Response(content=payload, media_type="application/json",
                        headers={"Content-Disposition": f'attachment; filename="{name}"'})

    if config.static_dir is not None:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")
    else:
        @app.get("/")
        def index():
            return JSONResponse({"service": "ocelkit",
                                 "hint": "build the web UI and pass --static-dir to serve it"})

    return app
