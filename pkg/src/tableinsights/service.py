"""REST service and persistent session store.

State lives in plain JSON files under a data directory (sessions/, reports/,
feedback.jsonl, idempotency.json) so a restarted process picks up exactly
where it stopped. Sessions record everything needed to re-render or audit a
run: the parsed table, the context, every candidate with its scores, the
recommended subset, and the ids of generated reports.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .analytics import AnalysisType
from .errors import (
    InsightError,
    ReportNotFound,
    SessionNotFound,
    UnknownInsight,
    ValidationError,
)
from .fusion import Report, ReportFormat, fuse, export
from .pipeline import generate_candidates
from .realization import (
    InsightCandidate,
    InsightSource,
    RealizerEndpoint,
    with_text,
)
from .recommend import (
    FAITHFULNESS_SHARE,
    FeedbackAction,
    FeedbackEvent,
    PreferenceModel,
    priors_from_json,
    recommend,
    recommend_naive,
    segment_of,
    uniform_prior,
    update_preferences,
)
from .rdf import TripleSet, linearize, parse_linear
from .table import ChartKind, DataTable, TableContext, detect_shape, parse_csv

DEFAULT_DATA_DIR = "./tableinsights_data"

ENV_DATA_DIR = "NBIIG_DATA_DIR"
ENV_REALIZER_URL = "NBIIG_REALIZER_URL"
ENV_SEED = "NBIIG_SEED"


@dataclass
class StoreConfig:
    data_dir: Path
    realizer: RealizerEndpoint | None = None
    alpha: float = FAITHFULNESS_SHARE
    seed: int = 0

    @classmethod
    def from_env(cls, environ: dict | None = None) -> "StoreConfig":
        env = os.environ if environ is None else environ
        url = env.get(ENV_REALIZER_URL, "").strip()
        return cls(
            data_dir=Path(env.get(ENV_DATA_DIR, DEFAULT_DATA_DIR)),
            realizer=RealizerEndpoint(url=url) if url else None,
            seed=int(env.get(ENV_SEED, "0")),
        )


@dataclass
class Session:
    id: str
    table: DataTable
    context: TableContext
    seed: int
    candidates: list[InsightCandidate]
    recommended_ids: list[str]
    selections: list[str] = field(default_factory=list)
    report_ids: list[str] = field(default_factory=list)
    created_at: float = 0.0


def candidate_to_dict(c: InsightCandidate) -> dict:
    return {
        "id": c.id,
        "linearized": linearize(c.triples) if c.triples.triples else "",
        "insight_type": c.insight_type.value if c.insight_type else None,
        "text": c.text,
        "faithfulness": c.faithfulness,
        "rec_score": c.rec_score,
        "source": c.source.value,
    }


def candidate_from_dict(raw: dict) -> InsightCandidate:
    kind = AnalysisType(raw["insight_type"]) if raw["insight_type"] else None
    if raw["linearized"]:
        # parse_linear re-infers the type from predicates, which folds
        # MOST_RECENT into VALUE; the stored type is authoritative.
        ts = TripleSet(parse_linear(raw["linearized"]).triples, kind)
    else:
        ts = TripleSet((), None)
    return InsightCandidate(
        id=raw["id"],
        triples=ts,
        insight_type=kind,
        text=raw["text"],
        faithfulness=raw["faithfulness"],
        rec_score=raw["rec_score"],
        source=InsightSource(raw["source"]),
    )


def _session_to_dict(s: Session) -> dict:
    return {
        "id": s.id,
        "table": json.loads(s.table.to_json()),
        "context": {
            "title": s.context.title,
            "subject": s.context.subject,
            "chart_kind": s.context.chart_kind.value,
        },
        "seed": s.seed,
        "candidates": [candidate_to_dict(c) for c in s.candidates],
        "recommended_ids": s.recommended_ids,
        "selections": s.selections,
        "report_ids": s.report_ids,
        "created_at": s.created_at,
    }


def _session_from_dict(raw: dict) -> Session:
    ctx = raw["context"]
    return Session(
        id=raw["id"],
        table=DataTable.from_json(json.dumps(raw["table"])),
        context=TableContext(ctx["title"], ctx["subject"], ChartKind(ctx["chart_kind"])),
        seed=raw["seed"],
        candidates=[candidate_from_dict(c) for c in raw["candidates"]],
        recommended_ids=list(raw["recommended_ids"]),
        selections=list(raw["selections"]),
        report_ids=list(raw["report_ids"]),
        created_at=raw["created_at"],
    )


def _report_to_dict(r: Report, session_id: str) -> dict:
    return {
        "id": r.id,
        "session_id": session_id,
        "title": r.title,
        "body": r.body,
        "insight_ids": list(r.insight_ids),
        "created_at": r.created_at,
    }


class SessionStore:
    """All session, report, feedback, and idempotency state for one data dir."""

    def __init__(self, config: StoreConfig):
        self.config = config
        self.sessions_dir = config.data_dir / "sessions"
        self.reports_dir = config.data_dir / "reports"
        self.feedback_path = config.data_dir / "feedback.jsonl"
        self.idempotency_path = config.data_dir / "idempotency.json"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.reports_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._last_ts = self._scan_last_timestamp()

    # -- low-level persistence ------------------------------------------------

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def _save_session(self, session: Session) -> None:
        path = self.sessions_dir / f"{session.id}.json"
        path.write_text(json.dumps(_session_to_dict(session), indent=2), encoding="utf-8")

    def _scan_last_timestamp(self) -> float:
        last = 0.0
        if self.feedback_path.exists():
            for line in self.feedback_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    last = max(last, float(json.loads(line)["timestamp"]))
        return last

    def load_feedback(self) -> list[FeedbackEvent]:
        if not self.feedback_path.exists():
            return []
        events = []
        for line in self.feedback_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                events.append(FeedbackEvent.from_dict(json.loads(line)))
        return events

    def _append_feedback(self, events: list[FeedbackEvent]) -> None:
        with self._lock:
            with self.feedback_path.open("a", encoding="utf-8") as fh:
                for event in events:
                    fh.write(json.dumps(event.to_dict()) + "\n")

    def _next_timestamp(self, requested: float | None = None) -> float:
        # The preference fold rejects out-of-order logs, so appends clamp
        # forward even if the wall clock steps back.
        with self._lock:
            ts = max(time.time() if requested is None else requested, self._last_ts)
            self._last_ts = ts
            return ts

    def preferences(self) -> PreferenceModel:
        return update_preferences(self.load_feedback())

    def _priors(self):
        path = self.config.data_dir / "priors.json"
        if path.exists():
            return priors_from_json(json.loads(path.read_text(encoding="utf-8")))
        return {}

    # -- idempotency ----------------------------------------------------------

    def idempotency_get(self, signature: str, key: str) -> dict | None:
        with self._lock:
            if not self.idempotency_path.exists():
                return None
            table = json.loads(self.idempotency_path.read_text(encoding="utf-8"))
            return table.get(f"{signature}:{key}")

    def idempotency_put(self, signature: str, key: str, status: int, body: Any) -> None:
        with self._lock:
            table = {}
            if self.idempotency_path.exists():
                table = json.loads(self.idempotency_path.read_text(encoding="utf-8"))
            table[f"{signature}:{key}"] = {"status": status, "body": body}
            self.idempotency_path.write_text(json.dumps(table, indent=2), encoding="utf-8")

    # -- domain operations ----------------------------------------------------

    def create_session(
        self,
        csv_text: str,
        title: str,
        subject: str = "other",
        chart_kind: str = "none",
        seed: int | None = None,
    ) -> Session:
        try:
            kind = ChartKind(chart_kind)
        except ValueError:
            raise ValidationError(f"unknown chart kind: {chart_kind!r}")
        table = parse_csv(csv_text)
        ctx = TableContext(title=title, subject=subject, chart_kind=kind)
        prefs = self.preferences()
        candidates = recommend_naive(
            generate_candidates(table, ctx, self.config.realizer),
            prefs,
            self.config.alpha,
        )
        shape = detect_shape(table)
        segment = segment_of(shape, ctx.subject)
        prior = self._priors().get(segment) or uniform_prior(segment)
        drawn_seed = self.config.seed if seed is None else seed
        recommended = recommend(
            table, ctx, candidates, prior, prefs, drawn_seed, self.config.alpha
        )
        session = Session(
            id=uuid.uuid4().hex[:12],
            table=table,
            context=ctx,
            seed=drawn_seed,
            candidates=candidates,
            recommended_ids=[c.id for c in recommended],
            created_at=time.time(),
        )
        with self._session_lock(session.id):
            self._save_session(session)
        return session

    def get_session(self, session_id: str) -> Session:
        path = self.sessions_dir / f"{session_id}.json"
        if not path.exists():
            raise SessionNotFound(f"no session {session_id!r}")
        return _session_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def _find(self, session: Session, insight_id: str) -> int:
        for i, c in enumerate(session.candidates):
            if c.id == insight_id:
                return i
        raise UnknownInsight(f"no insight {insight_id!r} in session {session.id}")

    def edit_insight(self, session_id: str, insight_id: str, text: str) -> InsightCandidate:
        with self._session_lock(session_id):
            session = self.get_session(session_id)
            i = self._find(session, insight_id)
            updated = with_text(session.candidates[i], text, InsightSource.USER_EDITED)
            updated = recommend_naive([updated], self.preferences(), self.config.alpha)[0]
            session.candidates[i] = updated
            self._save_session(session)
        self._append_feedback([FeedbackEvent(
            timestamp=self._next_timestamp(),
            session_id=session_id,
            insight_id=insight_id,
            insight_type=updated.insight_type,
            action=FeedbackAction.EDITED,
        )])
        return updated

    def add_insight(self, session_id: str, text: str) -> InsightCandidate:
        if not text.strip():
            raise ValidationError("insight text must be non-empty")
        with self._session_lock(session_id):
            session = self.get_session(session_id)
            raw = f"{session_id}:{len(session.candidates)}:{text}"
            candidate = InsightCandidate(
                id=hashlib.sha1(raw.encode("utf-8")).hexdigest()[:12],
                triples=TripleSet((), None),
                insight_type=None,
                text=text,
                # User-authored statements have no triples to check against;
                # they are trusted as written.
                faithfulness=1.0,
                rec_score=0.0,
                source=InsightSource.USER_ADDED,
            )
            candidate = recommend_naive([candidate], self.preferences(), self.config.alpha)[0]
            session.candidates.append(candidate)
            self._save_session(session)
        return candidate

    def generate_report(self, session_id: str, selected_ids: list[str]) -> Report:
        with self._session_lock(session_id):
            session = self.get_session(session_id)
            by_id = {c.id: c for c in session.candidates}
            unknown = [i for i in selected_ids if i not in by_id]
            if unknown:
                raise UnknownInsight(f"no insight {unknown[0]!r} in session {session.id}")
            report = fuse([by_id[i] for i in selected_ids], session.context)
            path = self.reports_dir / f"{report.id}.json"
            path.write_text(
                json.dumps(_report_to_dict(report, session_id), indent=2),
                encoding="utf-8",
            )
            session.selections = list(selected_ids)
            if report.id not in session.report_ids:
                session.report_ids.append(report.id)
            self._save_session(session)
        chosen = set(selected_ids)
        events = []
        for c in session.candidates:
            events.append(FeedbackEvent(
                timestamp=self._next_timestamp(),
                session_id=session_id,
                insight_id=c.id,
                insight_type=c.insight_type,
                action=FeedbackAction.SELECTED if c.id in chosen else FeedbackAction.SHOWN,
            ))
        self._append_feedback(events)
        return report

    def get_report(self, report_id: str) -> Report:
        path = self.reports_dir / f"{report_id}.json"
        if not path.exists():
            raise ReportNotFound(f"no report {report_id!r}")
        raw = json.loads(path.read_text(encoding="utf-8"))
        return Report(
            id=raw["id"],
            title=raw["title"],
            body=raw["body"],
            insight_ids=tuple(raw["insight_ids"]),
            created_at=raw["created_at"],
        )

    def export_report(self, report_id: str, fmt: str) -> bytes:
        try:
            report_format = ReportFormat(fmt)
        except ValueError:
            raise ValidationError(f"unknown format: {fmt!r}")
        return export(self.get_report(report_id), report_format)

    def record_feedback(self, raw: dict) -> FeedbackEvent:
        event = FeedbackEvent(
            timestamp=self._next_timestamp(raw.get("timestamp")),
            session_id=str(raw.get("session_id", "")),
            insight_id=str(raw.get("insight_id", "")),
            insight_type=AnalysisType(raw["insight_type"]) if raw.get("insight_type") else None,
            action=FeedbackAction(raw.get("action", "")),
        )
        self._append_feedback([event])
        return event


# -- HTTP layer ----------------------------------------------------------------

_NOT_FOUND = (SessionNotFound, ReportNotFound, UnknownInsight)


def _error_payload(exc: InsightError) -> dict:
    doc = (type(exc).__doc__ or "").strip().splitlines()
    return {
        "code": type(exc).__name__,
        "message": str(exc),
        "detail": doc[0] if doc else "",
    }


def session_view(session: Session) -> dict:
    return {
        "id": session.id,
        "table": json.loads(session.table.to_json()),
        "context": {
            "title": session.context.title,
            "subject": session.context.subject,
            "chart_kind": session.context.chart_kind.value,
        },
        "candidates": [candidate_to_dict(c) for c in session.candidates],
        "recommended_ids": session.recommended_ids,
        "selections": session.selections,
        "report_ids": session.report_ids,
    }


class CreateSessionBody(BaseModel):
    csv: str
    title: str
    subject: str = "other"
    chart_kind: str = "none"
    seed: int | None = None


class TextBody(BaseModel):
    text: str


class ReportBody(BaseModel):
    selected_ids: list[str]


class FeedbackBody(BaseModel):
    session_id: str
    insight_id: str
    action: str
    insight_type: str | None = None
    timestamp: float | None = None


def create_app(config: StoreConfig | None = None):
    store = SessionStore(config or StoreConfig.from_env())
    app = FastAPI(title="tableinsights")
    app.state.store = store

    @app.exception_handler(InsightError)
    async def _insight_error(request: Request, exc: InsightError):
        status = 404 if isinstance(exc, _NOT_FOUND) else 400
        return JSONResponse(_error_payload(exc), status_code=status)

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"code": "ValidationError", "message": "invalid request body",
             "detail": str(exc.errors()[:3])},
            status_code=400,
        )

    def idempotent(signature: str, key: str | None,
                   produce: Callable[[], tuple[dict, int]]):
        if key:
            hit = store.idempotency_get(signature, key)
            if hit is not None:
                return JSONResponse(hit["body"], status_code=hit["status"])
        body, status = produce()
        if key:
            store.idempotency_put(signature, key, status, body)
        return JSONResponse(body, status_code=status)

    @app.post("/sessions")
    def post_session(
        body: CreateSessionBody,
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ):
        def produce():
            session = store.create_session(
                body.csv, body.title, body.subject, body.chart_kind, body.seed
            )
            return session_view(session), 201
        return idempotent("POST /sessions", idempotency_key, produce)

    @app.get("/sessions/{session_id}/insights")
    def get_insights(session_id: str):
        session = store.get_session(session_id)
        return {
            "session_id": session.id,
            "candidates": [candidate_to_dict(c) for c in session.candidates],
            "recommended_ids": session.recommended_ids,
            "selections": session.selections,
        }

    @app.patch("/sessions/{session_id}/insights/{insight_id}")
    def patch_insight(
        session_id: str,
        insight_id: str,
        body: TextBody,
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ):
        def produce():
            return candidate_to_dict(store.edit_insight(session_id, insight_id, body.text)), 200
        return idempotent(
            f"PATCH /sessions/{session_id}/insights/{insight_id}", idempotency_key, produce
        )

    @app.post("/sessions/{session_id}/insights")
    def post_insight(
        session_id: str,
        body: TextBody,
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ):
        def produce():
            return candidate_to_dict(store.add_insight(session_id, body.text)), 201
        return idempotent(f"POST /sessions/{session_id}/insights", idempotency_key, produce)

    @app.post("/sessions/{session_id}/report")
    def post_report(
        session_id: str,
        body: ReportBody,
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ):
        def produce():
            report = store.generate_report(session_id, body.selected_ids)
            return _report_to_dict(report, session_id), 200
        return idempotent(f"POST /sessions/{session_id}/report", idempotency_key, produce)

    @app.get("/reports/{report_id}")
    def get_report(report_id: str, format: str = "plain"):
        payload = store.export_report(report_id, format)
        media = "text/markdown" if format == "markdown" else "text/plain"
        return Response(content=payload, media_type=f"{media}; charset=utf-8")

    @app.post("/feedback")
    def post_feedback(
        body: FeedbackBody,
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ):
        def produce():
            event = store.record_feedback(body.model_dump())
            return event.to_dict(), 200
        return idempotent("POST /feedback", idempotency_key, produce)

    return app
