"""HTTP service for rating sessions.

Raters identify themselves with a self-chosen rater id. Every accepted
judgment is persisted to the append-only store before the request is
acknowledged, so a crash or restart never loses acknowledged work. No
response ever contains the sealed arm key or a model name.
"""

from __future__ import annotations

import socket
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

import uvicorn
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .store import STAGE1_KIND, STAGE2_KIND, ConflictingRecord, JudgmentStore


class PortInUse(OSError):
    pass


class ApiError(HTTPException):
    def __init__(self, status_code: int, code: str, detail: str):
        super().__init__(status_code=status_code, detail=detail)
        self.code = code


class RatingIn(BaseModel):
    sample_id: str = Field(min_length=1)
    rater_id: str = Field(min_length=1)
    arm: Literal["A", "B"]
    relevance: int = Field(ge=1, le=4)
    descriptiveness: int = Field(ge=1, le=4)
    clarity: int = Field(ge=1, le=4)


class LabelIn(BaseModel):
    sample_id: str = Field(min_length=1)
    heuristic: Literal["H1", "H2", "H3", "H4"]
    rater_id: str = Field(min_length=1)
    verdict: Literal["TP", "FP"]


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def create_app(session: dict, store: JudgmentStore, ui_dir: str | Path | None = None) -> FastAPI:
    if not session.get("items"):
        raise ValueError("session has no items; refusing to serve")
    stage = session["stage"]
    items = session["items"]
    # The sealed key never crosses into the app state that handlers see.
    stage1_ids = {item["sample_id"] for item in items} if stage == 1 else set()
    stage2_keys = (
        {(item["sample_id"], item["heuristic"]) for item in items} if stage == 2 else set()
    )
    write_lock = threading.Lock()

    app = FastAPI(title="prscrub annotation service")

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code, content={"error": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(HTTPException)
    async def http_error_handler(request: Request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code, content={"error": "http_error", "detail": str(exc.detail)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "validation_error", "detail": str(exc.errors())},
        )

    @app.get("/api/session")
    def session_meta():
        meta = {"stage": stage, "item_count": len(items)}
        if stage == 1:
            meta["criteria"] = session["criteria"]
            meta["scale"] = session["scale"]
        else:
            meta["heuristics"] = session["heuristics"]
            meta["verdicts"] = session["verdicts"]
        return meta

    def _stage1_pending(rater: str):
        pending = []
        for item in items:
            arms = [
                arm
                for arm in ("A", "B")
                if (STAGE1_KIND, item["sample_id"], rater, arm) not in store.records
            ]
            if arms:
                pending.append((item, arms))
        return pending

    def _stage2_pending(rater: str):
        return [
            item
            for item in items
            if (STAGE2_KIND, item["sample_id"], item["heuristic"], rater) not in store.records
        ]

    @app.get("/api/items")
    def remaining_items(rater: str):
        if stage == 1:
            out = [
                {
                    "sample_id": item["sample_id"],
                    "input_sequence": item["input_sequence"],
                    "ground_truth": item["ground_truth"],
                    "arm_a": item["arm_a"],
                    "arm_b": item["arm_b"],
                    "pending_arms": arms,
                }
                for item, arms in _stage1_pending(rater)
            ]
        else:
            out = [
                {
                    "sample_id": item["sample_id"],
                    "heuristic": item["heuristic"],
                    "input_sequence": item["input_sequence"],
                    "ground_truth": item["ground_truth"],
                    "rule_text": item["rule_text"],
                }
                for item in _stage2_pending(rater)
            ]
        return {"stage": stage, "items": out}

    @app.get("/api/progress")
    def progress(rater: str):
        if stage == 1:
            remaining = len(_stage1_pending(rater))
        else:
            remaining = len(_stage2_pending(rater))
        total = len(items)
        return {
            "rater_id": rater,
            "total": total,
            "completed": total - remaining,
            "remaining": remaining,
        }

    def _persist(record: dict) -> JSONResponse:
        try:
            with write_lock:
                outcome = store.append(record)
        except ConflictingRecord as exc:
            raise ApiError(409, "conflict", str(exc)) from None
        return JSONResponse(content={"status": outcome})

    @app.post("/api/stage1/rating")
    def submit_rating(rating: RatingIn):
        if stage != 1:
            raise ApiError(400, "wrong_stage", "this session is not a stage-1 session")
        if rating.sample_id not in stage1_ids:
            raise ApiError(404, "unknown_item", f"sample {rating.sample_id!r} is not in this session")
        record = {"kind": STAGE1_KIND, **rating.model_dump(), "timestamp": _timestamp()}
        return _persist(record)

    @app.post("/api/stage2/label")
    def submit_label(label: LabelIn):
        if stage != 2:
            raise ApiError(400, "wrong_stage", "this session is not a stage-2 session")
        if (label.sample_id, label.heuristic) not in stage2_keys:
            raise ApiError(
                404,
                "unknown_item",
                f"sample {label.sample_id!r} with heuristic {label.heuristic} is not in this session",
            )
        record = {"kind": STAGE2_KIND, **label.model_dump(), "timestamp": _timestamp()}
        return _persist(record)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    session: dict,
    port: int,
    store_path: str | Path,
    host: str = "127.0.0.1",
    ui_dir: str | Path | None = None,
) -> None:
    """Run the annotation service until interrupted."""
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUse(f"cannot bind {host}:{port}: {exc}") from None
    finally:
        probe.close()

    with JudgmentStore(store_path) as store:
        app = create_app(session, store, ui_dir=ui_dir)
        uvicorn.run(app, host=host, port=port, log_level="warning")
