"""EMA collection endpoint plus static hosting for the web client.

POST /ema validates and appends one entry per line to the log (400 for
malformed bodies, 422 for out-of-range Likert values, 409 for duplicate
answered_at); GET /ema returns the raw log; GET /health reports status;
GET /prediction serves the latest mood prediction when a model file and a
feature source are configured.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from ._kernels import BACKEND

_EMA_FIELDS = ("scheduled_at", "answered_at", "happiness", "activeness")


def _field_error(field: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"field": field, "detail": detail})


def create_app(
    ema_log: str | Path,
    static_dir: str | Path | None = None,
    model_path: str | Path | None = None,
    features_path: str | Path | None = None,
) -> FastAPI:
    ema_log = Path(ema_log)
    ema_log.parent.mkdir(parents=True, exist_ok=True)
    if not ema_log.exists():
        ema_log.touch()

    app = FastAPI(title="moodwear EMA service")
    write_lock = threading.Lock()
    seen_answered: set[float] = set()
    for line in ema_log.read_text().splitlines():
        if line.strip():
            seen_answered.add(float(json.loads(line)["answered_at"]))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "entries": len(seen_answered), "backend": BACKEND}

    @app.get("/ema")
    def get_log() -> PlainTextResponse:
        return PlainTextResponse(ema_log.read_text(), media_type="application/x-ndjson")

    @app.post("/ema")
    async def post_entry(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _field_error("body", "not valid JSON")
        if not isinstance(payload, dict):
            return _field_error("body", "expected a JSON object")
        for field in _EMA_FIELDS:
            if field not in payload:
                return _field_error(field, "missing")
        for field in ("scheduled_at", "answered_at"):
            value = payload[field]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return _field_error(field, "must be a unix timestamp in seconds")
        for field in ("happiness", "activeness"):
            value = payload[field]
            if isinstance(value, bool) or not isinstance(value, int):
                return _field_error(field, "must be an integer")
            if not 0 <= value <= 4:
                return JSONResponse(
                    status_code=422,
                    content={"field": field, "detail": f"{value} outside 0..4"},
                )

        entry = {
            "scheduled_at": float(payload["scheduled_at"]),
            "answered_at": float(payload["answered_at"]),
            "happiness": payload["happiness"],
            "activeness": payload["activeness"],
        }
        with write_lock:
            if entry["answered_at"] in seen_answered:
                return JSONResponse(
                    status_code=409,
                    content={"detail": "entry with this answered_at already stored"},
                )
            # single write + fsync keeps concurrent appends whole lines
            line = json.dumps(entry) + "\n"
            with open(ema_log, "a") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
            seen_answered.add(entry["answered_at"])
        return JSONResponse(status_code=201, content=entry)

    @app.get("/prediction")
    def prediction():
        if model_path is None or features_path is None:
            return JSONResponse(
                status_code=404,
                content={"detail": "no model or feature source configured"},
            )
        import numpy as np

        from .features import read_feature_table
        from .svm import load_model

        windows = read_feature_table(features_path)
        if not windows:
            return JSONResponse(status_code=404, content={"detail": "no feature rows yet"})
        latest = max(windows, key=lambda w: w.end)
        model = load_model(model_path)
        label = model.predict(np.asarray(latest.values))
        return {
            "target": model.target,
            "prediction": label,
            "window_start": latest.start,
            "window_end": latest.end,
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="client")

    return app
