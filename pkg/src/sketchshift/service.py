"""HTTP facade for the interactive game.

JSON over HTTP/1.1; the client sends raw canvas strokes and the server
owns the whole pipeline (simplify, normalize, rasterize, embed, match),
so every client sees identical behavior.

    POST /api/turn                               play one turn
    GET  /api/categories                         category list with k
    GET  /api/clusters/{category}/{index}/samples  browse members
    GET  /api/model/info                         fingerprint and totals
"""
from __future__ import annotations

import asyncio
import math
import secrets
import time
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .embedding import EmbeddingMatrix, digest64
from .engine import ClusterModel, TurnOptions, TurnRecord, respond_turn
from .errors import SketchShiftError, ValidationError
from .ingest import Sketch
from .store import SketchStore

SESSION_TTL_SECONDS = 30 * 60
MAX_SAMPLES = 50
DEFAULT_SAMPLES = 9


@dataclass
class Session:
    session_id: str
    seed: int
    turns: list[TurnRecord] = field(default_factory=list)
    last_access: float = field(default_factory=time.monotonic)
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)


@dataclass
class ServerState:
    """Immutable model/store snapshot plus the live session table."""

    model: ClusterModel | None = None
    store: SketchStore | None = None
    embeddings: EmbeddingMatrix | None = None
    seed: int = 0
    session_ttl: float = SESSION_TTL_SECONDS
    sessions: dict[str, Session] = field(default_factory=dict)

    def new_session(self) -> Session:
        token = secrets.token_hex(16)
        seed = int(np.random.default_rng(np.random.SeedSequence([self.seed, digest64(token.encode())])).integers(2**63))
        session = Session(session_id=token, seed=seed)
        self.sessions[token] = session
        return session

    def evict_stale(self) -> None:
        cutoff = time.monotonic() - self.session_ttl
        for token in [t for t, s in self.sessions.items() if s.last_access < cutoff]:
            del self.sessions[token]


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _sketch_json(sk: Sketch) -> dict:
    return {
        "id": sk.id,
        "category": sk.category,
        "strokes": [[[int(x), int(y)] for x, y in stroke] for stroke in sk.strokes],
    }


def _turn_json(session_id: str, record: TurnRecord) -> dict:
    return {
        "session_id": session_id,
        "turn_index": record.turn_index,
        "recognition": {
            "category": record.recognition.cluster[0],
            "cluster": record.recognition.cluster[1],
            "distance": record.recognition.distance,
        },
        "proposals": [
            {
                "category": p.target[0],
                "cluster": p.target[1],
                "distance": p.distance,
                "exemplar_id": p.exemplar_id,
            }
            for p in record.proposals
        ],
        "response": _sketch_json(record.response),
    }


def _parse_strokes(raw) -> list[np.ndarray]:
    if not isinstance(raw, list) or not raw:
        raise ValidationError("strokes must be a non-empty list")
    strokes = []
    for stroke in raw:
        if not isinstance(stroke, list) or not stroke:
            raise ValidationError("each stroke must be a non-empty list of [x, y] points")
        pts = []
        for point in stroke:
            if not isinstance(point, list) or len(point) != 2:
                raise ValidationError("each point must be an [x, y] pair")
            x, y = point
            for v in (x, y):
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ValidationError(f"coordinate is not a finite number: {v!r}")
            pts.append((int(math.floor(x + 0.5)), int(math.floor(y + 0.5))))
        strokes.append(np.array(pts, dtype=np.int32))
    return strokes


def create_app(state: ServerState, allow_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="sketchshift", docs_url=None, redoc_url=None)
    if allow_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=allow_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.post("/api/turn")
    async def turn(request: Request):
        if state.model is None or state.store is None:
            return _error(503, "model not loaded")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "malformed JSON body")
        if not isinstance(body, dict):
            return _error(400, "body must be a JSON object")

        try:
            strokes = _parse_strokes(body.get("strokes"))
        except ValidationError as exc:
            return _error(400, str(exc))

        n = body.get("n", 5)
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            return _error(400, "n must be a positive integer")
        policy = body.get("policy", "random")
        if policy not in ("random", "medoid"):
            return _error(400, "policy must be 'random' or 'medoid'")

        state.evict_stale()
        token = body.get("session_id")
        if token is not None:
            if not isinstance(token, str) or token not in state.sessions:
                return _error(404, "unknown session_id")
            session = state.sessions[token]
        else:
            session = state.new_session()

        async with session.lock:
            session.last_access = time.monotonic()
            options = TurnOptions(
                n=n,
                policy=policy,
                seed=session.seed,
                turn_index=len(session.turns),
                embeddings=state.embeddings,
            )
            try:
                record = respond_turn(strokes, state.model, state.store, options)
            except ValidationError as exc:
                return _error(503, str(exc))
            except SketchShiftError as exc:
                return _error(400, str(exc))
            session.turns.append(record)
        return JSONResponse(_turn_json(session.session_id, record))

    @app.get("/api/categories")
    async def categories():
        if state.model is None or state.store is None:
            return _error(503, "model not loaded")
        items = [
            {
                "name": cat,
                "k": state.model.per_category_k[cat],
                "sketch_count": len(state.store.by_category.get(cat, [])),
            }
            for cat in state.model.categories
        ]
        return JSONResponse({"categories": items})

    @app.get("/api/clusters/{category}/{index}/samples")
    async def samples(category: str, index: int, n: int = DEFAULT_SAMPLES):
        if state.model is None or state.store is None:
            return _error(503, "model not loaded")
        if n < 1 or n > MAX_SAMPLES:
            return _error(400, f"n must be in [1, {MAX_SAMPLES}]")
        key = (category, index)
        matches = [c for c in state.model.clusters if c.key == key]
        if not matches:
            return _error(404, f"unknown cluster {key}")
        cluster = matches[0]
        present = [int(i) for i in cluster.member_ids if int(i) in state.store.by_id]
        rng = np.random.default_rng(
            np.random.SeedSequence([state.seed, digest64(category.encode()), index, n])
        )
        take = min(n, len(present))
        picked = rng.choice(len(present), size=take, replace=False) if present else []
        sketches = [_sketch_json(state.store.get(present[int(i)])) for i in picked]
        return JSONResponse({"category": category, "cluster": index, "samples": sketches})

    @app.get("/api/model/info")
    async def model_info():
        if state.model is None:
            return JSONResponse({"loaded": False})
        fp = state.model.fingerprint
        return JSONResponse(
            {
                "loaded": True,
                "fingerprint": {
                    "name": fp.name,
                    "version": fp.version,
                    "dim": fp.dim,
                    "params_digest": str(fp.params_digest),
                },
                "categories": len(state.model.categories),
                "clusters": len(state.model.clusters),
                "sketches": len(state.store) if state.store is not None else 0,
            }
        )

    return app
