"""HTTP service implementing the scorer wire protocol.

Routes: POST /score, POST /embed, GET /health.  Malformed request bodies
answer 400; requests arriving before both model artifacts are loaded
answer 503.  Scores are clamped into [0, 1] and embeddings are checked
finite before leaving the process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .models import ContrastiveEmbedder, UsefulnessClassifier, load_artifact


@dataclass
class ModelHolder:
    usefulness: UsefulnessClassifier | None = None
    embedder: ContrastiveEmbedder | None = None

    @property
    def ready(self) -> bool:
        return self.usefulness is not None and self.embedder is not None

    @classmethod
    def from_artifacts(cls, usefulness_path, embedder_path) -> "ModelHolder":
        usefulness, _ = load_artifact(usefulness_path)
        embedder, _ = load_artifact(embedder_path)
        return cls(usefulness=usefulness, embedder=embedder)


class ScoreRequest(BaseModel):
    query: str
    sentences: list[str]


class EmbedRequest(BaseModel):
    sentences: list[str]


def create_app(holder: ModelHolder) -> FastAPI:
    app = FastAPI(title="scorer-service")

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    def _unavailable():
        return JSONResponse(status_code=503,
                            content={"error": "models still loading"})

    @app.get("/health")
    def health():
        if not holder.ready:
            return _unavailable()
        return {"status": "ok", "embed_dim": holder.embedder.dim}

    @app.post("/score")
    def score(request: ScoreRequest):
        if not holder.ready:
            return _unavailable()
        scores = holder.usefulness.score(request.query, request.sentences)
        return {"scores": [min(1.0, max(0.0, s)) for s in scores]}

    @app.post("/embed")
    def embed(request: EmbedRequest):
        if not holder.ready:
            return _unavailable()
        vectors = holder.embedder.encode(request.sentences)
        for row in vectors:
            if not all(math.isfinite(x) for x in row):
                return JSONResponse(
                    status_code=500,
                    content={"error": "model produced non-finite values"},
                )
        return {"vectors": vectors}

    return app


def serve(usefulness_path, embedder_path, host: str = "127.0.0.1",
          port: int = 8080):
    """Load artifacts and run the service (blocking)."""
    import uvicorn

    holder = ModelHolder.from_artifacts(usefulness_path, embedder_path)
    uvicorn.run(create_app(holder), host=host, port=port)
