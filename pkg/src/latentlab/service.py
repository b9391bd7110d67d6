"""HTTP JSON API exposing the full workflow: upload, train, slide, probe.

The service is a thin adapter over the library: every response body is
reproducible by direct library calls against the same on-disk store.
Training runs on one background worker so the API stays responsive and the
store only ever has a single writer; everything else is synchronous.

No authentication: this is a single-artist desk deployment, and binding to
loopback by default is the safety boundary.
"""

from __future__ import annotations

import base64
import binascii
import math
import queue
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import store
from .embedding import EmbeddingModel, TrainingConfig, tokenize, train_embeddings
from .errors import (
    InvalidConfig,
    LatentLabError,
    MalformedPgm,
    UnknownModel,
    UnknownSlider,
)
from .imagelatent import Image, LatentImageModel, fit_latent_model, load_pgm
from .pointcloud import build_point_cloud, serialize_point_cloud
from .slider import build_image_dimension, build_word_dimension, probe_image, probe_words

_NOT_FOUND_CODES = {"UnknownModel", "UnknownSlider", "UnknownCorpus"}
_SERVER_FAULT_CODES = {"CorruptStore", "UnsupportedVersion", "IoFailure"}


class ApiError(Exception):
    """An error with an HTTP status and a stable machine-readable code."""

    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


def _to_api_error(exc: LatentLabError) -> ApiError:
    if exc.code in _NOT_FOUND_CODES:
        status = 404
    elif exc.code in _SERVER_FAULT_CODES:
        status = 500
    else:
        status = 400
    return ApiError(status, exc.code, str(exc))


@dataclass
class JobRecord:
    """Lifecycle of one background training job.

    Status only moves forward: queued -> running -> done | failed.
    """

    id: str
    kind: str  # "train_words" | "train_images"
    status: str = "queued"
    model_id: str | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "model_id": self.model_id,
            "error": self.error,
        }


@dataclass
class _State:
    data_dir: Path
    corpora: dict[str, str] = field(default_factory=dict)
    jobs: dict[str, JobRecord] = field(default_factory=dict)
    models: dict[str, EmbeddingModel | LatentImageModel] = field(default_factory=dict)
    job_queue: queue.Queue = field(default_factory=queue.Queue)
    lock: threading.Lock = field(default_factory=threading.Lock)
    counters: dict[str, int] = field(default_factory=lambda: {"c": 0, "j": 0})
    worker: threading.Thread | None = None

    @property
    def models_dir(self) -> Path:
        return self.data_dir / "models"

    def next_id(self, prefix: str) -> str:
        with self.lock:
            self.counters[prefix] += 1
            return f"{prefix}{self.counters[prefix]}"

    def next_model_id(self) -> str:
        with self.lock:
            existing = {p.name for p in self.models_dir.glob("m*")}
            n = 1
            while f"m{n}" in existing:
                n += 1
            return f"m{n}"

    def model_dir(self, model_id: str) -> Path:
        path = self.models_dir / model_id
        if not (path / "manifest.json").is_file():
            raise UnknownModel(model_id)
        return path

    def get_model(self, model_id: str) -> EmbeddingModel | LatentImageModel:
        # trained models are immutable, so the cache never invalidates
        if model_id not in self.models:
            self.models[model_id] = store.load_model(self.model_dir(model_id))
        return self.models[model_id]


class CorpusIn(BaseModel):
    text: str


class WordsTrainIn(BaseModel):
    corpus_id: str
    config: dict = {}


class ImagesTrainIn(BaseModel):
    class_a: list[str]
    class_b: list[str]
    q: int


class SliderIn(BaseModel):
    pole_a: list[str]
    pole_b: list[str]
    labels: list[str] | None = None


def _decode_pgms(payloads: list[str], side: str) -> list[Image]:
    images = []
    for i, b64 in enumerate(payloads):
        try:
            raw = base64.b64decode(b64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise ApiError(400, "BadParameter", f"{side}[{i}]: not base64: {exc}")
        try:
            images.append(load_pgm(raw))
        except MalformedPgm as exc:
            raise ApiError(400, "MalformedPgm", f"{side}[{i}]: {exc}")
    return images


def _worker_loop(state: _State) -> None:
    while True:
        item = state.job_queue.get()
        if item is None:
            return
        job, run = item
        job.status = "running"
        try:
            job.model_id = run()
            job.status = "done"
        except LatentLabError as exc:
            job.error = f"{exc.code}: {exc}"
            job.status = "failed"
        except Exception as exc:  # keep the worker alive, surface the cause
            job.error = f"InternalError: {exc}"
            job.status = "failed"


def create_app(data_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    """Build the service around a data directory (created if missing)."""
    state = _State(data_dir=Path(data_dir))
    state.models_dir.mkdir(parents=True, exist_ok=True)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        state.worker = threading.Thread(
            target=_worker_loop, args=(state,), name="latentlab-jobs", daemon=True
        )
        state.worker.start()
        yield
        state.job_queue.put(None)
        state.worker.join(timeout=10)

    app = FastAPI(title="latentlab", lifespan=lifespan)
    app.state.lab = state

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(LatentLabError)
    async def _domain_error(_req: Request, exc: LatentLabError):
        api = _to_api_error(exc)
        return JSONResponse(
            status_code=api.status, content={"error": api.code, "detail": api.detail}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "BadParameter", "detail": str(exc.errors())}
        )

    @app.post("/corpora", status_code=201)
    async def create_corpus(body: CorpusIn):
        if not body.text:
            raise ApiError(400, "EmptyCorpus", "corpus text must be non-empty")
        corpus_id = state.next_id("c")
        state.corpora[corpus_id] = body.text
        return {"corpus_id": corpus_id}

    @app.post("/models/words", status_code=202)
    async def train_words(body: WordsTrainIn):
        text = state.corpora.get(body.corpus_id)
        if text is None:
            raise ApiError(404, "UnknownCorpus", body.corpus_id)
        try:
            config = TrainingConfig(**body.config)
        except TypeError as exc:
            raise ApiError(400, "InvalidConfig", str(exc))

        def run() -> str:
            model = train_embeddings(tokenize(text), config)
            model_id = state.next_model_id()
            store.save_model(model, state.models_dir / model_id)
            return model_id

        return _enqueue(state, "train_words", run)

    @app.post("/models/images", status_code=202)
    async def train_images(body: ImagesTrainIn):
        if not body.class_a or not body.class_b:
            raise ApiError(400, "BadParameter", "both image classes must be non-empty")
        if body.q < 1:
            raise ApiError(400, "InvalidConfig", f"q must be >= 1, got {body.q}")
        class_a = _decode_pgms(body.class_a, "class_a")
        class_b = _decode_pgms(body.class_b, "class_b")

        def run() -> str:
            model = fit_latent_model(class_a + class_b, body.q)
            dim = build_image_dimension(
                model, class_a, class_b, labels=("class-a", "class-b")
            )
            model_id = state.next_model_id()
            target = state.models_dir / model_id
            store.save_model(model, target)
            store.save_slider(dim, target, slider_id="class-axis")
            return model_id

        return _enqueue(state, "train_images", run)

    @app.get("/jobs/{job_id}")
    async def get_job(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise ApiError(404, "UnknownJob", job_id)
        return job.to_dict()

    @app.get("/models")
    async def list_models():
        out = []
        for path in sorted(state.models_dir.iterdir()) if state.models_dir.is_dir() else []:
            if (path / "manifest.json").is_file():
                manifest = store.read_manifest(path)
                out.append(
                    {
                        "model_id": path.name,
                        "model_type": manifest["model_type"],
                        "shape": manifest["shape"],
                    }
                )
        return out

    @app.get("/models/{model_id}")
    async def get_model(model_id: str):
        manifest = store.read_manifest(state.model_dir(model_id))
        return {
            "model_id": model_id,
            "model_type": manifest["model_type"],
            "shape": manifest["shape"],
            "config": manifest["config"],
            "created_at": manifest["created_at"],
        }

    @app.post("/models/{model_id}/sliders", status_code=201)
    async def create_slider(model_id: str, body: SliderIn):
        model = state.get_model(model_id)
        if not isinstance(model, EmbeddingModel):
            raise ApiError(400, "BadParameter", "sliders by word lists need a words model")
        if not body.pole_a or not body.pole_b:
            raise ApiError(400, "BadParameter", "both poles must be non-empty")
        labels = None
        if body.labels is not None:
            if len(body.labels) != 2:
                raise ApiError(400, "BadParameter", "labels must be [a_label, b_label]")
            labels = (body.labels[0], body.labels[1])
        dim = build_word_dimension(
            model, body.pole_a, body.pole_b, labels=labels, model_id=model_id
        )
        slider_id = store.save_slider(dim, state.model_dir(model_id))
        return {"slider_id": slider_id}

    @app.get("/models/{model_id}/sliders")
    async def list_model_sliders(model_id: str):
        directory = state.model_dir(model_id)
        out = []
        for sid in store.list_sliders(directory):
            dim = store.load_slider(directory, sid)
            out.append(
                {
                    "slider_id": sid,
                    "pole_a_label": dim.pole_a_label,
                    "pole_b_label": dim.pole_b_label,
                }
            )
        return out

    @app.get("/models/{model_id}/sliders/{slider_id}/probe")
    async def probe(
        model_id: str,
        slider_id: str,
        t: float,
        base: str | None = None,
        k: int = 10,
    ):
        if not math.isfinite(t):
            raise ApiError(400, "BadParameter", "t must be a finite real")
        model = state.get_model(model_id)
        dim = store.load_slider(state.model_dir(model_id), slider_id)
        if isinstance(model, EmbeddingModel):
            if base is None:
                raise ApiError(400, "BadParameter", "words probes need a base word")
            if k < 1:
                raise ApiError(400, "BadParameter", f"k must be >= 1, got {k}")
            result = probe_words(model, dim, base, t, k)
        else:
            result = probe_image(model, dim, t)
        return result.to_dict()

    @app.get("/models/{model_id}/pointcloud")
    async def pointcloud(model_id: str, max_points: int = 200, slider: str | None = None):
        model = state.get_model(model_id)
        if not isinstance(model, EmbeddingModel):
            raise ApiError(400, "BadParameter", "point clouds exist for words models only")
        if max_points < 3:
            raise ApiError(400, "BadParameter", "max_points must be >= 3")
        dim = None
        if slider is not None:
            dim = store.load_slider(state.model_dir(model_id), slider)
        pc = build_point_cloud(model, dim, max_points)
        # raw bytes so the HTTP body is byte-identical to the library output
        return Response(
            content=serialize_point_cloud(pc), media_type="application/json"
        )

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def _enqueue(state: _State, kind: str, run) -> dict:
    job = JobRecord(id=state.next_id("j"), kind=kind)
    state.jobs[job.id] = job
    state.job_queue.put((job, run))
    return {"job_id": job.id}


def run_server(
    data_dir: str | Path,
    port: int = 8080,
    bind: str = "127.0.0.1",
    static_dir: str | Path | None = None,
) -> None:
    """Run the service until interrupted (the CLI ``serve`` subcommand)."""
    import uvicorn

    uvicorn.run(create_app(data_dir, static_dir), host=bind, port=port)
