"""Local HTTP service exposing the pipeline: validation, jobs, catalog.

Jobs run on a single worker thread by default (the search saturates a core);
status reads see atomic snapshots, and cancellation aborts the annealing loop
without leaving partial output files.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .catalog import default_catalog
from .engine import Cancelled
from .pipeline import (
    generate,
    model_document,
    report_document,
    validation_diagnostics,
)
from .sketch import SketchError, parse_sketch, validate_sketch

DEFAULT_PORT = 7777


@dataclass
class Job:
    id: str
    sketch_doc: dict
    preset: str
    seed: int
    cooling_rate: float
    state: str = "queued"  # queued | running | done | failed
    stage: str = ""
    temperature: float = 0.0
    best_total: float | None = None
    iteration: int = 0
    model: dict | None = None
    report: dict | None = None
    error: str | None = None
    cancel: bool = False

    def snapshot(self) -> dict:
        out: dict[str, Any] = {
            "id": self.id,
            "state": self.state,
            "preset": self.preset,
            "seed": self.seed,
            "coolingRate": self.cooling_rate,
        }
        if self.state == "running":
            out["progress"] = {
                "stage": self.stage,
                "temperature": self.temperature,
                "bestF": self.best_total,
                "iteration": self.iteration,
            }
        if self.state == "failed":
            out["reason"] = self.error
        return out


class JobManager:
    def __init__(self, parallel: bool = False):
        self.jobs: dict[str, Job] = {}
        self.lock = threading.Lock()
        self.parallel = parallel
        self._queue: list[str] = []
        self._worker: threading.Thread | None = None

    def submit(self, sketch_doc: dict, preset: str, seed: int, cooling_rate: float) -> Job:
        job = Job(
            id=uuid.uuid4().hex[:12],
            sketch_doc=sketch_doc,
            preset=preset,
            seed=seed,
            cooling_rate=cooling_rate,
        )
        with self.lock:
            self.jobs[job.id] = job
        if self.parallel:
            threading.Thread(target=self._run, args=(job,), daemon=True).start()
        else:
            with self.lock:
                self._queue.append(job.id)
                if self._worker is None or not self._worker.is_alive():
                    self._worker = threading.Thread(target=self._drain, daemon=True)
                    self._worker.start()
        return job

    def _drain(self) -> None:
        while True:
            with self.lock:
                if not self._queue:
                    return
                job = self.jobs[self._queue.pop(0)]
            self._run(job)

    def _run(self, job: Job) -> None:
        if job.cancel:
            job.state = "failed"
            job.error = "cancelled"
            return
        job.state = "running"

        def progress(stage, t, best, iteration):
            job.stage = stage
            job.temperature = t
            job.best_total = best
            job.iteration = iteration
            if job.cancel:
                raise Cancelled()

        try:
            res = generate(
                job.sketch_doc,
                preset=job.preset,
                seed=job.seed,
                cooling_rate=job.cooling_rate,
                progress=progress,
            )
            job.model = model_document(res)
            job.report = report_document(res)
            job.state = "done"
        except Cancelled:
            job.state = "failed"
            job.error = "cancelled"
        except SketchError as e:
            job.state = "failed"
            job.error = f"invalid sketch: {e}"
        except Exception as e:  # pragma: no cover - defensive
            job.state = "failed"
            job.error = f"internal error: {e}"

    def get(self, job_id: str) -> Job:
        with self.lock:
            job = self.jobs.get(job_id)
        if job is None:
            raise KeyError(job_id)
        return job


def create_app(parallel: bool = False) -> FastAPI:
    app = FastAPI(title="technicgen", version="1")
    manager = JobManager(parallel=parallel)
    app.state.manager = manager
    catalog = default_catalog()

    @app.post("/v1/sketch/validate")
    def validate(body: dict):
        try:
            diags = validation_diagnostics(body)
        except SketchError as e:
            return JSONResponse(
                status_code=400, content={"diagnostics": [{"message": str(e)}]}
            )
        return {"diagnostics": diags, "valid": not diags}

    @app.post("/v1/jobs")
    def submit(body: dict):
        sketch_doc = body.get("sketch")
        if sketch_doc is None:
            raise HTTPException(status_code=400, detail="missing sketch")
        try:
            sketch = parse_sketch(sketch_doc)
            diags = [d.to_dict() for d in validate_sketch(sketch)]
        except SketchError as e:
            return JSONResponse(
                status_code=400, content={"diagnostics": [{"message": str(e)}]}
            )
        if diags:
            return JSONResponse(status_code=400, content={"diagnostics": diags})
        preset = body.get("preset", "faithful")
        if preset not in ("faithful", "simple", "rigid-faithful", "rigid-simple"):
            raise HTTPException(status_code=400, detail=f"unknown preset {preset!r}")
        job = manager.submit(
            sketch_doc,
            preset=preset,
            seed=int(body.get("seed", 0)),
            cooling_rate=float(body.get("coolingRate", 0.999)),
        )
        return {"id": job.id, "state": job.state}

    @app.get("/v1/jobs/{job_id}")
    def job_state(job_id: str):
        try:
            return manager.get(job_id).snapshot()
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown job")

    @app.get("/v1/jobs/{job_id}/model")
    def job_model(job_id: str):
        try:
            job = manager.get(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.state != "done" or job.model is None:
            raise HTTPException(status_code=404, detail=f"job is {job.state}")
        return job.model

    @app.get("/v1/jobs/{job_id}/report")
    def job_report(job_id: str):
        try:
            job = manager.get(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.state != "done" or job.report is None:
            raise HTTPException(status_code=404, detail=f"job is {job.state}")
        return job.report

    @app.delete("/v1/jobs/{job_id}")
    def cancel(job_id: str):
        try:
            job = manager.get(job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.state == "done":
            raise HTTPException(status_code=409, detail="job already done")
        job.cancel = True
        return {"id": job.id, "state": job.state, "cancelling": True}

    @app.get("/v1/catalog")
    def catalog_listing():
        bricks = [
            {
                "id": b.id,
                "kind": b.kind,
                "length": b.length,
                "mass": b.mass,
                "holes": [{"at": list(h.at), "type": h.type} for h in b.holes],
            }
            for b in sorted(catalog.bricks.values(), key=lambda b: (b.kind, b.length, b.id))
        ]
        mechanisms = [
            {
                "id": m.id,
                "name": m.name,
                "pinHeadCount": m.pin_head_count,
                "nodeCount": m.node_count,
                "rho": float(m.rho),
                "nodes": [
                    {
                        "at": list(n.at),
                        "label": n.label,
                        "headType": n.head_type,
                        "axis": n.axis,
                    }
                    for n in m.nodes
                ],
            }
            for m in sorted(catalog.mechanisms.values(), key=lambda m: m.id)
        ]
        return {"version": catalog.version, "bricks": bricks, "mechanisms": mechanisms}

    return app


def serve(port: int = DEFAULT_PORT, parallel: bool = False) -> None:  # pragma: no cover
    import uvicorn

    uvicorn.run(create_app(parallel=parallel), host="127.0.0.1", port=port)
