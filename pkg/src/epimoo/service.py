"""HTTP service wrapping the experiment harness.

Experiments are long-running, so submission returns immediately with a job
id; progress is polled and reports are fetched once the job completes.
Results live in ordinary output directories, identical to CLI runs, so a
service-run experiment can be inspected or resumed offline.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from epimoo import __version__
from epimoo.errors import ConfigError, EpimooError
from epimoo.harness.config import ExperimentConfig, build_config
from epimoo.harness.report import interval_grid, load_experiment, summarize_experiment
from epimoo.harness.runner import protocol_summary, run_experiment
from epimoo.problems import suite_catalog


class ProblemInfo(BaseModel):
    name: str
    dimension: int
    objectives: int
    category: str
    lower_bound_first: float
    upper_bound_first: float
    lower_bound_rest: float
    upper_bound_rest: float


class ExperimentRequest(BaseModel):
    """Experiment submission; unset fields fall back to config defaults."""

    preset: str | None = Field(default=None, description="desk or paper")
    problems: list[str] | None = None
    variants: list[str] | None = None
    population: int | None = None
    cycles: int | None = None
    generations: int | None = None
    tau_t: int | None = None
    n_t: int | None = None
    runs: int | None = None
    base_seed: int | None = None
    interval: int | None = None
    reinit_fraction: float | None = None
    dimension: int | None = None
    pf_points: int | None = None
    common_seeds: bool | None = None
    f_scale: float | None = None
    cr: float | None = None
    pm: float | None = None
    eta_m: float | None = None
    delta: float | None = None
    nr: int | None = None
    t_neighbors: int | None = None
    block_probability: float | None = None
    block_size: int | None = None
    max_block_probability: float | None = None
    probability_quantum: float | None = None
    block_shields_mutation: bool | None = None
    schedule_span: str | None = None
    out_dir: str | None = None
    jobs: int = 1

    def to_config(self) -> ExperimentConfig:
        overrides = self.model_dump(exclude={"preset", "out_dir", "jobs"})
        for key in ("problems", "variants"):
            if overrides.get(key) is not None:
                overrides[key] = tuple(v.lower() for v in overrides[key])
        return build_config(preset=self.preset, overrides=overrides)


class ExperimentAccepted(BaseModel):
    experiment_id: str
    out_dir: str
    fingerprint: str
    total_cells: int


class ExperimentStatus(BaseModel):
    experiment_id: str
    status: str  # running | completed | failed
    completed_cells: int
    total_cells: int
    out_dir: str
    fingerprint: str
    error: str | None = None


class SummaryRow(BaseModel):
    problem: str
    category: str
    variant: str
    total_pct_diff: float
    p_value: float | None
    significant: bool
    degenerate: bool
    best: bool
    intervals: int


class VariantTally(BaseModel):
    positive: int
    best: int
    significant_positive: int
    problems: int


class SummaryResponse(BaseModel):
    experiment_id: str
    rows: list[SummaryRow]
    tally: dict[str, VariantTally]


class GridCell(BaseModel):
    problem: str
    category: str
    variant: str
    interval: int
    gen_start: int
    gen_end: int
    pct_diff: float


class GridResponse(BaseModel):
    experiment_id: str
    problem: str
    cells: list[GridCell]


class ProtocolResponse(BaseModel):
    generations: int
    cycles: float
    time_step_values: list[float]
    distinct_times: int
    intervals_per_run: int
    cells: int
    variation_evaluations_per_run: int
    fingerprint: str


@dataclass
class _Job:
    experiment_id: str
    config: ExperimentConfig
    out_dir: Path
    total_cells: int
    status: str = "running"
    completed_cells: int = 0
    error: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


_jobs: dict[str, _Job] = {}
_jobs_lock = threading.Lock()

app = FastAPI(
    title="epimoo",
    version=__version__,
    description="Dynamic multi-objective optimization with epigenetic blocking",
)


def _workspace() -> Path:
    return Path(os.environ.get("EPIMOO_WORKDIR", "experiments"))


def _run_job(job: _Job, jobs: int) -> None:
    def progress(record, done, total):
        with job.lock:
            job.completed_cells = done

    try:
        run_experiment(job.config, job.out_dir, jobs=jobs, progress=progress)
        with job.lock:
            job.completed_cells = job.total_cells
            job.status = "completed"
    except Exception as exc:  # surfaced through the status endpoint
        with job.lock:
            job.status = "failed"
            job.error = str(exc)


def _get_job(experiment_id: str) -> _Job:
    with _jobs_lock:
        job = _jobs.get(experiment_id)
    if job is None:
        raise HTTPException(status_code=404, detail=f"unknown experiment {experiment_id}")
    return job


def _status(job: _Job) -> ExperimentStatus:
    with job.lock:
        return ExperimentStatus(
            experiment_id=job.experiment_id,
            status=job.status,
            completed_cells=job.completed_cells,
            total_cells=job.total_cells,
            out_dir=str(job.out_dir),
            fingerprint=job.config.fingerprint(),
            error=job.error,
        )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/problems", response_model=list[ProblemInfo])
def list_problems(dimension: int | None = None) -> list[ProblemInfo]:
    try:
        catalog = suite_catalog(dimension)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return [
        ProblemInfo(
            name=p.name,
            dimension=p.dimension,
            objectives=p.n_objectives,
            category=p.category,
            lower_bound_first=float(p.bounds_lower[0]),
            upper_bound_first=float(p.bounds_upper[0]),
            lower_bound_rest=float(p.bounds_lower[-1]),
            upper_bound_rest=float(p.bounds_upper[-1]),
        )
        for p in catalog
    ]


@app.post("/protocol", response_model=ProtocolResponse)
def protocol(request: ExperimentRequest) -> ProtocolResponse:
    try:
        return ProtocolResponse(**protocol_summary(request.to_config()))
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.post("/experiments", response_model=ExperimentAccepted, status_code=202)
def submit_experiment(request: ExperimentRequest) -> ExperimentAccepted:
    try:
        cfg = request.to_config()
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    experiment_id = uuid.uuid4().hex[:12]
    out_dir = Path(request.out_dir) if request.out_dir else _workspace() / experiment_id
    job = _Job(
        experiment_id=experiment_id,
        config=cfg,
        out_dir=out_dir,
        total_cells=len(cfg.cells()),
    )
    with _jobs_lock:
        _jobs[experiment_id] = job
    worker = threading.Thread(target=_run_job, args=(job, request.jobs), daemon=True)
    worker.start()
    return ExperimentAccepted(
        experiment_id=experiment_id,
        out_dir=str(out_dir),
        fingerprint=cfg.fingerprint(),
        total_cells=job.total_cells,
    )


@app.get("/experiments/{experiment_id}", response_model=ExperimentStatus)
def experiment_status(experiment_id: str) -> ExperimentStatus:
    return _status(_get_job(experiment_id))


def _completed_job(experiment_id: str) -> _Job:
    job = _get_job(experiment_id)
    status = _status(job)
    if status.status == "failed":
        raise HTTPException(status_code=500, detail=f"experiment failed: {status.error}")
    if status.status != "completed":
        raise HTTPException(status_code=409, detail="experiment still running")
    return job


@app.get("/experiments/{experiment_id}/summary", response_model=SummaryResponse)
def experiment_summary(experiment_id: str) -> SummaryResponse:
    job = _completed_job(experiment_id)
    try:
        cfg, traces = load_experiment(job.out_dir)
        rows, tally = summarize_experiment(cfg, traces)
    except (ConfigError, EpimooError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return SummaryResponse(
        experiment_id=experiment_id,
        rows=[SummaryRow(**row) for row in rows],
        tally={variant: VariantTally(**counts) for variant, counts in tally.items()},
    )


@app.get("/experiments/{experiment_id}/grid/{problem}", response_model=GridResponse)
def experiment_grid(experiment_id: str, problem: str) -> GridResponse:
    job = _completed_job(experiment_id)
    try:
        cfg, traces = load_experiment(job.out_dir)
        cells = interval_grid(cfg, traces, problem.lower())
    except (ConfigError, EpimooError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return GridResponse(
        experiment_id=experiment_id,
        problem=problem.lower(),
        cells=[GridCell(**cell) for cell in cells],
    )
