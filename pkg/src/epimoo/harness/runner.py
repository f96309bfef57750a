"""Run orchestration and persistence.

One run = (problem, variant, seed); its IGD trace goes to a CSV named
after the cell, written atomically so interrupted experiments resume by
skipping completed cells.  Cells are independent: each owns its rng, so
serial and parallel execution produce identical bytes.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from epimoo.errors import ConfigError, EpimooError
from epimoo.harness.config import ExperimentConfig
from epimoo.metrics import IGDTrace, igd, nondominated
from epimoo.moead import evolve_generation, init_state, reinitialize_on_change
from epimoo.problems import TimeModel, problem_by_name, time_of_generation

MANIFEST_NAME = "manifest.json"
RUNS_DIR = "runs"
META_NAME = "runs_meta.json"


@dataclass(frozen=True)
class RunRecord:
    fingerprint: str
    problem: str
    variant: str
    run_index: int
    seed: int
    generations: np.ndarray
    times: np.ndarray
    igd_values: np.ndarray
    wall_seconds: float

    @property
    def cell(self) -> str:
        return cell_name(self.problem, self.variant, self.run_index)

    @property
    def trace(self) -> IGDTrace:
        return IGDTrace(
            problem=self.problem,
            variant=self.variant,
            seed=self.seed,
            generations=self.generations,
            times=self.times,
            values=self.igd_values,
        )


def cell_name(problem: str, variant: str, run_index: int) -> str:
    return f"{problem}__{variant}__run{run_index:03d}"


def run_single(cfg: ExperimentConfig, problem_name: str, variant: str, run_index: int) -> RunRecord:
    """Execute one run; deterministic in (cfg, problem, variant, run_index)."""
    seed = cfg.seed_for(problem_name, variant, run_index)
    rng = np.random.default_rng(seed)
    problem = problem_by_name(problem_name, cfg.dimension)
    tm = TimeModel(cfg.tau_t, cfg.n_t)
    params = cfg.de_params()
    policy = cfg.blocking_policy(variant)
    total = cfg.total_generations
    span_gens = total if policy.schedule_span == "run" else cfg.cycle_generations
    schedule_max = cfg.population * span_gens

    started = time.perf_counter()
    state = init_state(problem, cfg.population, params, rng, t0=0.0, schedule_max=schedule_max)
    gens = np.arange(total, dtype=np.intp)
    times = np.empty(total)
    values = np.empty(total)
    for gen in range(total):
        t = time_of_generation(gen, tm)
        if gen > 0 and gen % tm.tau_t == 0:
            reinitialize_on_change(state, problem, t, cfg.reinit_fraction, rng)
        if policy.schedule_span == "cycle" and gen > 0 and gen % cfg.cycle_generations == 0:
            state.schedule_evals = 0
        evolve_generation(state, problem, policy, t, rng, params)
        times[gen] = t
        values[gen] = igd(nondominated(state.objectives), problem.pf_points(t, cfg.pf_points))

    return RunRecord(
        fingerprint=cfg.fingerprint(),
        problem=problem_name,
        variant=variant,
        run_index=run_index,
        seed=seed,
        generations=gens,
        times=times,
        igd_values=values,
        wall_seconds=time.perf_counter() - started,
    )


def _trace_path(out_dir: Path, cell: str) -> Path:
    return out_dir / RUNS_DIR / f"{cell}.csv"


def write_trace_csv(record: RunRecord, out_dir: Path) -> Path:
    """Atomic write; float fields use shortest round-trip formatting."""
    path = _trace_path(out_dir, record.cell)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".csv.tmp")
    lines = ["generation,t,igd"]
    for gen, t, v in zip(record.generations, record.times, record.igd_values):
        lines.append(f"{int(gen)},{float(t)!r},{float(v)!r}")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, path)
    return path


def read_trace_csv(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = path.read_text(encoding="utf-8").strip().splitlines()
    if not rows or rows[0] != "generation,t,igd":
        raise EpimooError(f"malformed trace file {path}")
    data = np.array([[float(f) for f in row.split(",")] for row in rows[1:]])
    return data[:, 0].astype(np.intp), data[:, 1], data[:, 2]


def _load_completed(cfg: ExperimentConfig, out_dir: Path, cell: tuple[str, str, int]) -> RunRecord | None:
    problem, variant, run_index = cell
    path = _trace_path(out_dir, cell_name(problem, variant, run_index))
    if not path.exists():
        return None
    try:
        gens, times, values = read_trace_csv(path)
    except (EpimooError, ValueError):
        return None  # partial or corrupt: recompute
    if len(gens) != cfg.total_generations:
        return None
    return RunRecord(
        fingerprint=cfg.fingerprint(),
        problem=problem,
        variant=variant,
        run_index=run_index,
        seed=cfg.seed_for(problem, variant, run_index),
        generations=gens,
        times=times,
        igd_values=values,
        wall_seconds=float("nan"),
    )


def _write_manifest(cfg: ExperimentConfig, out_dir: Path) -> None:
    manifest = {
        "fingerprint": cfg.fingerprint(),
        "config": cfg.to_dict(),
        "seeds": {
            cell_name(p, v, k): cfg.seed_for(p, v, k) for p, v, k in cfg.cells()
        },
    }
    tmp = out_dir / (MANIFEST_NAME + ".tmp")
    tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, out_dir / MANIFEST_NAME)


def check_manifest(cfg: ExperimentConfig, out_dir: Path) -> None:
    path = out_dir / MANIFEST_NAME
    if not path.exists():
        return
    existing = json.loads(path.read_text(encoding="utf-8"))
    if existing.get("fingerprint") != cfg.fingerprint():
        raise ConfigError(
            f"output directory {out_dir} holds an experiment with a different "
            f"config (fingerprint {existing.get('fingerprint')}); use a fresh directory"
        )


def _run_cell(args: tuple) -> RunRecord:
    cfg_dict, problem, variant, run_index = args
    cfg = ExperimentConfig(
        **{**cfg_dict, "problems": tuple(cfg_dict["problems"]), "variants": tuple(cfg_dict["variants"])}
    )
    return run_single(cfg, problem, variant, run_index)


def run_experiment(
    cfg: ExperimentConfig,
    out_dir: str | Path,
    jobs: int = 1,
    progress: Callable[[RunRecord, int, int], None] | None = None,
) -> list[RunRecord]:
    """Run every (problem, variant, run) cell, resuming over completed ones."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise EpimooError(f"output directory {out_dir} is not writable")
    check_manifest(cfg, out_dir)
    _write_manifest(cfg, out_dir)

    cells = cfg.cells()
    records: dict[str, RunRecord] = {}
    pending: list[tuple[str, str, int]] = []
    for cell in cells:
        done = _load_completed(cfg, out_dir, cell)
        if done is not None:
            records[done.cell] = done
        else:
            pending.append(cell)

    total = len(cells)
    walls: dict[str, float] = {}

    def _finish(record: RunRecord) -> None:
        write_trace_csv(record, out_dir)
        records[record.cell] = record
        walls[record.cell] = record.wall_seconds
        if progress is not None:
            progress(record, len(records), total)

    if jobs <= 1 or len(pending) <= 1:
        for problem, variant, run_index in pending:
            _finish(run_single(cfg, problem, variant, run_index))
    else:
        cfg_dict = cfg.to_dict()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_run_cell, (cfg_dict, p, v, k)) for p, v, k in pending
            ]
            for future in as_completed(futures):
                _finish(future.result())

    if walls:
        meta_path = out_dir / META_NAME
        meta = json.loads(meta_path.read_text()) if meta_path.exists() else {}
        meta.update({cell: {"wall_seconds": w} for cell, w in walls.items()})
        meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    return [records[cell_name(p, v, k)] for p, v, k in cells]


def protocol_summary(cfg: ExperimentConfig) -> dict:
    """Dry-run accounting: generations, time grid, interval and cell counts."""
    tm = TimeModel(cfg.tau_t, cfg.n_t)
    total = cfg.total_generations
    steps = sorted({((gen // tm.tau_t) % tm.n_t) / tm.n_t for gen in range(total)})
    return {
        "generations": total,
        "cycles": total / cfg.cycle_generations,
        "time_step_values": steps,
        "distinct_times": len({time_of_generation(g, tm) for g in range(total)}),
        "intervals_per_run": total // cfg.interval,
        "cells": len(cfg.cells()),
        "variation_evaluations_per_run": cfg.population * total,
        "fingerprint": cfg.fingerprint(),
    }
