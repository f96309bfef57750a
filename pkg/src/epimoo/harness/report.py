"""Baseline-vs-variant comparison tables and per-interval difference grids."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from epimoo.errors import ConfigError, DegenerateSampleError, EpimooError, MetricError
from epimoo.harness.config import ExperimentConfig
from epimoo.harness.runner import MANIFEST_NAME, RUNS_DIR, cell_name, read_trace_csv
from epimoo.metrics import interval_means, percent_diff_intervals, percent_diff_total
from epimoo.problems import problem_by_name
from epimoo.stats import SIGNIFICANCE_LEVEL, wilcoxon_signed_rank

BASELINE = "baseline"


def load_experiment(out_dir: str | Path) -> tuple[ExperimentConfig, dict]:
    """Read the manifest and all completed traces from an output directory."""
    out_dir = Path(out_dir)
    manifest_path = out_dir / MANIFEST_NAME
    if not manifest_path.exists():
        raise EpimooError(f"no {MANIFEST_NAME} in {out_dir}; run the experiment first")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    raw = manifest["config"]
    cfg = ExperimentConfig(
        **{
            **raw,
            "problems": tuple(raw["problems"]),
            "variants": tuple(raw["variants"]),
        }
    )
    traces: dict[tuple[str, str], list[np.ndarray]] = {}
    for problem in cfg.problems:
        for variant in cfg.variants:
            runs = []
            for k in range(cfg.runs):
                path = out_dir / RUNS_DIR / f"{cell_name(problem, variant, k)}.csv"
                if not path.exists():
                    raise EpimooError(
                        f"missing trace {path.name}; experiment incomplete (re-run to resume)"
                    )
                _, _, values = read_trace_csv(path)
                runs.append(values)
            traces[(problem, variant)] = runs
    return cfg, traces


def summarize_experiment(cfg: ExperimentConfig, traces: dict) -> tuple[list[dict], dict]:
    """Per (problem, variant): total % difference vs baseline and Wilcoxon p.

    Returns (rows, per-variant tally of positive/best/significant counts).
    """
    if BASELINE not in cfg.variants:
        raise ConfigError("summary needs baseline runs for every reported problem")
    comparison = [v for v in cfg.variants if v != BASELINE]
    if not comparison:
        raise ConfigError("summary needs at least one non-baseline variant")

    rows: list[dict] = []
    for problem in cfg.problems:
        category = problem_by_name(problem).category
        base = interval_means(traces[(problem, BASELINE)], cfg.interval)
        problem_rows = []
        for variant in comparison:
            var = interval_means(traces[(problem, variant)], cfg.interval)
            total = percent_diff_total(base, var)
            try:
                _, p_value = wilcoxon_signed_rank(base, var)
                degenerate = False
            except DegenerateSampleError:
                p_value, degenerate = None, True
            problem_rows.append(
                {
                    "problem": problem,
                    "category": category,
                    "variant": variant,
                    "total_pct_diff": total,
                    "p_value": p_value,
                    "significant": (p_value is not None and p_value < SIGNIFICANCE_LEVEL),
                    "degenerate": degenerate,
                    "intervals": len(base),
                    "best": False,
                }
            )
        best_row = max(problem_rows, key=lambda r: r["total_pct_diff"])
        best_row["best"] = True
        rows.extend(problem_rows)

    tally = {
        variant: {
            "positive": sum(
                1 for r in rows if r["variant"] == variant and r["total_pct_diff"] > 0
            ),
            "best": sum(1 for r in rows if r["variant"] == variant and r["best"]),
            "significant_positive": sum(
                1
                for r in rows
                if r["variant"] == variant and r["significant"] and r["total_pct_diff"] > 0
            ),
            "problems": len(cfg.problems),
        }
        for variant in comparison
    }
    return rows, tally


def interval_grid(cfg: ExperimentConfig, traces: dict, problem: str) -> list[dict]:
    """Plot-ready per-interval signed % differences for one problem."""
    if problem not in cfg.problems:
        raise ConfigError(f"problem {problem!r} is not part of this experiment")
    if BASELINE not in cfg.variants:
        raise ConfigError("interval grid needs baseline runs")
    category = problem_by_name(problem).category
    base = interval_means(traces[(problem, BASELINE)], cfg.interval)
    cells: list[dict] = []
    for variant in cfg.variants:
        if variant == BASELINE:
            continue
        var = interval_means(traces[(problem, variant)], cfg.interval)
        try:
            diffs = percent_diff_intervals(base, var)
        except MetricError as exc:
            raise EpimooError(f"cannot build grid for {problem}: {exc}") from exc
        for k, diff in enumerate(diffs):
            cells.append(
                {
                    "problem": problem,
                    "category": category,
                    "variant": variant,
                    "interval": k,
                    "gen_start": k * cfg.interval,
                    "gen_end": (k + 1) * cfg.interval - 1,
                    "pct_diff": float(diff),
                }
            )
    return cells


def _fmt_p(row: dict) -> str:
    if row["p_value"] is None:
        return "degenerate"
    return f"{row['p_value']:.3f}"


def format_summary_table(rows: list[dict], tally: dict) -> str:
    """Human-readable comparison table mirroring the CSV contents."""
    lines = [
        f"{'problem':<8} {'cat':<4} {'variant':<9} {'total %diff':>12} {'p':>11} {'sig':>4} {'best':>5}"
    ]
    for row in rows:
        lines.append(
            f"{row['problem']:<8} {row['category']:<4} {row['variant']:<9} "
            f"{row['total_pct_diff']:>12.1f} {_fmt_p(row):>11} "
            f"{'*' if row['significant'] else '':>4} {'#' if row['best'] else '':>5}"
        )
    lines.append("")
    for variant, counts in tally.items():
        lines.append(
            f"{variant}: positive on {counts['positive']} of {counts['problems']} problems, "
            f"best on {counts['best']}"
        )
    return "\n".join(lines)


def write_summary_csv(rows: list[dict], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["problem,category,variant,total_pct_diff,p_value,significant,best,intervals"]
    for row in rows:
        p = "" if row["p_value"] is None else repr(float(row["p_value"]))
        lines.append(
            f"{row['problem']},{row['category']},{row['variant']},"
            f"{row['total_pct_diff']!r},{p},{str(row['significant']).lower()},"
            f"{str(row['best']).lower()},{row['intervals']}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_grid_csv(cells: list[dict], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["problem,category,variant,interval,gen_start,gen_end,pct_diff"]
    for c in cells:
        lines.append(
            f"{c['problem']},{c['category']},{c['variant']},{c['interval']},"
            f"{c['gen_start']},{c['gen_end']},{c['pct_diff']!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
