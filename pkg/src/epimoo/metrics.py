"""IGD against time-correct reference fronts, and interval aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from epimoo.errors import MetricError


@dataclass(frozen=True)
class IGDTrace:
    """Per-generation IGD of one run."""

    problem: str
    variant: str
    seed: int
    generations: np.ndarray  # (G,), strictly increasing
    times: np.ndarray  # (G,) time variable per generation
    values: np.ndarray  # (G,) IGD values

    def __post_init__(self) -> None:
        if not (len(self.generations) == len(self.times) == len(self.values)):
            raise MetricError("trace columns must have equal length")
        if np.any(np.diff(self.generations) <= 0):
            raise MetricError("generations must be strictly increasing")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise MetricError("IGD values must be finite and non-negative")


def nondominated(points: np.ndarray) -> np.ndarray:
    """Minimizing non-dominated subset of a 2-D point set, sorted by f1."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise MetricError("expected an (n, 2) objective array")
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    best_f2 = np.inf
    keep = np.zeros(len(pts), dtype=bool)
    for i, f2 in enumerate(pts[:, 1]):
        if f2 < best_f2:
            keep[i] = True
            best_f2 = f2
    return pts[keep]


def igd(obtained: np.ndarray, reference: np.ndarray) -> float:
    """Mean distance from each reference point to its nearest obtained point."""
    obtained = np.atleast_2d(np.asarray(obtained, dtype=float))
    reference = np.atleast_2d(np.asarray(reference, dtype=float))
    if obtained.size == 0 or reference.size == 0:
        raise MetricError("IGD needs non-empty point sets")
    if obtained.shape[1] != reference.shape[1]:
        raise MetricError("obtained and reference dimensionality differ")
    return float(cdist(reference, obtained).min(axis=1).mean())


def interval_means(traces: list[np.ndarray] | np.ndarray, interval: int = 2) -> np.ndarray:
    """Mean IGD per ``interval`` generations, across runs and within-interval generations."""
    if interval < 1:
        raise MetricError("interval must be >= 1")
    arr = np.asarray(traces, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise MetricError("traces must form a (runs, generations) array")
    runs, gens = arr.shape
    if gens == 0 or gens % interval != 0:
        raise MetricError(f"trace length {gens} is not a multiple of interval {interval}")
    return arr.reshape(runs, gens // interval, interval).mean(axis=(0, 2))


def percent_diff_intervals(baseline: np.ndarray, variant: np.ndarray) -> np.ndarray:
    """Per-interval signed % improvement of the variant over the baseline."""
    baseline = np.asarray(baseline, dtype=float)
    variant = np.asarray(variant, dtype=float)
    if baseline.shape != variant.shape:
        raise MetricError("baseline and variant interval sequences differ in length")
    if np.any(baseline <= 0):
        raise MetricError("baseline interval means must be positive for relative differences")
    return 100.0 * (baseline - variant) / baseline


def percent_diff_total(baseline: np.ndarray, variant: np.ndarray) -> float:
    """Summed per-interval % difference; positive means the variant did better."""
    return float(percent_diff_intervals(baseline, variant).sum())
