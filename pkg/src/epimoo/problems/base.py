"""Dynamic problem abstraction and the discrete time model.

Every benchmark in the catalog is bi-objective, box-bounded and driven by
a scalar time ``t`` that advances in discrete steps of 1/n_T every tau_T
generations.  One dynamic cycle spans two time units (the parameter sweep
up and back down), i.e. 2 * n_T * tau_T generations; all evaluation
functions are exactly 2-periodic in ``t`` so a run returns to its initial
landscape at the end of each cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from epimoo.errors import DimensionError

# Category tags: I = Pareto set moves, front fixed; II = both move;
# III = front moves, set fixed.
CATEGORIES = ("I", "II", "III")


@dataclass(frozen=True)
class TimeModel:
    """Change frequency (generations per step) and severity (steps per unit time)."""

    tau_t: int = 5
    n_t: int = 10

    def __post_init__(self) -> None:
        if self.tau_t < 1 or self.n_t < 1:
            raise ValueError("tau_t and n_t must be >= 1")

    @property
    def cycle_generations(self) -> int:
        """Generations for one full dynamic cycle (t advancing by 2)."""
        return 2 * self.tau_t * self.n_t


def time_of_generation(gen: int, tm: TimeModel) -> float:
    """Discrete time variable t = (1/n_T) * floor(gen / tau_T)."""
    if gen < 0:
        raise ValueError("generation index must be >= 0")
    return (gen // tm.tau_t) / tm.n_t


def wrap_time(t: float) -> float:
    """Fold t onto the fundamental domain [0, 2) of the dynamic cycle."""
    return math.fmod(t, 2.0)


@dataclass(frozen=True)
class DynamicProblem:
    """A time-dependent bi-objective benchmark.

    ``evaluate`` is vectorized over leading axes: a (D,) genome yields a
    (2,) objective vector, an (n, D) batch yields (n, 2).  ``pf_points``
    samples the analytic Pareto front at time t; results are cached per
    effective time step since fronts are reused every generation.
    """

    name: str
    dimension: int
    bounds_lower: np.ndarray
    bounds_upper: np.ndarray
    category: str
    _evaluate: Callable[[np.ndarray, float], np.ndarray]
    _pf: Callable[[float, int], np.ndarray]
    n_objectives: int = 2
    _pf_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def evaluate(self, x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise DimensionError(
                f"{self.name}: genome has {x.shape[-1]} variables, expected {self.dimension}"
            )
        if np.any(x < self.bounds_lower) or np.any(x > self.bounds_upper):
            raise ValueError(f"{self.name}: genome outside box bounds")
        return self._evaluate(x, wrap_time(t))

    def evaluate_fast(self, x: np.ndarray, t: float) -> np.ndarray:
        """Hot-loop evaluation; the caller guarantees shape and bounds."""
        return self._evaluate(x, wrap_time(t))

    def pf_points(self, t: float, n_points: int = 1000) -> np.ndarray:
        """Reference front at time t, of exactly ``n_points`` mutually non-dominated points."""
        if n_points < 2:
            raise ValueError("n_points must be >= 2")
        key = (wrap_time(t), n_points)
        cached = self._pf_cache.get(key)
        if cached is None:
            cached = self._pf(key[0], n_points)
            self._pf_cache[key] = cached
        return cached

    def random_population(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.bounds_lower, self.bounds_upper, size=(n, self.dimension))


def make_bounds(dimension: int, first_lo: float, first_hi: float, rest_lo: float, rest_hi: float):
    """Box bounds where variable 1 has its own range (the position variable)."""
    lo = np.full(dimension, rest_lo)
    hi = np.full(dimension, rest_hi)
    lo[0], hi[0] = first_lo, first_hi
    return lo, hi


def evenly_indexed(points: np.ndarray, n_points: int) -> np.ndarray:
    """Pick n_points rows spread evenly across a (sorted) point set."""
    if len(points) <= n_points:
        return points
    idx = np.round(np.linspace(0, len(points) - 1, n_points)).astype(int)
    return points[idx]
