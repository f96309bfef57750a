"""FDA benchmark functions (ZDT-derived, bi-objective).

FDA2 uses the repaired exponent (the original formulation's optimum sits
at the variable bounds instead of the intended shifted values); FDA3 is
the single-position-variable form.  See docs/benchmarks.md for the exact
formulas and their validation.
"""

from __future__ import annotations

import math

import numpy as np

from epimoo.problems.base import DynamicProblem, make_bounds


def _g_amp(t: float) -> float:
    # sweeps 0 -> 1 -> 0 over one cycle (t in [0, 2))
    return math.sin(0.5 * math.pi * t)


def _fda1_eval(x: np.ndarray, t: float) -> np.ndarray:
    gt = _g_amp(t)
    f1 = x[..., 0]
    g = 1.0 + np.sum((x[..., 1:] - gt) ** 2, axis=-1)
    f2 = g * (1.0 - np.sqrt(f1 / g))
    return np.stack([f1, f2], axis=-1)


def _fda1_pf(t: float, n: int) -> np.ndarray:
    v = np.linspace(0.0, 1.0, n)
    return np.stack([v, 1.0 - np.sqrt(v)], axis=-1)


def _fda2_h(t: float) -> float:
    return 0.75 + 0.7 * _g_amp(t)


def _fda2_split(dimension: int) -> int:
    # distance variables split evenly between the g group and the h group
    return 1 + (dimension - 1) // 2


def _fda2_eval(x: np.ndarray, t: float) -> np.ndarray:
    ht = _fda2_h(t)
    cut = _fda2_split(x.shape[-1])
    f1 = x[..., 0]
    g = 1.0 + np.sum(x[..., 1:cut] ** 2, axis=-1)
    # direct exponent: its minimum over the h-group is ht, reached at ht/4
    exponent = ht + np.sum((x[..., cut:] - ht / 4.0) ** 2, axis=-1)
    f2 = g * (1.0 - (f1 / g) ** exponent)
    return np.stack([f1, f2], axis=-1)


def _fda2_pf(t: float, n: int) -> np.ndarray:
    ht = _fda2_h(t)
    v = np.linspace(0.0, 1.0, n)
    return np.stack([v, 1.0 - v**ht], axis=-1)


def _fda3_ft(t: float) -> float:
    return 10.0 ** (2.0 * _g_amp(t))


def _fda3_eval(x: np.ndarray, t: float) -> np.ndarray:
    gt = abs(_g_amp(t))
    ft = _fda3_ft(t)
    f1 = x[..., 0] ** ft
    g = 1.0 + gt + np.sum((x[..., 1:] - gt) ** 2, axis=-1)
    f2 = g * (1.0 - np.sqrt(f1 / g))
    return np.stack([f1, f2], axis=-1)


def _fda3_pf(t: float, n: int) -> np.ndarray:
    gt = abs(_g_amp(t))
    v = np.linspace(0.0, 1.0, n)
    return np.stack([v, (1.0 + gt) * (1.0 - np.sqrt(v / (1.0 + gt)))], axis=-1)


def fda_problems(dimension: int = 30) -> list[DynamicProblem]:
    lo, hi = make_bounds(dimension, 0.0, 1.0, -1.0, 1.0)
    return [
        DynamicProblem("fda1", dimension, lo, hi, "I", _fda1_eval, _fda1_pf),
        DynamicProblem("fda2", dimension, lo, hi, "II", _fda2_eval, _fda2_pf),
        DynamicProblem("fda3", dimension, lo, hi, "II", _fda3_eval, _fda3_pf),
    ]
