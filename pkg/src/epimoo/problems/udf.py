"""UDF benchmark functions (ZDT/UF-derived, bi-objective).

The distance variables follow sinusoidal curves in x1 (the UF skeleton,
split into odd- and even-indexed groups feeding f1 and f2 respectively);
dynamics enter as a phase shift of the curve (moving Pareto set), a
front-shape exponent, or a front offset.  Formulas and categories are
documented in docs/benchmarks.md.
"""

from __future__ import annotations

import math

import numpy as np

from epimoo.problems.base import DynamicProblem, make_bounds


def _gt(t: float) -> float:
    return math.sin(0.5 * math.pi * t)


def _ht(t: float) -> float:
    return 0.5 + _gt(t)


def _positions(n: int):
    j = np.arange(2, n + 1)  # 1-based positions of the distance variables
    return j, (j % 2 == 1), (j % 2 == 0)


def _sine_deviations(x: np.ndarray, phase: float) -> np.ndarray:
    n = x.shape[-1]
    j, _, _ = _positions(n)
    curve = np.sin(6.0 * np.pi * x[..., :1] + j * np.pi / n + phase)
    return x[..., 1:] - curve


def _uf2_deviations(x: np.ndarray, phase: float) -> np.ndarray:
    n = x.shape[-1]
    j, odd, _ = _positions(n)
    x1 = x[..., :1]
    envelope = 0.3 * x1**2 * np.cos(24.0 * np.pi * x1 + 4.0 * j * np.pi / n + 2.0 * phase) + 0.6 * x1
    angle = 6.0 * np.pi * x1 + j * np.pi / n + phase
    curve = envelope * np.where(odd, np.cos(angle), np.sin(angle))
    return x[..., 1:] - curve


def _group_means(terms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = terms.shape[-1] + 1
    _, odd, even = _positions(n)
    s1 = 2.0 * np.sum(terms * odd, axis=-1) / odd.sum()
    s2 = 2.0 * np.sum(terms * even, axis=-1) / even.sum()
    return s1, s2


def _sqrt_front(x1, s1, s2, offset=0.0):
    return np.stack([x1 + s1, 1.0 - np.sqrt(x1) + offset + s2], axis=-1)


def _power_front(x1, s1, s2, h):
    return np.stack([x1 + s1, 1.0 - x1**h + s2], axis=-1)


def _sqrt_pf(t, n, offset=0.0):
    v = np.linspace(0.0, 1.0, n)
    return np.stack([v, 1.0 - np.sqrt(v) + offset], axis=-1)


def _power_pf(t, n, h):
    v = np.linspace(0.0, 1.0, n)
    return np.stack([v, 1.0 - v**h], axis=-1)


def _udf1_eval(x, t):
    s1, s2 = _group_means(_sine_deviations(x, _gt(t)) ** 2)
    return _sqrt_front(x[..., 0], s1, s2)


def _udf2_eval(x, t):
    s1, s2 = _group_means(_sine_deviations(x, _gt(t)) ** 2)
    return _power_front(x[..., 0], s1, s2, _ht(t))


def _udf3_eval(x, t):
    s1, s2 = _group_means(_uf2_deviations(x, _gt(t)) ** 2)
    return _sqrt_front(x[..., 0], s1, s2)


def _udf4_eval(x, t):
    s1, s2 = _group_means(_sine_deviations(x, 0.0) ** 2)
    return _power_front(x[..., 0], s1, s2, _ht(t))


def _udf5_eval(x, t):
    s1, s2 = _group_means(_sine_deviations(x, 0.0) ** 2)
    return _sqrt_front(x[..., 0], s1, s2, offset=0.5 * _gt(t))


def _udf6_eval(x, t):
    y = _sine_deviations(x, _gt(t))
    s1, s2 = _group_means(2.0 * y**2 - np.cos(4.0 * np.pi * y) + 1.0)
    return _power_front(x[..., 0], s1, s2, _ht(t))


def udf_problems(dimension: int = 30) -> list[DynamicProblem]:
    if dimension < 3:
        raise ValueError("UDF problems need at least 3 variables")
    lo, hi = make_bounds(dimension, 0.0, 1.0, -1.0, 1.0)
    specs = [
        ("udf1", "I", _udf1_eval, _sqrt_pf),
        ("udf2", "II", _udf2_eval, lambda t, n: _power_pf(t, n, _ht(t))),
        ("udf3", "I", _udf3_eval, _sqrt_pf),
        ("udf4", "III", _udf4_eval, lambda t, n: _power_pf(t, n, _ht(t))),
        ("udf5", "III", _udf5_eval, lambda t, n: _sqrt_pf(t, n, offset=0.5 * _gt(t))),
        ("udf6", "II", _udf6_eval, lambda t, n: _power_pf(t, n, _ht(t))),
    ]
    return [
        DynamicProblem(name, dimension, lo, hi, cat, ev, pf)
        for name, cat, ev, pf in specs
    ]
