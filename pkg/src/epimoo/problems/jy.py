"""JY benchmark functions (knee-region template, bi-objective).

All seven share the template

    f1 = (1 + g) * (y + A sin(W pi y))^alpha
    f2 = (1 + g) * (1 - y + A sin(W pi y))^beta

with |A * W * pi| < 1, so both factors are monotone in y and the whole
parametric curve is mutually non-dominated.  The problems differ in which
of A, W, alpha/beta, the distance function g, or the x1 -> y mapping moves
with time.  Formulas and category assignments are documented in
docs/benchmarks.md.
"""

from __future__ import annotations

import math

import numpy as np

from epimoo.problems.base import DynamicProblem, make_bounds

JY_DIMENSION = 10


def _gt(t: float) -> float:
    return math.sin(0.5 * math.pi * t)


def _knee_objectives(y, g, a, w, alpha=1.0, beta=1.0):
    ripple = a * np.sin(w * np.pi * y)
    f1 = (1.0 + g) * np.maximum(y + ripple, 0.0) ** alpha
    f2 = (1.0 + g) * np.maximum(1.0 - y + ripple, 0.0) ** beta
    return np.stack([f1, f2], axis=-1)


def _knee_pf(n, a, w, alpha=1.0, beta=1.0):
    y = np.linspace(0.0, 1.0, n)
    return _knee_objectives(y, 0.0, a, w, alpha, beta)


def _shifted_g(x: np.ndarray, shift: float) -> np.ndarray:
    return np.sum((x[..., 1:] - shift) ** 2, axis=-1)


def _jy1_eval(x, t):
    g = _shifted_g(x, _gt(t))
    return _knee_objectives(x[..., 0], g, 0.05, 6.0)


def _jy1_pf(t, n):
    return _knee_pf(n, 0.05, 6.0)


def _jy2_w(t: float) -> float:
    return math.floor(6.0 * math.sin(0.5 * math.pi * (t - 1.0)))


def _jy2_eval(x, t):
    g = _shifted_g(x, _gt(t))
    return _knee_objectives(x[..., 0], g, 0.05, _jy2_w(t))


def _jy2_pf(t, n):
    return _knee_pf(n, 0.05, _jy2_w(t))


def _jy3_alpha(t: float) -> float:
    return math.floor(100.0 * _gt(t) ** 2)


def _jy3_y(x1, t):
    return np.abs(x1 * np.sin((2.0 * _jy3_alpha(t) + 0.5) * np.pi * x1))


def _jy3_eval(x, t):
    # chained variable linkage: optimal when x_i^2 tracks x_{i-1}
    g = np.sum((x[..., 1:] ** 2 - x[..., :-1]) ** 2, axis=-1)
    return _knee_objectives(_jy3_y(x[..., 0], t), g, 0.05, 6.0)


def _jy3_pf(t, n):
    return _knee_pf(n, 0.05, 6.0)


def _jy5_a(t: float) -> float:
    return 0.3 * math.sin(0.5 * math.pi * (t - 1.0))


def _jy5_eval(x, t):
    g = np.sum(x[..., 1:] ** 2, axis=-1)
    return _knee_objectives(x[..., 0], g, _jy5_a(t), 1.0)


def _jy5_pf(t, n):
    return _knee_pf(n, _jy5_a(t), 1.0)


def _jy6_k(t: float) -> float:
    return 2.0 * math.floor(10.0 * abs(_gt(t)))


def _jy6_eval(x, t):
    y = x[..., 1:] - _gt(t)
    kt = _jy6_k(t)
    g = np.sum(4.0 * y**2 - np.cos(kt * np.pi * y) + 1.0, axis=-1)
    return _knee_objectives(x[..., 0], g, 0.1, 3.0)


def _jy6_pf(t, n):
    return _knee_pf(n, 0.1, 3.0)


def _jy7_alpha(t: float) -> float:
    return 0.2 + 2.8 * abs(_gt(t))


def _jy7_eval(x, t):
    y = x[..., 1:] - _gt(t)
    g = np.sum(y**2 - 10.0 * np.cos(2.0 * np.pi * y) + 10.0, axis=-1)
    a = _jy7_alpha(t)
    return _knee_objectives(x[..., 0], g, 0.1, 3.0, a, a)


def _jy7_pf(t, n):
    a = _jy7_alpha(t)
    return _knee_pf(n, 0.1, 3.0, a, a)


def _jy8_alpha(t: float) -> float:
    return 10.0 ** math.sin(0.5 * math.pi * (t - 1.0))


def _jy8_eval(x, t):
    g = np.sum(x[..., 1:] ** 2, axis=-1)
    a = _jy8_alpha(t)
    return _knee_objectives(x[..., 0], g, 0.05, 6.0, a, a)


def _jy8_pf(t, n):
    a = _jy8_alpha(t)
    return _knee_pf(n, 0.05, 6.0, a, a)


def jy_problems(dimension: int = JY_DIMENSION) -> list[DynamicProblem]:
    lo, hi = make_bounds(dimension, 0.0, 1.0, -1.0, 1.0)
    specs = [
        ("jy1", "I", _jy1_eval, _jy1_pf),
        ("jy2", "II", _jy2_eval, _jy2_pf),
        ("jy3", "I", _jy3_eval, _jy3_pf),
        ("jy5", "III", _jy5_eval, _jy5_pf),
        ("jy6", "I", _jy6_eval, _jy6_pf),
        ("jy7", "II", _jy7_eval, _jy7_pf),
        ("jy8", "III", _jy8_eval, _jy8_pf),
    ]
    return [
        DynamicProblem(name, dimension, lo, hi, cat, ev, pf)
        for name, cat, ev, pf in specs
    ]
