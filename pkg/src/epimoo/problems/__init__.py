"""Dynamic benchmark suites: FDA1-3, JY1-3/5-8, UDF1-6."""

from __future__ import annotations

from epimoo.errors import ConfigError
from epimoo.problems.base import (
    CATEGORIES,
    DynamicProblem,
    TimeModel,
    time_of_generation,
    wrap_time,
)
from epimoo.problems.fda import fda_problems
from epimoo.problems.jy import JY_DIMENSION, jy_problems
from epimoo.problems.udf import udf_problems


def suite_catalog(dimension: int | None = None) -> list[DynamicProblem]:
    """All 16 benchmark problems, in table order.

    ``dimension`` overrides every problem's variable count (desk-scale runs
    use 10); by default FDA/UDF use 30 and JY its source dimension.
    """
    return (
        fda_problems(dimension or 30)
        + jy_problems(dimension or JY_DIMENSION)
        + udf_problems(dimension or 30)
    )


def problem_by_name(name: str, dimension: int | None = None) -> DynamicProblem:
    for problem in suite_catalog(dimension):
        if problem.name == name.lower():
            return problem
    known = ", ".join(p.name for p in suite_catalog())
    raise ConfigError(f"unknown problem {name!r}; catalog has: {known}")


__all__ = [
    "CATEGORIES",
    "DynamicProblem",
    "TimeModel",
    "JY_DIMENSION",
    "problem_by_name",
    "suite_catalog",
    "time_of_generation",
    "wrap_time",
]
