"""Dynamic multi-objective optimization with epigenetic crossover blocking.

The package bundles a MOEA/D-DE optimizer, the probabilistic blocking
mechanism and its three parameter schedules, the FDA/JY/UDF dynamic
benchmark suites, IGD-based evaluation, and an experiment harness that
produces baseline-vs-variant comparison tables.
"""

from epimoo.blocking import BlockingPolicy
from epimoo.metrics import igd
from epimoo.moead import DEParams
from epimoo.problems import DynamicProblem, TimeModel, problem_by_name, suite_catalog
from epimoo.stats import wilcoxon_signed_rank

__version__ = "0.1.0"

__all__ = [
    "BlockingPolicy",
    "DEParams",
    "DynamicProblem",
    "TimeModel",
    "igd",
    "problem_by_name",
    "suite_catalog",
    "wilcoxon_signed_rank",
    "__version__",
]
