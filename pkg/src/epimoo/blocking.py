"""Epigenetic crossover blocking.

During reproduction the mechanism may trigger, fitness-blind, and pick a
random block of variable indices; at those loci the offspring's genes are
overwritten with the parent's, suppressing whatever change the variation
operator made there.  Masks live for a single reproduction event: nothing
is inherited, every event resamples from scratch.

Three schedules control the trigger probability P(b) and block size s:

* ``e``   - both constant (P(b)=0.1, s=6).
* ``eib`` - constant P(b)=0.1, block size ramps linearly with the consumed
  evaluation budget from 1 up to the full variable count.
* ``eip`` - constant s=6, probability ramps with the consumed budget from 0
  up to a 0.8 cap, quantized to 0.01 steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from epimoo.errors import ConfigError, DimensionError

VARIANTS = ("off", "e", "eib", "eip")


@dataclass(frozen=True)
class BlockingPolicy:
    """Blocking variant plus its trigger/size parameters.

    ``schedule_span`` picks the denominator of the budget-ratio schedules:
    ``"run"`` uses the whole run's variation budget, ``"cycle"`` resets the
    clock at the start of every dynamic cycle.  ``block_shields_mutation``
    re-applies the mask after mutation so blocked loci survive the whole
    variation pipeline, not just crossover.
    """

    variant: str = "off"
    base_probability: float = 0.1
    base_block_size: int = 6
    max_probability: float = 0.8
    probability_quantum: float = 0.01
    block_shields_mutation: bool = False
    schedule_span: str = "run"

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown blocking variant {self.variant!r}; pick one of {VARIANTS}")
        if not 0.0 <= self.base_probability <= 1.0:
            raise ConfigError("base_probability must lie in [0, 1]")
        if not 0.0 < self.max_probability <= 1.0:
            raise ConfigError("max_probability must lie in (0, 1]")
        if self.base_block_size < 1:
            raise ConfigError("base_block_size must be >= 1")
        if self.probability_quantum <= 0.0:
            raise ConfigError("probability_quantum must be positive")
        if self.schedule_span not in ("run", "cycle"):
            raise ConfigError("schedule_span must be 'run' or 'cycle'")


def eib_block_size(evals: int, max_evals: int, n_vars: int) -> int:
    """Ramping block size: round(evals/max_evals * n_vars), clamped to [1, n_vars]."""
    if max_evals <= 0:
        raise ConfigError("max_evals must be positive")
    if n_vars < 1:
        raise ConfigError("n_vars must be >= 1")
    ratio = min(max(evals, 0), max_evals) / max_evals
    # round half up so the size steps at the documented budget fractions
    size = math.floor(ratio * n_vars + 0.5)
    return min(max(size, 1), n_vars)


def eip_probability(
    evals: int,
    max_evals: int,
    max_probability: float = 0.8,
    quantum: float = 0.01,
) -> float:
    """Ramping trigger probability, floored to ``quantum`` steps, capped."""
    if max_evals <= 0:
        raise ConfigError("max_evals must be positive")
    ratio = min(max(evals, 0), max_evals) / max_evals
    raw = ratio * max_probability
    steps = math.floor(raw / quantum + 1e-12)
    return min(steps * quantum, max_probability)


def effective_parameters(
    policy: BlockingPolicy, evals: int, max_evals: int, n_vars: int
) -> tuple[float, int]:
    """Resolve (trigger probability, block size) for the current budget position."""
    if policy.variant == "off":
        return 0.0, 0
    if policy.variant == "e":
        return policy.base_probability, min(policy.base_block_size, n_vars)
    if policy.variant == "eib":
        return policy.base_probability, eib_block_size(evals, max_evals, n_vars)
    # eip
    p = eip_probability(evals, max_evals, policy.max_probability, policy.probability_quantum)
    return p, min(policy.base_block_size, n_vars)


def sample_block_mask(
    p: float, s: int, n_vars: int, rng: np.random.Generator
) -> np.ndarray | None:
    """Trigger with probability ``p`` and pick ``s`` distinct loci uniformly.

    Returns the index array, or None when the mechanism does not fire.
    Sampling never sees objective values: blocking is fitness-blind.  With
    p <= 0 the rng is untouched, so a disabled policy leaves the random
    stream identical to a run without the mechanism.
    """
    if p <= 0.0 or s <= 0:
        return None
    if s > n_vars:
        raise DimensionError(f"block size {s} exceeds variable count {n_vars}")
    if p < 1.0 and rng.random() >= p:
        return None
    return rng.permutation(n_vars)[:s]


def apply_block(
    parent: np.ndarray, child: np.ndarray, mask: np.ndarray | None
) -> np.ndarray:
    """Copy the parent's genes over the child at the masked loci."""
    if parent.shape != child.shape:
        raise DimensionError(f"parent/child length mismatch: {parent.shape} vs {child.shape}")
    if mask is None:
        return child
    out = child.copy()
    out[mask] = parent[mask]
    return out
