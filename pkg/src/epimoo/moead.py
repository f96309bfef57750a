"""MOEA/D-DE: decomposition, DE variation, polynomial mutation, replacement.

The population is stored columnar (genomes, objectives, evaluation
timestamps) with one row per subproblem; a generation walks the
subproblems in index order, so replacement is order-dependent and a
single run is strictly sequential.  A blocking policy hooks into the
variation pipeline between DE crossover and mutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from epimoo.blocking import BlockingPolicy, apply_block, effective_parameters, sample_block_mask
from epimoo.errors import ConfigError, DimensionError
from epimoo.problems.base import DynamicProblem

WEIGHT_FLOOR = 1e-6  # lets extreme subproblems still discriminate on both objectives


@dataclass(frozen=True)
class DEParams:
    """Differential-evolution and neighborhood parameters.

    ``delta`` is the probability that the mating pool is the neighborhood
    rather than the whole population; ``nr`` caps replacements per
    offspring; ``pm`` defaults to 1/D when left as None.
    """

    f_scale: float = 0.5
    cr: float = 1.0
    pm: float | None = None
    eta_m: float = 20.0
    delta: float = 0.9
    nr: int = 2
    t_neighbors: int = 20

    def __post_init__(self) -> None:
        if self.f_scale <= 0:
            raise ConfigError("F must be positive")
        for name in ("cr", "delta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.pm is not None and not 0.0 <= self.pm <= 1.0:
            raise ConfigError("pm must lie in [0, 1]")
        if self.nr < 1:
            raise ConfigError("nr must be >= 1")
        if self.t_neighbors < 2:
            raise ConfigError("neighborhood size must be >= 2")

    def mutation_probability(self, dimension: int) -> float:
        return 1.0 / dimension if self.pm is None else self.pm


@dataclass
class AlgorithmState:
    """Self-contained optimizer state; transferable, never shared while running."""

    genomes: np.ndarray  # (N, D)
    objectives: np.ndarray  # (N, m)
    eval_generation: np.ndarray  # (N,) generation index of last evaluation
    weights: np.ndarray  # (N, m)
    neighbors: np.ndarray  # (N, T)
    ideal: np.ndarray  # (m,)
    evals: int = 0
    generation: int = 0
    schedule_evals: int = 0  # variation evaluations feeding the blocking schedules
    schedule_max: int = field(default=1)

    @property
    def population_size(self) -> int:
        return len(self.genomes)


def generate_weight_vectors(n: int, m: int) -> np.ndarray:
    """N uniformly spaced weight vectors on the 2-simplex."""
    if m != 2:
        raise DimensionError(f"only bi-objective decomposition is supported, got m={m}")
    if n < 2:
        raise ConfigError("need at least 2 subproblems")
    w1 = np.linspace(0.0, 1.0, n)
    return np.stack([w1, 1.0 - w1], axis=-1)


def build_neighborhoods(weights: np.ndarray, t: int) -> np.ndarray:
    """Indices of the T nearest weight vectors (self included, ties to lower index)."""
    if t > len(weights):
        raise ConfigError(f"neighborhood size {t} exceeds population {len(weights)}")
    diff = weights[:, None, :] - weights[None, :, :]
    dist = np.sqrt(np.sum(diff**2, axis=-1))
    order = np.argsort(dist, axis=1, kind="stable")
    return order[:, :t].astype(np.intp)


def tchebycheff(objectives: np.ndarray, weight: np.ndarray, ideal: np.ndarray) -> float:
    """max_j max(w_j, 1e-6) * |f_j - z*_j|."""
    objectives = np.asarray(objectives, dtype=float)
    weight = np.asarray(weight, dtype=float)
    ideal = np.asarray(ideal, dtype=float)
    if not objectives.shape == weight.shape == ideal.shape:
        raise DimensionError("objectives, weight and ideal point must have equal length")
    return float(np.max(np.maximum(weight, WEIGHT_FLOOR) * np.abs(objectives - ideal)))


def de_variation(
    target: np.ndarray,
    r1: np.ndarray,
    r2: np.ndarray,
    r3: np.ndarray,
    params: DEParams,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    """rand/1 DE step against the target, clipped to the box bounds."""
    cross = rng.random(target.shape[0]) < params.cr
    child = np.where(cross, r1 + params.f_scale * (r2 - r3), target)
    return np.clip(child, lower, upper)


def polynomial_mutation(
    genome: np.ndarray,
    pm: float,
    eta_m: float,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Deb's bounded polynomial mutation, applied per gene with probability pm."""
    d = genome.shape[0]
    gate = rng.random(d) < pm
    u = rng.random(d)
    idx = np.nonzero(gate)[0]
    if idx.size == 0:
        return genome
    x = genome[idx]
    lo = lower[idx]
    hi = upper[idx]
    span = hi - lo
    uu = u[idx]
    delta1 = (x - lo) / span
    delta2 = (hi - x) / span
    exp = 1.0 / (eta_m + 1.0)
    low_side = (2.0 * uu + (1.0 - 2.0 * uu) * (1.0 - delta1) ** (eta_m + 1.0)) ** exp - 1.0
    high_side = 1.0 - (2.0 * (1.0 - uu) + 2.0 * (uu - 0.5) * (1.0 - delta2) ** (eta_m + 1.0)) ** exp
    deltaq = np.where(uu <= 0.5, low_side, high_side)
    out = genome.copy()
    out[idx] = np.clip(x + deltaq * span, lo, hi)
    return out


def init_state(
    problem: DynamicProblem,
    n: int,
    params: DEParams,
    rng: np.random.Generator,
    t0: float = 0.0,
    schedule_max: int = 1,
) -> AlgorithmState:
    """Random initial population evaluated at t0; one evaluation per member."""
    if n < 3:
        raise ConfigError("population must be >= 3 for three-parent DE variation")
    weights = generate_weight_vectors(n, problem.n_objectives)
    neighbors = build_neighborhoods(weights, params.t_neighbors)
    genomes = problem.random_population(n, rng)
    objectives = problem.evaluate(genomes, t0)
    return AlgorithmState(
        genomes=genomes,
        objectives=objectives,
        eval_generation=np.zeros(n, dtype=np.intp),
        weights=weights,
        neighbors=neighbors,
        ideal=objectives.min(axis=0).copy(),
        evals=n,
        schedule_max=max(schedule_max, 1),
    )


def _pick_distinct(rng: np.random.Generator, pool_size: int) -> tuple[int, int, int]:
    a = rng.integers(0, pool_size)
    b = rng.integers(0, pool_size)
    while b == a:
        b = rng.integers(0, pool_size)
    c = rng.integers(0, pool_size)
    while c == a or c == b:
        c = rng.integers(0, pool_size)
    return int(a), int(b), int(c)


def replace_in_pool(
    state: AlgorithmState,
    pool: np.ndarray,
    child: np.ndarray,
    child_f: np.ndarray,
    nr: int,
    rng: np.random.Generator,
    weight_eff: np.ndarray | None = None,
) -> int:
    """Replace at most nr pool incumbents the child beats, scanning in random order."""
    if weight_eff is None:
        weight_eff = np.maximum(state.weights, WEIGHT_FLOOR)
    wp = weight_eff[pool]
    g_child = np.max(wp * np.abs(child_f - state.ideal), axis=1)
    g_incumbent = np.max(wp * np.abs(state.objectives[pool] - state.ideal), axis=1)
    worse = g_incumbent > g_child
    scan = rng.permutation(len(pool))
    hits = scan[worse[scan]][:nr]
    if hits.size:
        rows = pool[hits]
        state.genomes[rows] = child
        state.objectives[rows] = child_f
        state.eval_generation[rows] = state.generation
    return int(hits.size)


def evolve_generation(
    state: AlgorithmState,
    problem: DynamicProblem,
    policy: BlockingPolicy,
    t: float,
    rng: np.random.Generator,
    params: DEParams,
) -> AlgorithmState:
    """One MOEA/D-DE generation with the blocking hook; mutates and returns state."""
    n = state.population_size
    d = problem.dimension
    lower, upper = problem.bounds_lower, problem.bounds_upper
    pm = params.mutation_probability(d)
    all_indices = np.arange(n)
    weight_eff = np.maximum(state.weights, WEIGHT_FLOOR)

    for i in range(n):
        pool = state.neighbors[i] if rng.random() < params.delta else all_indices
        if len(pool) < 3:
            pool = all_indices
        a, b, c = _pick_distinct(rng, len(pool))
        parent = state.genomes[i]
        child = de_variation(
            parent,
            state.genomes[pool[a]],
            state.genomes[pool[b]],
            state.genomes[pool[c]],
            params,
            rng,
            lower,
            upper,
        )

        p_block, s_block = effective_parameters(
            policy, state.schedule_evals, state.schedule_max, d
        )
        mask = sample_block_mask(p_block, s_block, d, rng)
        child = apply_block(parent, child, mask)
        child = polynomial_mutation(child, pm, params.eta_m, lower, upper, rng)
        if policy.block_shields_mutation and mask is not None:
            child = apply_block(parent, child, mask)

        child_f = problem.evaluate_fast(child, t)
        state.evals += 1
        state.schedule_evals += 1
        np.minimum(state.ideal, child_f, out=state.ideal)
        # a variation-free clone of its parent carries no new information and
        # must not collapse diversity by displacing other incumbents (this is
        # what makes a fully-blocked, mutation-shielded run a strict no-op)
        if not np.array_equal(child, parent):
            replace_in_pool(state, pool, child, child_f, params.nr, rng, weight_eff)

    state.generation += 1
    return state


def reinitialize_on_change(
    state: AlgorithmState,
    problem: DynamicProblem,
    t_new: float,
    fraction: float,
    rng: np.random.Generator,
) -> AlgorithmState:
    """Change response: refresh all objectives at t_new, randomize a fraction.

    Costs exactly N + round(fraction * N) evaluations; the ideal point is
    rebuilt from scratch because stale objectives are discarded.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ConfigError("reinit fraction must lie in [0, 1]")
    n = state.population_size
    state.objectives = problem.evaluate(state.genomes, t_new)
    state.eval_generation[:] = state.generation
    state.evals += n

    k = int(np.floor(fraction * n + 0.5))
    if k > 0:
        replace = rng.choice(n, size=k, replace=False)
        state.genomes[replace] = problem.random_population(k, rng)
        state.objectives[replace] = problem.evaluate(state.genomes[replace], t_new)
        state.evals += k
    state.ideal = state.objectives.min(axis=0).copy()
    return state
