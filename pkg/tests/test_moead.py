import numpy as np
import pytest
from numpy.testing import assert_allclose

from epimoo.blocking import BlockingPolicy
from epimoo.errors import ConfigError, DimensionError
from epimoo.moead import (
    AlgorithmState,
    DEParams,
    build_neighborhoods,
    de_variation,
    evolve_generation,
    generate_weight_vectors,
    init_state,
    polynomial_mutation,
    reinitialize_on_change,
    replace_in_pool,
    tchebycheff,
)
from epimoo.problems import problem_by_name

OFF = BlockingPolicy("off")


def small_setup(n=20, d=10, seed=0, **de_kwargs):
    problem = problem_by_name("fda1", dimension=d)
    params = DEParams(t_neighbors=min(5, n), **de_kwargs)
    rng = np.random.default_rng(seed)
    state = init_state(problem, n, params, rng, schedule_max=n * 50)
    return problem, params, rng, state


class TestWeights:
    def test_three_vectors(self):
        assert_allclose(generate_weight_vectors(3, 2), [[0, 1], [0.5, 0.5], [1, 0]])

    def test_endpoints(self):
        assert_allclose(generate_weight_vectors(2, 2), [[0, 1], [1, 0]])

    def test_arithmetic_spacing(self):
        w = generate_weight_vectors(5, 2)
        assert_allclose(w[:, 0], [0, 0.25, 0.5, 0.75, 1])
        assert_allclose(w.sum(axis=1), np.ones(5))

    def test_distinct(self):
        w = generate_weight_vectors(100, 2)
        assert len(np.unique(w, axis=0)) == 100

    def test_unsupported_objective_count(self):
        with pytest.raises(DimensionError):
            generate_weight_vectors(10, 3)


class TestNeighborhoods:
    def test_t_equals_n(self):
        w = generate_weight_vectors(3, 2)
        nb = build_neighborhoods(w, 3)
        assert all(sorted(row.tolist()) == [0, 1, 2] for row in nb)

    def test_line_adjacency(self):
        w = generate_weight_vectors(5, 2)
        nb = build_neighborhoods(w, 2)
        assert sorted(nb[0].tolist()) == [0, 1]

    def test_against_bruteforce(self):
        w = generate_weight_vectors(5, 2)
        nb = build_neighborhoods(w, 3)
        assert sorted(nb[2].tolist()) == [1, 2, 3]
        # brute force: sort every pairwise distance, ties to lower index
        for i in range(5):
            dist = [(np.linalg.norm(w[i] - w[j]), j) for j in range(5)]
            expect = [j for _, j in sorted(dist)][:3]
            assert sorted(nb[i].tolist()) == sorted(expect)

    def test_self_membership(self):
        w = generate_weight_vectors(40, 2)
        nb = build_neighborhoods(w, 7)
        assert all(i in nb[i] for i in range(40))

    def test_oversized_neighborhood(self):
        with pytest.raises(ConfigError):
            build_neighborhoods(generate_weight_vectors(5, 2), 6)


class TestTchebycheff:
    def test_single_active_term(self):
        assert tchebycheff([0.5, 0.5], [1.0, 0.0], [0.0, 0.0]) == 0.5

    def test_max_of_terms(self):
        assert_allclose(tchebycheff([0.2, 0.8], [0.5, 0.5], [0.0, 0.0]), 0.4)

    def test_at_ideal(self):
        assert tchebycheff([1.0, 1.0], [0.5, 0.5], [1.0, 1.0]) == 0.0

    def test_zero_weight_guard(self):
        # the guarded weight keeps the second objective visible
        assert tchebycheff([0.0, 100.0], [1.0, 0.0], [0.0, 0.0]) == pytest.approx(1e-4)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            tchebycheff([1.0, 2.0], [0.5, 0.5, 0.0], [0.0, 0.0])


class TestDEVariation:
    LO = np.full(2, -10.0)
    HI = np.full(2, 10.0)

    def test_direct_formula(self):
        child = de_variation(
            np.zeros(2),
            np.array([1.0, 1.0]),
            np.array([1.0, 0.0]),
            np.array([0.0, 1.0]),
            DEParams(f_scale=0.5, cr=1.0),
            np.random.default_rng(0),
            self.LO,
            self.HI,
        )
        assert_allclose(child, [1.5, 0.5])

    def test_zero_difference_term(self):
        r1 = np.array([0.3, -0.2])
        child = de_variation(
            np.zeros(2), r1, np.array([1.0, 1.0]), np.array([-1.0, 0.5]),
            DEParams(f_scale=1e-12, cr=1.0), np.random.default_rng(0), self.LO, self.HI,
        )
        assert_allclose(child, r1, atol=1e-11)

    def test_cr_zero_keeps_target(self):
        target = np.array([0.1, 0.2])
        child = de_variation(
            target, np.ones(2), np.ones(2), np.zeros(2),
            DEParams(cr=0.0), np.random.default_rng(0), self.LO, self.HI,
        )
        assert_allclose(child, target)

    def test_clipped_to_bounds(self):
        child = de_variation(
            np.zeros(2), np.array([9.0, -9.0]), np.array([9.0, -9.0]), np.array([-9.0, 9.0]),
            DEParams(f_scale=1.0, cr=1.0), np.random.default_rng(0), self.LO, self.HI,
        )
        assert np.all(child <= self.HI) and np.all(child >= self.LO)


class TestPolynomialMutation:
    LO = np.zeros(5)
    HI = np.ones(5)

    def test_pm_zero_is_identity(self):
        g = np.random.default_rng(0).uniform(size=5)
        out = polynomial_mutation(g, 0.0, 20.0, self.LO, self.HI, np.random.default_rng(1))
        assert_allclose(out, g)

    def test_bounds_preserved_at_edges(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            out = polynomial_mutation(np.zeros(5), 1.0, 20.0, self.LO, self.HI, rng)
            assert np.all(out >= 0.0) and np.all(out <= 1.0)
            out = polynomial_mutation(np.ones(5), 1.0, 20.0, self.LO, self.HI, rng)
            assert np.all(out >= 0.0) and np.all(out <= 1.0)

    def test_displacement_shrinks_with_eta(self):
        # Monte-Carlo: mean |shift| for eta=20 well below eta=5
        rng20 = np.random.default_rng(3)
        rng5 = np.random.default_rng(3)
        g = np.full(5, 0.5)
        n = 20_000
        d20 = np.mean(
            [np.abs(polynomial_mutation(g, 1.0, 20.0, self.LO, self.HI, rng20) - g).mean() for _ in range(n)]
        )
        d5 = np.mean(
            [np.abs(polynomial_mutation(g, 1.0, 5.0, self.LO, self.HI, rng5) - g).mean() for _ in range(n)]
        )
        assert d20 < d5 * 0.6


class TestReplacement:
    def test_cap_respected(self):
        problem, params, rng, state = small_setup()
        # a child strictly better than everything replaces exactly nr members
        child = state.genomes[0].copy()
        child_f = np.array([-1.0, -1.0])
        state.ideal = np.array([-1.0, -1.0])
        before = state.genomes.copy()
        pool = np.arange(state.population_size)
        count = replace_in_pool(state, pool, child, child_f, 2, rng)
        assert count == 2
        assert (np.any(state.genomes != before, axis=1)).sum() <= 2

    def test_no_replacement_when_equal(self):
        problem, params, rng, state = small_setup()
        before = state.objectives.copy()
        pool = np.arange(5)
        # offering an incumbent's own objectives must not replace anyone
        replace_in_pool(state, pool, state.genomes[0].copy(), state.objectives[0].copy(), 2, rng)
        replaced = np.any(state.objectives != before, axis=1)
        assert replaced[pool].sum() <= np.sum(
            np.max(np.abs(before[pool] - state.objectives[0]), axis=1) > 0
        )


class TestEvolve:
    def test_eval_accounting(self):
        problem, params, rng, state = small_setup(n=20)
        for _ in range(3):
            evolve_generation(state, problem, OFF, 0.0, rng, params)
        assert state.evals == 20 * 4  # initial + 3 generations
        assert state.generation == 3

    def test_ideal_dominates_population(self):
        problem, params, rng, state = small_setup(n=30, seed=5)
        for gen in range(5):
            evolve_generation(state, problem, OFF, 0.0, rng, params)
            assert np.all(state.ideal <= state.objectives.min(axis=0) + 1e-15)

    def test_bound_safety(self):
        problem, params, rng, state = small_setup(n=30, seed=6)
        for _ in range(5):
            evolve_generation(state, problem, OFF, 0.1, rng, params)
        assert np.all(state.genomes >= problem.bounds_lower)
        assert np.all(state.genomes <= problem.bounds_upper)

    def test_deterministic_trajectory(self):
        runs = []
        for _ in range(2):
            problem, params, rng, state = small_setup(n=20, seed=9)
            for _ in range(4):
                evolve_generation(state, problem, OFF, 0.0, rng, params)
            runs.append(state.genomes.copy())
        assert np.array_equal(runs[0], runs[1])

    def test_blocking_off_equivalence(self):
        # a policy that can never trigger leaves the trajectory untouched
        genomes = {}
        for policy in (OFF, BlockingPolicy("e", base_probability=0.0)):
            problem, params, rng, state = small_setup(n=20, seed=11)
            for _ in range(5):
                evolve_generation(state, problem, policy, 0.0, rng, params)
            genomes[policy.variant] = state.genomes.copy()
        assert np.array_equal(genomes["off"], genomes["e"])

    def test_full_shielded_blocking_freezes_population(self):
        policy = BlockingPolicy(
            "e", base_probability=1.0, base_block_size=10, block_shields_mutation=True
        )
        problem, params, rng, state = small_setup(n=20, seed=12)
        frozen = state.genomes.copy()
        for _ in range(10):
            evolve_generation(state, problem, policy, 0.0, rng, params)
        assert np.array_equal(state.genomes, frozen)

    def test_improves_igd_on_fda1(self):
        from epimoo.metrics import igd, nondominated

        problem, params, rng, state = small_setup(n=50, d=10, seed=13)
        pf = problem.pf_points(0.0, 500)
        start = igd(nondominated(state.objectives), pf)
        for _ in range(30):
            evolve_generation(state, problem, OFF, 0.0, rng, params)
        end = igd(nondominated(state.objectives), pf)
        assert end < start * 0.5


class TestReinitialize:
    def test_fraction_zero_pure_reevaluation(self):
        problem, params, rng, state = small_setup(n=20, seed=20)
        genomes = state.genomes.copy()
        reinitialize_on_change(state, problem, 0.1, 0.0, rng)
        assert np.array_equal(state.genomes, genomes)
        assert_allclose(state.objectives, problem.evaluate(genomes, 0.1))

    def test_fraction_one_full_restart(self):
        problem, params, rng, state = small_setup(n=20, seed=21)
        genomes = state.genomes.copy()
        reinitialize_on_change(state, problem, 0.1, 1.0, rng)
        assert not np.any(np.all(state.genomes == genomes, axis=1))

    def test_replacement_count(self):
        problem, params, rng, state = small_setup(n=500, d=5, seed=22)
        genomes = state.genomes.copy()
        reinitialize_on_change(state, problem, 0.1, 0.2, rng)
        changed = np.any(state.genomes != genomes, axis=1).sum()
        assert changed == 100

    def test_eval_accounting(self):
        problem, params, rng, state = small_setup(n=50, seed=23)
        evals = state.evals
        reinitialize_on_change(state, problem, 0.1, 0.2, rng)
        assert state.evals == evals + 50 + 10

    def test_ideal_rebuilt(self):
        problem, params, rng, state = small_setup(n=30, seed=24)
        reinitialize_on_change(state, problem, 0.3, 0.5, rng)
        assert_allclose(state.ideal, state.objectives.min(axis=0))


class TestDEParams:
    def test_defaults(self):
        p = DEParams()
        assert p.f_scale == 0.5 and p.cr == 1.0 and p.delta == 0.9
        assert p.nr == 2 and p.t_neighbors == 20
        assert p.mutation_probability(30) == pytest.approx(1.0 / 30.0)

    def test_validation(self):
        with pytest.raises(ConfigError):
            DEParams(cr=1.5)
        with pytest.raises(ConfigError):
            DEParams(f_scale=0.0)
        with pytest.raises(ConfigError):
            DEParams(nr=0)

    def test_tiny_population_rejected(self):
        problem = problem_by_name("fda1", dimension=5)
        with pytest.raises(ConfigError):
            init_state(problem, 2, DEParams(t_neighbors=2), np.random.default_rng(0))
