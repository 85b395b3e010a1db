import math
from fractions import Fraction

import pytest

from loopcurrents.errors import LoopCurrentsError
from loopcurrents.graphs import Graph, generalized_theta
from loopcurrents.measures import (
    CurrentParams,
    bernoulli,
    double_current,
    loop_o1,
    push_uniform_even,
)
from loopcurrents.sampler import (
    SamplerConfig,
    chi_square_statistic,
    empirical_counts,
    loop_chain,
    loop_chain_transition_matrix,
    make_rng,
    sample_coupled,
    sample_loop_mcmc,
    sample_stream,
    write_sample_dump,
)

F = Fraction
THETA111 = generalized_theta([1, 1, 1])
TREE = Graph(3, ((0, 1), (1, 2)))


def chi2_critical(dof: int, alpha: float) -> float:
    scipy_stats = pytest.importorskip("scipy.stats")
    return float(scipy_stats.chi2.isf(alpha, dof))


class TestReproducibility:
    def test_same_seed_same_stream(self):
        cfg = SamplerConfig(seed=42, sweeps=50, burn_in=20)
        a = list(loop_chain(THETA111, F(1, 2), cfg, samples=200))
        b = list(loop_chain(THETA111, F(1, 2), cfg, samples=200))
        assert a == b

    def test_different_workers_differ(self):
        r0 = make_rng(7, worker=0)
        r1 = make_rng(7, worker=1)
        assert [r0.integers(0, 100) for _ in range(5)] != [
            r1.integers(0, 100) for _ in range(5)
        ]

    def test_coupled_stream_reproducible(self):
        cfg = SamplerConfig(seed=5, sweeps=0)
        a = sample_stream("double_current", THETA111, F(1, 2), cfg, 50)
        b = sample_stream("double_current", THETA111, F(1, 2), cfg, 50)
        assert a == b

    def test_config_validation(self):
        with pytest.raises(LoopCurrentsError):
            SamplerConfig(seed=1, sweeps=-1)


class TestChainExactness:
    def test_transition_matrix_detailed_balance(self):
        x = F(1, 2)
        states, T = loop_chain_transition_matrix(THETA111, x)
        pi = [x ** s.bit_count() for s in states]
        size = len(states)
        for i in range(size):
            assert sum(T[i]) == 1
            for j in range(size):
                assert pi[i] * T[i][j] == pi[j] * T[j][i]

    def test_transition_matrix_stationarity(self):
        x = F(2, 5)
        states, T = loop_chain_transition_matrix(THETA111, x)
        pi = [x ** s.bit_count() for s in states]
        z = sum(pi)
        for j in range(len(states)):
            assert sum(pi[i] * T[i][j] for i in range(len(states))) == pi[j]
        assert z == loop_o1(THETA111, x).z

    def test_tree_chain_is_stuck_at_empty(self):
        cfg = SamplerConfig(seed=3, sweeps=25)
        assert sample_loop_mcmc(TREE, F(1, 2), cfg) == 0

    def test_chain_state_always_even(self):
        cfg = SamplerConfig(seed=11, sweeps=0, burn_in=5)
        g = generalized_theta([2, 3, 2])
        from oracles import degrees

        for state in loop_chain(g, F(2, 3), cfg, samples=100):
            assert all(d % 2 == 0 for d in degrees(g, state))

    def test_chain_matches_exact_law(self):
        cfg = SamplerConfig(seed=2024, sweeps=0, burn_in=50)
        samples = list(loop_chain(THETA111, F(1, 2), cfg, samples=20000, thin=3))
        counts = empirical_counts(samples)
        exact = loop_o1(THETA111, F(1, 2))
        # mean occupancy of the empty state within 3 sigma of 4/7
        n = len(samples)
        p = 4 / 7
        observed = counts.get(0, 0) / n
        sigma = math.sqrt(p * (1 - p) / n)
        assert abs(observed - p) < 3 * sigma
        stat, dof = chi_square_statistic(counts, exact)
        assert stat < chi2_critical(dof, 0.001)


class TestCoupledSamplers:
    ALPHA = 0.001
    N = 20000

    def _gof(self, model, graph, x, exact, params=None, seed=1):
        cfg = SamplerConfig(seed=seed, sweeps=0)
        samples = sample_stream(model, graph, x, cfg, self.N, params)
        stat, dof = chi_square_statistic(empirical_counts(samples), exact)
        assert stat < chi2_critical(dof, self.ALPHA), (model, stat, dof)

    def test_random_cluster_on_tree_is_bernoulli(self):
        self._gof("random_cluster", TREE, F(1, 2), bernoulli(TREE, F(1, 2)))

    def test_double_current_on_tree_is_bernoulli_x_squared(self):
        self._gof("double_current", TREE, F(1, 2), bernoulli(TREE, F(1, 4)))

    def test_double_current_on_theta(self):
        self._gof("double_current", THETA111, F(1, 2), double_current(THETA111, F(1, 2)))

    def test_uniform_even_pushforward_matches_loop_model(self):
        self._gof(
            "uniform_even_of_double_current",
            THETA111,
            F(1, 2),
            loop_o1(THETA111, F(1, 2)),
        )

    def test_pushforward_agrees_with_exact_pushforward(self):
        exact = push_uniform_even(double_current(THETA111, F(1, 2)))
        self._gof("uniform_even_of_double_current", THETA111, F(1, 2), exact)

    def test_single_current_needs_pythagorean_params(self):
        rng = make_rng(1)
        with pytest.raises(LoopCurrentsError):
            sample_coupled("single_current", THETA111, F(1, 2), rng)

    def test_single_current_sampling(self):
        params = CurrentParams.from_t(F(1, 2))
        from loopcurrents.measures import single_current

        self._gof(
            "single_current",
            THETA111,
            params.x,
            single_current(THETA111, params),
            params=params,
        )

    def test_unknown_model_rejected(self):
        rng = make_rng(1)
        with pytest.raises(LoopCurrentsError):
            sample_coupled("wolff", THETA111, F(1, 2), rng)

    def test_off_support_sample_is_an_error(self):
        exact = loop_o1(THETA111, F(1, 2))
        with pytest.raises(LoopCurrentsError):
            chi_square_statistic({0b001: 5}, exact)


class TestDumps:
    def test_dump_format(self, tmp_path):
        cfg = SamplerConfig(seed=9, sweeps=0)
        masks = sample_stream("random_cluster", THETA111, F(1, 2), cfg, 25)
        path = tmp_path / "dump.txt"
        write_sample_dump(path, "random_cluster", THETA111, F(1, 2), cfg, masks)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# model=random_cluster rng=philox")
        assert "seed=9" in lines[0]
        parsed = [int(s, 16) for s in lines[2:]]
        assert parsed == masks
