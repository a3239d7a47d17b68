"""Sparse random-graph samplers, exact expectations, oracles, limits."""

import math
from fractions import Fraction

import numpy as np
import pytest

from tribias.errors import DomainError, GraphInputError
from tribias.graphs import count_triangles
from tribias.sparse import (
    DegreeSequence,
    cm_triangle_free_limit,
    configuration_model_mean_bias,
    configuration_model_mean_bias_enumerated,
    er_triangle_free_limit,
    erdos_renyi_mean_bias,
    erdos_renyi_mean_bias_enumerated,
    sample_configuration_model,
    sample_erdos_renyi,
    zeta_cm,
    zeta_er,
)


class TestErdosRenyiSampler:
    def test_full_probability_gives_clique(self):
        g = sample_erdos_renyi(6, 1.0, 0)
        assert g.edge_count() == 15

    def test_zero_probability_gives_empty_graph(self):
        assert sample_erdos_renyi(6, 0.0, 0).edge_count() == 0

    def test_edge_count_statistics(self):
        n, p = 1000, 2 / 1000
        m = n * (n - 1) // 2
        counts = [sample_erdos_renyi(n, p, seed).edge_count() for seed in range(30)]
        sigma = math.sqrt(m * p * (1 - p))
        assert abs(np.mean(counts) - m * p) < 4 * sigma / math.sqrt(len(counts))

    def test_simple_graph(self):
        g = sample_erdos_renyi(40, 0.3, 5)
        for i in range(40):
            assert g.multiplicity(i, i) == 0
            assert all(m == 1 for _, m in g.neighbors(i))

    def test_deterministic_given_seed(self):
        assert sample_erdos_renyi(25, 0.2, 9) == sample_erdos_renyi(25, 0.2, 9)

    def test_sparse_and_dense_paths_agree_in_distribution(self):
        # large-n sparse path: degrees should match binomial moments
        g = sample_erdos_renyi(2000, 1.5 / 2000, 3)
        assert g.n == 2000
        mean_deg = sum(g.degrees()) / 2000
        assert abs(mean_deg - 1.5) < 0.2

    def test_rejects_bad_probability(self):
        with pytest.raises(DomainError):
            sample_erdos_renyi(5, 1.2, 0)


class TestErdosRenyiMean:
    def test_small_sizes_need_three_vertices(self):
        with pytest.raises(DomainError):
            erdos_renyi_mean_bias(2, 0.5)

    def test_three_vertices_exactly_zero(self):
        for p in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
            assert erdos_renyi_mean_bias(3, p) == 0

    def test_complete_graph_exactly_zero(self):
        for n in (3, 5, 9):
            assert erdos_renyi_mean_bias(n, Fraction(1)) == 0
            assert erdos_renyi_mean_bias(n, 1.0) == 0.0

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("p", [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)])
    def test_formula_equals_enumeration(self, n, p):
        assert erdos_renyi_mean_bias(n, p) == erdos_renyi_mean_bias_enumerated(n, p)

    def test_float_path_tracks_exact_path(self):
        for n in (4, 7, 30):
            for p in (Fraction(1, 3), Fraction(1, 10)):
                a = float(erdos_renyi_mean_bias(n, p))
                b = erdos_renyi_mean_bias(n, float(p))
                assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    def test_enumeration_bounds(self):
        with pytest.raises(DomainError):
            erdos_renyi_mean_bias_enumerated(6, 0.5)

    def test_dense_endpoint_trend(self):
        p = 0.3
        target = p * p * (1 - p)
        gaps = [abs(erdos_renyi_mean_bias(n, p) / n - target) for n in (100, 1000, 10000)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-4


class TestZetaEr:
    def test_value_at_one(self):
        assert zeta_er(1.0) == pytest.approx(math.exp(-1) / 2, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            zeta_er(0.0)

    def test_small_argument_behaviour(self):
        # quartic at the origin with coefficient 1/3
        for lam in (1e-3, 1e-2, 0.05):
            assert zeta_er(lam) / (lam**4 / 3) == pytest.approx(1.0, abs=0.05)

    def test_series_meets_closed_form(self):
        for lam in (0.42, 0.4999, 0.5, 0.51, 0.7):
            closed = lam * lam - lam + (lam - 0.5 * lam**3) * math.exp(-lam)
            assert zeta_er(lam) == pytest.approx(closed, rel=1e-10)

    def test_strictly_increasing(self):
        grid = np.geomspace(1e-3, 1e3, 200)
        values = [zeta_er(float(l)) for l in grid]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_large_argument_quadratic(self):
        assert zeta_er(1e3) == pytest.approx(1e6 - 1e3, rel=1e-9)

    def test_scaled_mean_convergence(self):
        for lam in (1.0, 4.0):
            z = zeta_er(lam)
            gaps = [abs(n * erdos_renyi_mean_bias(n, lam / n) - z) for n in (100, 1000, 10000)]
            assert gaps[0] > gaps[1] > gaps[2]


class TestConfigurationSampler:
    def test_single_edge(self):
        g = sample_configuration_model(DegreeSequence((1, 1)), 0)
        assert list(g.edges()) == [(0, 1, 1)]

    def test_forced_self_loop(self):
        g = sample_configuration_model(DegreeSequence((2,)), 0)
        assert g.multiplicity(0, 0) == 2
        assert g.degree(0) == 2

    def test_degrees_always_preserved(self):
        ds = DegreeSequence((1, 3, 1, 3, 2, 4))
        for seed in range(25):
            g = sample_configuration_model(ds, seed)
            assert g.degrees() == ds.degrees

    def test_odd_total_rejected(self):
        with pytest.raises(GraphInputError):
            sample_configuration_model(DegreeSequence((1, 1, 1)), 0)

    def test_degree_sequence_validation(self):
        with pytest.raises(GraphInputError):
            DegreeSequence((0, 2))
        with pytest.raises(GraphInputError):
            DegreeSequence(())

    def test_parse_distribution(self):
        assert DegreeSequence.parse_distribution("regular:3", 4).degrees == (3, 3, 3, 3)
        two = DegreeSequence.parse_distribution("two-point:1,3,0.5", 4)
        assert sorted(two.degrees) == [1, 1, 3, 3]
        with pytest.raises(GraphInputError):
            DegreeSequence.parse_distribution("zipf:2", 4)

    def test_from_text(self):
        ds = DegreeSequence.from_text("3\n# comment\n2\n1\n")
        assert ds.degrees == (3, 2, 1)


class TestConfigurationMean:
    def test_formula_equals_matching_oracle(self):
        for degs in [(3, 3, 2, 1, 1), (2, 2, 2, 2, 2), (4, 3, 2, 1, 1, 1), (4, 4, 2, 2)]:
            ds = DegreeSequence(degs)
            assert configuration_model_mean_bias(ds) == configuration_model_mean_bias_enumerated(ds)

    def test_named_value(self):
        assert configuration_model_mean_bias(DegreeSequence((3, 3, 2, 1, 1))) == Fraction(64, 1575)

    def test_low_total_degree_rejected(self):
        with pytest.raises(DomainError):
            configuration_model_mean_bias(DegreeSequence((2, 2, 2)))

    def test_oracle_bounds(self):
        with pytest.raises(DomainError):
            configuration_model_mean_bias_enumerated(DegreeSequence((7, 7)))

    def test_regular_sequences_are_exactly_zero(self):
        for n, d in [(5, 2), (6, 3), (12, 2), (10, 4)]:
            assert configuration_model_mean_bias(DegreeSequence.regular(n, d)) == 0

    def test_matching_oracle_vs_monte_carlo(self):
        ds = DegreeSequence((3, 3, 2, 1, 1))
        exact = float(configuration_model_mean_bias_enumerated(ds))
        from tribias.mc import ConfigurationModel, ExperimentConfig, run_mc

        est = run_mc(ExperimentConfig(ConfigurationModel(ds.degrees), trials=20000, master_seed=17))
        assert abs(est.mean - exact) < 4 * est.stderr

    def test_dense_endpoint_scaling(self):
        # degrees n/4 and n/2 half-and-half: limit (c2*)^2 (c3* - c1* c2*) / 2 (c1*)^4
        def seq(n):
            return DegreeSequence((n // 4,) * (n // 2) + (n // 2,) * (n // 2))

        c1, c2, c3 = Fraction(3, 8), Fraction(5, 32), Fraction(9, 128)
        limit = c2**2 * (c3 - c1 * c2) / (2 * c1**4)
        gaps = [
            abs(configuration_model_mean_bias(seq(n)) / n**2 - limit)
            for n in (32, 64, 128, 256)
        ]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        # O(1/n) approach: about five percent relative at n = 256
        assert float(gaps[-1]) < 0.06 * float(limit)


class TestZetaCm:
    def test_regular_moments_are_zero(self):
        for d in (1, 2, 3, 7):
            assert zeta_cm(d, d * d, d**3) == 0

    def test_worked_value(self):
        assert zeta_cm(2, 6, 22) == 2

    def test_domain(self):
        with pytest.raises(DomainError):
            zeta_cm(0, 1, 1)

    def test_nonnegative_on_random_degree_distributions(self):
        rng = np.random.default_rng(8)
        for _ in range(500):
            weights = rng.dirichlet(np.ones(8))
            support = np.arange(1, 9)
            c1 = float(weights @ support)
            c2 = float(weights @ support**2)
            c3 = float(weights @ support**3)
            value = zeta_cm(c1, c2, c3)
            assert value >= -1e-15
            if c2 - c1 * c1 > 1e-6:
                assert value > 0

    def test_regular_cm_scaled_mean_trend(self):
        # fixed degree, growing size: n E stays at zero
        for n in (10, 20, 40):
            assert n * configuration_model_mean_bias(DegreeSequence.regular(n, 3)) == 0


class TestTriangleFreeLimits:
    def test_er_value(self):
        assert er_triangle_free_limit(1.0) == pytest.approx(math.exp(-1 / 6), rel=1e-12)

    def test_cm_degenerate_is_one(self):
        assert cm_triangle_free_limit(1.0, 1.0) == 1.0

    def test_cm_regular_rate(self):
        d = 4
        assert cm_triangle_free_limit(d, d * d) == pytest.approx(
            math.exp(-((d - 1) ** 3) / 6), rel=1e-12
        )

    def test_empirical_triangle_count_poisson_mean(self):
        # the sparse sampler's expected triangle count approaches lam^3/6
        lam, n, trials = 1.5, 400, 400
        counts = [
            count_triangles(sample_erdos_renyi(n, lam / n, seed)) for seed in range(trials)
        ]
        target = math.comb(n, 3) * (lam / n) ** 3
        assert abs(np.mean(counts) - target) < 4 * np.std(counts) / math.sqrt(trials)
