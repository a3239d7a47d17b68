"""Dense-limit kernels: densities, limit functional, factorisations, sampling."""

import json
import math

import numpy as np
import pytest

from tribias.errors import DomainError, GraphInputError
from tribias.graphon import (
    BlockGraphon,
    ConstantGraphon,
    GridGraphon,
    RankOneGraphon,
    TwoBlockGraphon,
    degree_density,
    dense_bias_limit,
    dense_bias_limit_quadrature,
    graphon_from_json,
    graphon_to_json,
    profile_moments,
    rank_one_bias_limit,
    sample_graph,
    triangle_density,
    two_block_factors,
)


class TestValidation:
    def test_values_must_be_probabilities(self):
        with pytest.raises(GraphInputError):
            ConstantGraphon(1.2)
        with pytest.raises(GraphInputError):
            TwoBlockGraphon(0.5, -0.1, 0.5, 0.5)
        with pytest.raises(GraphInputError):
            RankOneGraphon((0.5, 2.0))

    def test_block_sizes_checked(self):
        with pytest.raises(GraphInputError):
            BlockGraphon((0.5, 0.4), ((0.1, 0.2), (0.2, 0.3)))
        with pytest.raises(GraphInputError):
            BlockGraphon((0.5, 0.5), ((0.1, 0.2), (0.3, 0.3)))  # asymmetric

    def test_grid_must_be_square_symmetric(self):
        with pytest.raises(GraphInputError):
            GridGraphon(((0.1, 0.2),))
        with pytest.raises(GraphInputError):
            GridGraphon(((0.1, 0.2), (0.3, 0.4)))

    def test_two_block_split_open_interval(self):
        with pytest.raises(GraphInputError):
            TwoBlockGraphon(0.1, 0.2, 0.3, 1.0)


class TestDensities:
    def test_constant(self):
        k = ConstantGraphon(0.3)
        assert degree_density(k, 0.7) == pytest.approx(0.3, abs=1e-15)
        assert triangle_density(k, 0.7) == pytest.approx(0.3**3 / 2, abs=1e-15)

    def test_two_block_first_block(self):
        alpha, beta, gamma, p = 0.2, 0.6, 0.4, 0.3
        k = TwoBlockGraphon(alpha, beta, gamma, p)
        assert degree_density(k, 0.1) == pytest.approx(alpha * p + gamma * (1 - p), abs=1e-15)
        assert degree_density(k, 0.9) == pytest.approx(gamma * p + beta * (1 - p), abs=1e-15)
        block_expr = alpha**3 * p**2 + 2 * alpha * gamma**2 * p * (1 - p) + beta * gamma**2 * (1 - p) ** 2
        assert triangle_density(k, 0.1) == pytest.approx(block_expr / 2, abs=1e-15)

    def test_rank_one_linear_profile(self):
        k = RankOneGraphon(lambda x: x)
        assert degree_density(k, 0.5) == pytest.approx(0.25, abs=1e-12)
        assert triangle_density(k, 0.5) == pytest.approx(0.5**2 / 18, abs=1e-12)
        assert profile_moments(k) == pytest.approx((1 / 2, 1 / 3, 1 / 4), abs=1e-13)

    def test_gridded_profile_moments_exact(self):
        k = RankOneGraphon((0.2, 0.4, 0.6))
        m1, m2, m3 = profile_moments(k)
        assert m1 == pytest.approx(0.4, abs=1e-15)
        assert m2 == pytest.approx((0.04 + 0.16 + 0.36) / 3, abs=1e-15)
        assert m3 == pytest.approx((0.008 + 0.064 + 0.216) / 3, abs=1e-15)


class TestLimitFunctional:
    def test_constant_is_zero(self):
        assert dense_bias_limit(ConstantGraphon(0.3)) == pytest.approx(0.0, abs=1e-14)
        assert dense_bias_limit_quadrature(ConstantGraphon(0.3), 64) == pytest.approx(0.0, abs=1e-14)

    def test_two_block_matches_factorisation(self):
        k = TwoBlockGraphon(0.1, 0.3, 0.8, 0.4)
        f = two_block_factors(0.1, 0.3, 0.8, 0.4)
        assert f.degree_gap == pytest.approx(-0.02, abs=1e-12)
        assert f.product == pytest.approx(-1.7900307692307692e-4, rel=1e-10)
        assert dense_bias_limit(k) == pytest.approx(f.product, abs=1e-15)

    def test_quadrature_agrees_on_random_tuples(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            a, b, g = rng.random(3)
            p = float(0.05 + 0.9 * rng.random())
            fac = two_block_factors(a, b, g, p)
            quad = dense_bias_limit_quadrature(TwoBlockGraphon(a, b, g, p), 256)
            assert abs(fac.product - quad) < 1e-8

    def test_rank_one_linear_profile(self):
        assert rank_one_bias_limit((0.5, 1 / 3, 0.25)) == pytest.approx(1 / 54, rel=1e-12)
        assert dense_bias_limit(RankOneGraphon(lambda x: x)) == pytest.approx(1 / 54, rel=1e-9)

    def test_rank_one_constant_profile_zero(self):
        assert rank_one_bias_limit((0.4, 0.16, 0.064)) == pytest.approx(0.0, abs=1e-15)

    def test_rank_one_nonnegative_on_step_profiles(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            cells = int(rng.integers(1, 9))
            profile = tuple(float(v) for v in rng.uniform(0.05, 1.0, cells))
            k = RankOneGraphon(profile)
            assert dense_bias_limit(k) >= -1e-14
            assert rank_one_bias_limit(profile_moments(k)) >= -1e-14

    def test_gridded_rank_one_block_path_matches_moment_formula(self):
        profile = (0.2, 0.9, 0.5, 0.7)
        k = RankOneGraphon(profile)
        assert dense_bias_limit(k) == pytest.approx(
            rank_one_bias_limit(profile_moments(k)), rel=1e-12
        )

    def test_block_and_grid_paths_match_quadrature(self):
        k = BlockGraphon((0.25, 0.35, 0.4), ((0.9, 0.2, 0.4), (0.2, 0.5, 0.3), (0.4, 0.3, 0.7)))
        assert dense_bias_limit(k) == pytest.approx(dense_bias_limit_quadrature(k, 128), abs=1e-12)
        grid = GridGraphon(((0.9, 0.2), (0.2, 0.5)))
        assert dense_bias_limit(grid) == pytest.approx(dense_bias_limit_quadrature(grid, 64), abs=1e-12)

    def test_vanishing_degree_density_rejected(self):
        with pytest.raises(DomainError):
            dense_bias_limit(BlockGraphon((0.5, 0.5), ((0.4, 0.0), (0.0, 0.0))))

    def test_quadrature_refinement_converges(self):
        k = RankOneGraphon(lambda x: 0.2 + 0.6 * x * x)
        coarse = dense_bias_limit_quadrature(k, 64, refine=True)
        assert coarse == pytest.approx(dense_bias_limit(k), abs=1e-7)


class TestTwoBlockFactors:
    def test_half_split_closed_form_nonnegative(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            a, b, g = (float(v) for v in rng.random(3))
            f = two_block_factors(a, b, g, 0.5)
            closed = (a - b) ** 2 / (8 * (a + g) * (b + g)) * (g**3 + g * (a * a + a * b + b * b))
            assert f.product == pytest.approx(closed, abs=1e-13)
            assert f.product >= -1e-15

    def test_ordered_blocks_positive_any_split(self):
        for p in (0.1, 0.33, 0.5, 0.77, 0.9):
            assert two_block_factors(0.1, 0.7, 0.4, p).product > 0
            assert two_block_factors(0.7, 0.1, 0.4, p).product > 0

    def test_negative_window(self):
        f = two_block_factors(0.0, 0.25, 0.5, 10 / 33)
        assert f.product < 0
        # the window in the split parameter: (gamma^2-beta^2)/2gamma^2 < p/(1-p) < (gamma-beta)/gamma
        beta, gamma = 0.25, 0.5
        lo = (gamma**2 - beta**2) / (2 * gamma**2)
        hi = (gamma - beta) / gamma
        for ratio in (lo + 0.02, (lo + hi) / 2, hi - 0.02):
            p = ratio / (1 + ratio)
            assert two_block_factors(0.0, beta, gamma, p).product < 0

    def test_prefactor_nonnegative(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            a, b, g = (float(v) for v in rng.uniform(0.05, 1.0, 3))
            p = float(0.05 + 0.9 * rng.random())
            assert two_block_factors(a, b, g, p).prefactor >= 0

    def test_degenerate_denominator_rejected(self):
        with pytest.raises(DomainError):
            two_block_factors(0.5, 0.0, 0.0, 0.5)

    def test_all_zero_rejected(self):
        with pytest.raises(GraphInputError):
            two_block_factors(0.0, 0.0, 0.0, 0.5)


class TestSampling:
    def test_full_kernel_gives_clique(self):
        g = sample_graph(7, ConstantGraphon(1.0), 0)
        assert g.edge_count() == 21

    def test_edge_density_statistics(self):
        n, p = 500, 0.2
        g = sample_graph(n, ConstantGraphon(p), 1)
        m = n * (n - 1) // 2
        assert abs(g.edge_count() - m * p) < 4 * math.sqrt(m * p * (1 - p))

    def test_two_block_cross_density(self):
        n = 400
        k = TwoBlockGraphon(0.0, 0.0, 0.6, 0.5)
        g = sample_graph(n, k, 2)
        cross = sum(1 for u, v, _ in g.edges() if (u < n // 2) != (v < n // 2))
        assert cross == g.edge_count()
        expect = 0.6 * (n // 2) ** 2
        assert abs(cross - expect) < 4 * math.sqrt(expect)

    def test_rank_one_matches_product_probabilities(self):
        n = 600
        k = RankOneGraphon((0.9, 0.2))
        g = sample_graph(n, k, 3)
        half = n // 2
        dense_block = sum(1 for u, v, _ in g.edges() if u < half and v < half)
        expect = 0.81 * half * (half - 1) / 2
        assert abs(dense_block - expect) < 4 * math.sqrt(expect)

    def test_deterministic(self):
        k = TwoBlockGraphon(0.2, 0.5, 0.3, 0.4)
        assert sample_graph(50, k, 11) == sample_graph(50, k, 11)


class TestJson:
    @pytest.mark.parametrize(
        "kernel",
        [
            ConstantGraphon(0.4),
            TwoBlockGraphon(0.1, 0.3, 0.8, 0.4),
            RankOneGraphon((0.2, 0.7)),
            BlockGraphon((0.3, 0.7), ((0.5, 0.2), (0.2, 0.9))),
            GridGraphon(((0.5, 0.2), (0.2, 0.9))),
        ],
    )
    def test_round_trip(self, kernel):
        again = graphon_from_json(graphon_to_json(kernel))
        assert type(again) is type(kernel)
        xs = np.linspace(0.01, 0.99, 13)
        assert np.allclose(again.matrix_at(xs), kernel.matrix_at(xs))

    def test_json_text_accepted(self):
        k = graphon_from_json(json.dumps({"kind": "constant", "p": 0.25}))
        assert isinstance(k, ConstantGraphon)

    def test_errors(self):
        with pytest.raises(GraphInputError):
            graphon_from_json({"kind": "mystery"})
        with pytest.raises(GraphInputError):
            graphon_from_json({"kind": "two_block", "alpha": 0.1})
        with pytest.raises(GraphInputError):
            graphon_from_json("{not json")


class TestSampledScalingLimit:
    def test_positive_regime_sign_at_n400(self):
        from tribias.mc import ExperimentConfig, GraphonModel, run_mc

        cfg = ExperimentConfig(
            GraphonModel(400, TwoBlockGraphon(0.1, 0.7, 0.4, 0.5)),
            statistic="scaled_tfb",
            power=2,
            trials=60,
            master_seed=2024,
            workers=2,
        )
        est = run_mc(cfg)
        assert est.mean - 4 * est.stderr > 0
        assert est.mean == pytest.approx(
            two_block_factors(0.1, 0.7, 0.4, 0.5).product / 2, rel=0.25
        )

    def test_negative_regime_sign_emerges_at_n1600(self):
        # the negative limit is half the factor product (-8.95e-5); the
        # finite-size correction is about +0.083/n, so the sign flips
        # only around a thousand vertices
        from tribias.mc import ExperimentConfig, GraphonModel, run_mc

        cfg = ExperimentConfig(
            GraphonModel(1600, TwoBlockGraphon(0.1, 0.3, 0.8, 0.4)),
            statistic="scaled_tfb",
            power=2,
            trials=24,
            master_seed=99,
            workers=2,
        )
        est = run_mc(cfg)
        assert est.mean + 4 * est.stderr < 0
