import math

import numpy as np
import pytest

from citefair.errors import StatsError
from citefair.stats import (
    HypergeomParams,
    average_ranks,
    bin_sizes,
    decile_correlations,
    ecdf_by_group,
    hypergeom_cdf,
    hypergeom_ci,
    hypergeom_pmf,
    ks_two_sample,
    pearson,
    spearman,
    top_fraction,
    variance_decomposition,
)

from oracles import (
    exact_equal_tail_ci,
    exact_interval_coverage,
    ks_by_enumeration,
    pearson_by_sums,
    pmf_by_enumeration,
    spearman_by_ranks,
    variance_parts_by_definition,
)


class TestHypergeomPmf:
    def test_matches_subset_enumeration(self):
        # m=1, N=5, K=2, n=2: 6 of the C(5,2)=10 subsets hold one success
        oracle = pmf_by_enumeration(1, 5, 2, 2)
        assert oracle == 0.6
        assert hypergeom_pmf(1, HypergeomParams(5, 2, 2)) == pytest.approx(0.6, abs=1e-12)

    def test_no_successes(self):
        params = HypergeomParams(7, 0, 3)
        assert hypergeom_pmf(0, params) == pytest.approx(1.0, abs=1e-12)
        assert hypergeom_pmf(1, params) == 0.0

    def test_sums_to_one(self):
        for n_pop, k, n in [(10, 4, 3), (50, 20, 10), (500, 137, 61)]:
            params = HypergeomParams(n_pop, k, n)
            total = math.fsum(hypergeom_pmf(m, params) for m in params.support)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_outside_support_is_zero(self):
        params = HypergeomParams(10, 6, 8)
        assert params.support == range(4, 7)
        assert hypergeom_pmf(3, params) == 0.0
        assert hypergeom_pmf(7, params) == 0.0

    def test_symmetry_in_k_and_n(self):
        for m in range(0, 5):
            a = hypergeom_pmf(m, HypergeomParams(20, 7, 4))
            b = hypergeom_pmf(m, HypergeomParams(20, 4, 7))
            assert a == pytest.approx(b, rel=1e-12)

    def test_invalid_params(self):
        with pytest.raises(StatsError):
            HypergeomParams(5, 6, 2)
        with pytest.raises(StatsError):
            HypergeomParams(5, 2, -1)


class TestHypergeomCi:
    def test_degenerate_single_group(self):
        # K = N: every draw is a success, the count is deterministic
        assert hypergeom_ci(HypergeomParams(12, 12, 5), 0.90) == (5, 5)

    def test_matches_exact_enumeration(self):
        cases = [(20, 10, 10), (30, 7, 12), (50, 25, 10), (9, 4, 6)]
        for n_pop, k, n in cases:
            expected = exact_equal_tail_ci(n_pop, k, n, "0.90")
            assert hypergeom_ci(HypergeomParams(n_pop, k, n), 0.90) == expected

    def test_n20_case_from_enumeration(self):
        # frozen from the exact-rational oracle
        assert exact_equal_tail_ci(20, 10, 10, "0.90") == (3, 7)
        assert hypergeom_ci(HypergeomParams(20, 10, 10), 0.90) == (3, 7)

    def test_coverage_at_least_level(self):
        for n_pop, k, n in [(20, 10, 10), (100, 13, 30), (3695, 31, 369)]:
            m_lo, m_hi = hypergeom_ci(HypergeomParams(n_pop, k, n), 0.90)
            assert exact_interval_coverage(n_pop, k, n, m_lo, m_hi) >= 0.90

    def test_monte_carlo_coverage(self):
        # independent sampler: numpy's own hypergeometric generator
        rng = np.random.default_rng(42)
        for n_pop, k, n in [(20, 10, 10), (200, 40, 50)]:
            m_lo, m_hi = hypergeom_ci(HypergeomParams(n_pop, k, n), 0.90)
            draws = rng.hypergeometric(k, n_pop - k, n, size=20000)
            freq = np.mean((draws >= m_lo) & (draws <= m_hi))
            assert freq >= 0.90 - 0.01

    def test_bad_level(self):
        with pytest.raises(StatsError):
            hypergeom_ci(HypergeomParams(10, 5, 5), 1.0)

    def test_cdf_helper(self):
        params = HypergeomParams(20, 10, 10)
        assert hypergeom_cdf(params.support.start - 1, params) == 0.0
        assert hypergeom_cdf(params.support.stop - 1, params) == 1.0


class TestTopFraction:
    def test_floor_rule_large(self):
        values = {f"j{i:04d}": float(i) for i in range(3695)}
        _, n_z = top_fraction(values, 10)
        assert n_z == 369  # floor(369.5)

    def test_small_set(self):
        values = {f"j{i}": float(i) for i in range(10)}
        selected, n_z = top_fraction(values, 10)
        assert n_z == 1
        assert selected == {"j9"}

    def test_threshold_tie_broken_by_id(self):
        # four journals, n_z = 2, tie at the threshold value
        values = {"a": 5.0, "c": 3.0, "b": 3.0, "d": 1.0}
        selected, n_z = top_fraction(values, 50)
        assert n_z == 2
        # exhaustive rule: sort by (value desc, id asc) -> a, b, c, d
        assert selected == {"a", "b"}

    def test_undefined_excluded_from_n(self):
        values = {"a": 3.0, "b": 2.0, "c": 1.0, "d": None, "e": None}
        selected, n_z = top_fraction(values, 34)
        assert n_z == 1  # floor(0.34 * 3)
        assert selected == {"a"}

    def test_zero_selection_is_error(self):
        with pytest.raises(StatsError):
            top_fraction({"a": 1.0, "b": 2.0}, 10)

    def test_bad_z(self):
        with pytest.raises(StatsError):
            top_fraction({"a": 1.0}, 0)
        with pytest.raises(StatsError):
            top_fraction({"a": 1.0}, 101)

    def test_scale_invariance(self):
        rng = np.random.default_rng(7)
        values = {f"j{i}": float(v) for i, v in enumerate(rng.random(40))}
        scaled = {k: 3.7 * v for k, v in values.items()}
        assert top_fraction(values, 25)[0] == top_fraction(scaled, 25)[0]


class TestVarianceDecomposition:
    def test_two_flat_groups(self):
        values = {"a": 1.0, "b": 1.0, "c": 3.0, "d": 3.0}
        partition = {"a": "g1", "b": "g1", "c": "g2", "d": "g2"}
        vd = variance_decomposition(values, partition)
        assert vd.grand_mean == 2.0
        assert vd.ss_between == 4.0
        assert vd.ss_within == 0.0
        assert vd.eta_squared == 1.0

    def test_all_equal(self):
        values = {"a": 2.0, "b": 2.0, "c": 2.0}
        partition = {"a": "g1", "b": "g1", "c": "g2"}
        vd = variance_decomposition(values, partition)
        assert vd.ss_total == vd.ss_between == vd.ss_within == 0.0
        assert vd.eta_squared is None

    def test_matches_definition_oracle(self):
        rng = np.random.default_rng(11)
        groups = {f"g{i}": list(rng.random(rng.integers(2, 8))) for i in range(4)}
        values = {}
        partition = {}
        for g, vs in groups.items():
            for i, v in enumerate(vs):
                values[f"{g}-{i}"] = float(v)
                partition[f"{g}-{i}"] = g
        vd = variance_decomposition(values, partition)
        ss_tot, ss_b, ss_w = variance_parts_by_definition(groups)
        assert vd.ss_total == pytest.approx(ss_tot, rel=1e-12)
        assert vd.ss_between == pytest.approx(ss_b, rel=1e-10)
        assert vd.ss_within == pytest.approx(ss_w, rel=1e-9, abs=1e-12)

    def test_identity_holds(self):
        rng = np.random.default_rng(3)
        values = {f"j{i}": float(v) for i, v in enumerate(rng.random(50) * 10)}
        partition = {f"j{i}": f"g{i % 5}" for i in range(50)}
        vd = variance_decomposition(values, partition)
        assert vd.ss_total == pytest.approx(vd.ss_between + vd.ss_within, rel=1e-9)

    def test_undefined_excluded(self):
        values = {"a": 1.0, "b": None, "c": 3.0}
        partition = {"a": "g1", "b": "g1", "c": "g2"}
        vd = variance_decomposition(values, partition)
        assert vd.group_means == {"g1": 1.0, "g2": 3.0}

    def test_too_few_values(self):
        with pytest.raises(StatsError):
            variance_decomposition({"a": 1.0, "b": None}, {"a": "g", "b": "g"})


class TestPearson:
    def test_perfect_linear(self):
        x = [1.0, 2.0, 3.0, 4.0]
        y = [2 * v + 3 for v in x]
        assert pearson(x, y) == 1.0

    def test_perfect_negative(self):
        x = [1.0, 2.0, 3.0]
        assert pearson(x, [-v for v in x]) == -1.0

    def test_five_point_fixture_matches_oracle(self):
        x = [0.31, 2.7, 1.44, 5.0, 3.9]
        y = [1.2, 0.7, 3.1, 2.2, 0.05]
        assert pearson(x, y) == pytest.approx(pearson_by_sums(x, y), abs=1e-12)

    def test_pairwise_deletion(self):
        x = [1.0, None, 2.0, 3.0]
        y = [1.0, 5.0, 2.0, None]
        assert pearson(x, y) == pytest.approx(pearson_by_sums([1, 2], [1, 2]) or 1.0)

    def test_zero_variance_undefined(self):
        assert pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) is None

    def test_too_few_pairs(self):
        with pytest.raises(StatsError):
            pearson([1.0, None], [2.0, 3.0])
        with pytest.raises(StatsError):
            pearson([1.0, 2.0], [2.0])


class TestSpearman:
    def test_monotone_transform_gives_one(self):
        x = [0.3, 1.7, 2.2, 5.9, 3.1]
        fx = [math.exp(v) for v in x]
        assert spearman(fx, x) == 1.0

    def test_average_rank_rule(self):
        assert average_ranks(np.array([1.0, 2.0, 2.0, 3.0])).tolist() == [1.0, 2.5, 2.5, 4.0]

    def test_tied_fixture_matches_oracle(self):
        x = [1.0, 2.0, 2.0, 3.0, 1.0, 4.0]
        y = [0.5, 0.5, 2.0, 1.5, 3.0, 3.0]
        assert spearman(x, y) == pytest.approx(spearman_by_ranks(x, y), abs=1e-12)

    def test_monotone_invariance_property(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.choice(np.arange(10), size=12).astype(float).tolist()
            y = rng.random(12).tolist()
            fx = [math.exp(0.5 * v) + 1 for v in x]  # strictly increasing in v
            rho1 = spearman(x, y)
            rho2 = spearman(fx, y)
            if rho1 is None:
                assert rho2 is None
            else:
                assert rho2 == pytest.approx(rho1, abs=1e-12)


class TestDecileCorrelations:
    def test_identity(self):
        values = {f"j{i}": float(i) for i in range(40)}
        rhos = decile_correlations(values, values, 10)
        assert rhos == [1.0] * 10

    def test_constant_other(self):
        values = {f"j{i}": float(i) for i in range(40)}
        flat = {k: 2.0 for k in values}
        assert decile_correlations(values, flat, 10) == [None] * 10

    def test_bin_sizes_remainder_to_top(self):
        assert bin_sizes(25, 10) == [3, 3, 3, 3, 3, 2, 2, 2, 2, 2]
        assert bin_sizes(40, 10) == [4] * 10
        assert bin_sizes(11, 2) == [6, 5]

    def test_25_journal_layout(self):
        rng = np.random.default_rng(1)
        baseline = {f"j{i:02d}": float(v) for i, v in enumerate(rng.random(25))}
        other = {k: float(v) for k, v in zip(baseline, rng.random(25))}
        rhos = decile_correlations(baseline, other, 10)
        assert len(rhos) == 10

    def test_support_too_small(self):
        with pytest.raises(StatsError):
            decile_correlations({"a": 1.0, "b": 2.0}, {"a": 1.0, "b": 2.0}, 3)


class TestEcdf:
    def test_simple_steps(self):
        values = {"a": 1.0, "b": 2.0, "c": 3.0}
        partition = {"a": "g", "b": "g", "c": "g"}
        assert ecdf_by_group(values, partition) == {
            "g": [(1.0, 1 / 3), (2.0, 2 / 3), (3.0, 1.0)]
        }

    def test_duplicates_collapse(self):
        values = {"a": 2.0, "b": 2.0}
        assert ecdf_by_group(values, {"a": "g", "b": "g"}) == {"g": [(2.0, 1.0)]}

    def test_last_fraction_exactly_one(self):
        rng = np.random.default_rng(9)
        values = {f"j{i}": float(v) for i, v in enumerate(rng.integers(0, 10, 31))}
        points = ecdf_by_group(values, {k: "g" for k in values})["g"]
        assert points[-1][1] == 1.0
        assert len(points) <= 31

    def test_empty_cluster_is_error(self):
        with pytest.raises(StatsError):
            ecdf_by_group({"a": 1.0, "b": None}, {"a": "g1", "b": "g2"})


class TestKs:
    def test_identical(self):
        assert ks_two_sample([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_disjoint(self):
        assert ks_two_sample([1.0, 2.0], [10.0, 11.0]) == 1.0

    def test_half_overlap(self):
        # derived by enumerating the step differences
        assert ks_by_enumeration([1, 2], [1, 3]) == 0.5
        assert ks_two_sample([1.0, 2.0], [1.0, 3.0]) == 0.5

    def test_matches_enumeration_random(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            a = rng.choice(np.arange(8), size=7).astype(float).tolist()
            b = rng.choice(np.arange(8), size=5).astype(float).tolist()
            assert ks_two_sample(a, b) == pytest.approx(ks_by_enumeration(a, b), abs=1e-12)

    def test_empty_is_error(self):
        with pytest.raises(StatsError):
            ks_two_sample([], [1.0])
