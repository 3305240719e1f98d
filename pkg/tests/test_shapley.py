"""Attribution games: exact enumeration, Monte-Carlo estimators, memoization."""

import itertools

import numpy as np
import pytest

from eac.bundle import softmax
from eac.coalition import Coalition
from eac.concepts import complete_with_background
from eac.errors import (
    CoalitionSizeMismatch,
    ConceptAlreadyInCoalition,
    TooManyConcepts,
)
from eac.shapley import (
    DirectUtility,
    SurrogateUtility,
    TableGame,
    exact_shapley,
    marginal_contribution,
    mc_shapley,
)
from eac.surrogate import Surrogate
from eac.synth import random_game_table, three_rects


def reference_values(game, n):
    """Average marginal contribution over all n! orderings, written literally."""
    totals = np.zeros(n)
    count = 0
    for order in itertools.permutations(range(n)):
        bits = 0
        for j in order:
            before = game(Coalition(bits, n))
            bits |= 1 << j
            totals[j] += game(Coalition(bits, n)) - before
        count += 1
    return totals / count


def linear_surrogate(n, num_classes, seed):
    rng = np.random.default_rng(seed)
    return Surrogate(
        mode="linear",
        h_params={"w": rng.normal(size=(n, num_classes)), "b": rng.normal(size=num_classes)},
        fc_weight=None,
        fc_bias=None,
        n=n,
        m=num_classes,
        num_classes=num_classes,
    )


class TestTableGame:
    def test_wrong_table_length_rejected(self):
        with pytest.raises(ValueError):
            TableGame(np.zeros(7), 3)

    def test_wrong_coalition_width_rejected(self):
        game = TableGame(np.arange(8.0), 3)
        with pytest.raises(CoalitionSizeMismatch):
            game(Coalition.empty(4))

    def test_lookup(self):
        game = TableGame(np.arange(8.0), 3)
        assert game(Coalition(5, 3)) == 5.0


class TestMarginalContribution:
    def test_value(self):
        game = TableGame(np.array([0.0, 0.6, 0.2, 1.0]), 2)
        assert marginal_contribution(game, Coalition.empty(2), 0) == pytest.approx(0.6)
        assert marginal_contribution(game, Coalition(2, 2), 0) == pytest.approx(0.8)

    def test_member_rejected(self):
        game = TableGame(np.zeros(4), 2)
        with pytest.raises(ConceptAlreadyInCoalition):
            marginal_contribution(game, Coalition(1, 2), 0)


class TestExactShapley:
    def test_two_player_hand_values(self):
        # phi_1 = (0.6 + 0.8) / 2 and phi_2 = (0.2 + 0.4) / 2, both computed
        # with the same additions the implementation performs
        game = TableGame(np.array([0.0, 0.6, 0.2, 1.0]), 2)
        res = exact_shapley(game, 2)
        np.testing.assert_allclose(res.values, [0.7, 0.1 + 0.2], atol=1e-15)
        assert res.method == "exact"
        assert res.utility_kind == "table"
        assert res.stderr is None

    @pytest.mark.parametrize("n,seed", [(3, 0), (4, 1), (5, 2)])
    def test_matches_permutation_enumeration(self, n, seed):
        game = TableGame(random_game_table(n, seed), n)
        res = exact_shapley(game, n)
        np.testing.assert_allclose(res.values, reference_values(game, n), atol=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_efficiency(self, seed):
        n = 7
        game = TableGame(random_game_table(n, seed), n)
        res = exact_shapley(game, n)
        gap = res.values.sum() - (game(Coalition.full(n)) - game(Coalition.empty(n)))
        assert abs(gap) < 1e-10

    def test_dummy_player_gets_its_constant(self):
        n, c = 5, 0.375
        base = random_game_table(n, 9)
        table = base.copy()
        for bits in range(1 << n):
            if bits & 1:
                table[bits] = base[bits & ~1] + c
        res = exact_shapley(TableGame(table, n), n)
        assert res.values[0] == pytest.approx(c, abs=1e-12)

    def test_symmetric_players_get_equal_values(self):
        n = 5
        rng = np.random.default_rng(11)
        lookup = rng.normal(size=(1 << (n - 2), 3))
        table = np.empty(1 << n)
        for bits in range(1 << n):
            rest = (bits >> 2) & ((1 << (n - 2)) - 1)
            pair = (bits & 1) + ((bits >> 1) & 1)
            table[bits] = lookup[rest, pair]
        res = exact_shapley(TableGame(table, n), n)
        assert res.values[0] == pytest.approx(res.values[1], abs=1e-12)

    def test_linearity(self):
        n = 6
        t1, t2 = random_game_table(n, 20), random_game_table(n, 21)
        v1 = exact_shapley(TableGame(t1, n), n).values
        v2 = exact_shapley(TableGame(t2, n), n).values
        v_sum = exact_shapley(TableGame(t1 + t2, n), n).values
        np.testing.assert_allclose(v_sum, v1 + v2, atol=1e-12)

    def test_zero_concepts(self):
        res = exact_shapley(TableGame(np.array([3.0]), 0), 0)
        assert res.values.shape == (0,)

    def test_table_limit(self):
        n = 21
        with pytest.raises(TooManyConcepts):
            exact_shapley(TableGame(np.zeros(1 << n), n), n)

    def test_direct_limit_is_lower(self, toy_bundle, fill):
        image, cs3 = three_rects()
        u = DirectUtility(toy_bundle, image, complete_with_background(cs3), fill, 0)
        with pytest.raises(TooManyConcepts):
            exact_shapley(u, 13)
        assert u.model_calls == 0

    def test_direct_game_enumerates_each_coalition_once(self, toy_bundle, fill):
        image, cs3 = three_rects()
        cs = complete_with_background(cs3)
        u = DirectUtility(toy_bundle, image, cs, fill, 0)
        res = exact_shapley(u, cs.n)
        assert u.model_calls == 1 << cs.n
        assert u.distinct_coalitions == 1 << cs.n
        assert res.utility_kind == "direct"
        gap = res.values.sum() - (u(Coalition.full(cs.n)) - u(Coalition.empty(cs.n)))
        assert abs(gap) < 1e-10
        assert u.model_calls == 1 << cs.n  # the two lookups above hit the memo


class TestDirectUtility:
    def test_memoizes_on_bitmask(self, toy_bundle, fill):
        image, cs3 = three_rects()
        cs = complete_with_background(cs3)
        u = DirectUtility(toy_bundle, image, cs, fill, 2)
        a = u(Coalition(5, cs.n))
        b = u(Coalition(5, cs.n))
        assert a == b
        assert u.model_calls == 1
        assert 0.0 <= a <= 1.0


class TestSurrogateUtility:
    def test_matches_manual_softmax(self):
        surr = linear_surrogate(4, 3, seed=0)
        u = SurrogateUtility(surr, target_class=1)
        x = Coalition(9, 4).indicator()
        expected = softmax(x @ surr.h_params["w"] + surr.h_params["b"])[1]
        assert u(Coalition(9, 4)) == pytest.approx(expected, abs=1e-12)

    def test_batch_memoization_counts_distinct(self):
        surr = linear_surrogate(4, 3, seed=1)
        u = SurrogateUtility(surr, target_class=0)
        vals = u.evaluate_bits([3, 7, 3, 0, 7])
        assert u.evaluations == 3
        assert sorted(u.seen_bits) == [0, 3, 7]
        assert vals[0] == vals[2] and vals[1] == vals[4]
        u.evaluate_bits([3, 0])
        assert u.evaluations == 3


class TestMcShapley:
    def test_bad_arguments(self):
        game = TableGame(np.zeros(4), 2)
        with pytest.raises(ValueError):
            mc_shapley(game, 2, sampler="antithetic")
        with pytest.raises(ValueError):
            mc_shapley(game, 2, num_samples=1)

    def test_deterministic_for_seed(self):
        game = TableGame(random_game_table(6, 30), 6)
        a = mc_shapley(game, 6, num_samples=100, seed=7)
        b = mc_shapley(game, 6, num_samples=100, seed=7)
        np.testing.assert_array_equal(a.values, b.values)
        np.testing.assert_array_equal(a.stderr, b.stderr)
        c = mc_shapley(game, 6, num_samples=100, seed=8)
        assert not np.array_equal(a.values, c.values)

    def test_result_metadata(self):
        game = TableGame(random_game_table(3, 31), 3)
        res = mc_shapley(game, 3, num_samples=50, seed=0, sampler="permutation")
        assert res.method == "mc"
        assert res.sampler == "permutation"
        assert res.num_samples == 50
        assert res.values.shape == res.stderr.shape == (3,)

    @pytest.mark.parametrize("sampler", ["size_uniform", "permutation"])
    def test_close_to_exact_within_error_bars(self, sampler):
        n = 6
        game = TableGame(random_game_table(n, 32), n)
        truth = exact_shapley(game, n).values
        res = mc_shapley(game, n, num_samples=2000, seed=12, sampler=sampler)
        assert np.all(np.abs(res.values - truth) <= 4.0 * res.stderr + 1e-12)

    def test_stderr_shrinks_with_sample_count(self):
        game = TableGame(random_game_table(6, 33), 6)
        small = mc_shapley(game, 6, num_samples=200, seed=5)
        large = mc_shapley(game, 6, num_samples=3200, seed=5)
        assert large.stderr.mean() < small.stderr.mean()

    def test_two_player_estimates_land_on_support(self):
        # with n=2 each sampled delta is one of two marginals, so estimates
        # stay inside the marginal range
        game = TableGame(np.array([0.0, 0.6, 0.2, 1.0]), 2)
        res = mc_shapley(game, 2, num_samples=400, seed=3)
        assert 0.6 <= res.values[0] <= 0.8
        assert 0.2 <= res.values[1] <= 0.4

    def test_permutation_sampler_efficiency_on_direct_game(self, toy_bundle, fill):
        image, cs3 = three_rects()
        cs = complete_with_background(cs3)
        u = DirectUtility(toy_bundle, image, cs, fill, 0)
        num = 30
        mc_shapley(u, cs.n, num_samples=num, seed=2, sampler="permutation")
        assert u.model_calls == u.distinct_coalitions <= 1 << cs.n

    def test_zero_concepts(self):
        res = mc_shapley(TableGame(np.array([1.0]), 0), 0, num_samples=10, seed=0)
        assert res.values.shape == res.stderr.shape == (0,)
