import numpy as np
import pytest

from svakadd import coalitions as co
from svakadd import exact, games

from oracles import interaction_bruteforce, shapley_bruteforce, shapley_by_permutations


def test_additive_shapley_is_weights():
    weights = [1.0, 2.0, 3.0]
    phi = exact.exact_shapley(games.make_additive(weights))
    assert np.allclose(phi, weights, atol=1e-12)


def test_unanimity_shapley():
    g = games.make_unanimity(3, co.mask_from_players([1, 2], 3))
    # brute-force over all 8 coalitions gives (1/2, 1/2, 0)
    assert np.allclose(exact.exact_shapley(g), [0.5, 0.5, 0.0], atol=1e-12)


def test_dictator_shapley():
    g = games.make_unanimity(2, co.mask_from_players([1], 2))
    assert np.allclose(exact.exact_shapley(g), [1.0, 0.0], atol=1e-12)


def test_glove_shapley():
    g = games.make_glove(3, co.mask_from_players([1, 2], 3))
    assert np.allclose(exact.exact_shapley(g), [1 / 6, 1 / 6, 2 / 3], atol=1e-12)


@pytest.mark.parametrize("n,seed", [(3, 1), (4, 2), (5, 3), (6, 4)])
def test_matches_bruteforce_on_random_games(n, seed):
    game = games.random_value_table(n, seed=seed)
    expected = shapley_bruteforce(n, game.eval)
    assert np.allclose(exact.exact_shapley(game), expected, atol=1e-12)


def test_matches_permutation_definition():
    game = games.random_value_table(5, seed=11)
    expected = shapley_by_permutations(5, game.eval)
    assert np.allclose(exact.exact_shapley(game), expected, atol=1e-11)


@pytest.mark.parametrize("n,seed", [(4, 0), (8, 1), (12, 2)])
def test_efficiency(n, seed):
    game = games.random_value_table(n, seed=seed)
    phi = exact.exact_shapley(game)
    span = game.eval(co.grand_coalition(n)) - game.eval(0)
    assert abs(phi.sum() - span) <= 1e-9


def test_symmetry():
    # players 1 and 2 are interchangeable in the unanimity game on {1,2}
    g = games.make_unanimity(5, co.mask_from_players([1, 2], 5))
    phi = exact.exact_shapley(g)
    assert abs(phi[0] - phi[1]) <= 1e-12


def test_null_player():
    g = games.make_unanimity(4, co.mask_from_players([1, 2], 4))
    phi = exact.exact_shapley(g)
    assert abs(phi[2]) <= 1e-12 and abs(phi[3]) <= 1e-12


def test_eval_count_is_exactly_2_to_n():
    game = games.random_value_table(7, seed=5)
    exact.exact_shapley(game)
    assert game.eval_count == 2 ** 7


def test_interaction_singletons_match_shapley():
    for n, seed in [(4, 6), (6, 7), (10, 8)]:
        game = games.random_value_table(n, seed=seed)
        phi = exact.exact_shapley(game)
        for i in range(n):
            assert exact.exact_interaction(game, 1 << i) == pytest.approx(
                phi[i], abs=1e-12
            )


def test_interaction_additive_pairs_are_zero():
    game = games.make_additive([1.0, -2.0, 0.5, 4.0])
    for pair in co.enumerate_size(4, 2):
        assert exact.exact_interaction(game, pair) == pytest.approx(0.0, abs=1e-12)


def test_interaction_unanimity_pair():
    game = games.make_unanimity(2, 0b11)
    assert exact.exact_interaction(game, 0b11) == pytest.approx(1.0)
    game3 = games.make_unanimity(3, 0b011)
    assert exact.exact_interaction(game3, 0b011) == pytest.approx(1.0)


def test_interaction_matches_bruteforce():
    game = games.random_value_table(5, seed=21)
    for subset_players in [(0,), (1, 3), (0, 2, 4), (0, 1, 2, 3, 4)]:
        expected = interaction_bruteforce(5, game.eval, subset_players)
        mask = sum(1 << p for p in subset_players)
        assert exact.exact_interaction(game, mask) == pytest.approx(expected, abs=1e-12)


def test_interaction_rejects_empty_subset():
    with pytest.raises(ValueError):
        exact.exact_interaction(games.make_additive([1.0, 2.0]), 0)


def test_mse():
    assert exact.mse(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0
    assert exact.mse(np.array([1.0, 0.0]), np.array([0.0, 0.0])) == pytest.approx(0.5)
    assert exact.mse(np.ones(3), np.zeros(3)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        exact.mse(np.ones(3), np.ones(4))


def test_exact_warns_above_comfort_cap():
    with pytest.warns(UserWarning, match="exact sweep"):
        exact._check_exact_feasible(21, False)
    with pytest.raises(ValueError):
        exact._check_exact_feasible(25, False)
