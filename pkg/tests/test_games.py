import math
import sys

import numpy as np
import pytest

from svakadd import coalitions as co
from svakadd import games
from svakadd.games import GameEvalError


def test_additive_game_values():
    g = games.make_additive([1.0, 2.0, 3.0])
    assert g.eval(co.mask_from_players([1, 3], 3)) == 4.0
    assert g.eval(0b111) == 6.0
    assert g.eval(0) == 0.0


def test_additive_zero_game():
    g = games.make_additive([0.0, 0.0])
    assert all(g.eval(m) == 0.0 for m in co.enumerate_all(2))


def test_additive_needs_weights():
    with pytest.raises(ValueError):
        games.make_additive([])


def test_unanimity_game_values():
    g = games.make_unanimity(3, co.mask_from_players([1, 2], 3))
    assert g.eval(co.mask_from_players([1, 3], 3)) == 0.0
    assert g.eval(co.mask_from_players([1, 2], 3)) == 1.0
    assert g.eval(0b111) == 1.0
    with pytest.raises(ValueError):
        games.make_unanimity(3, 0)


def test_glove_game_values():
    g = games.make_glove(3, co.mask_from_players([1, 2], 3))
    assert g.eval(0b111) == 1.0  # one matched pair
    assert g.eval(0) == 0.0
    assert g.eval(0b001) == 0.0
    with pytest.raises(ValueError):
        games.make_glove(3, 0b111)


def test_eval_rejects_out_of_range_coalition():
    g = games.make_additive([1.0, 2.0])
    with pytest.raises(ValueError):
        g.eval(0b100)


def test_cache_counts_distinct_evaluations_only():
    g = games.make_additive([1.0, 2.0, 3.0])
    assert g.eval_count == 0
    g.eval(0b011)
    g.eval(0b011)
    g.eval(0b010)
    assert g.eval_count == 2


def test_eval_is_deterministic_and_bit_identical():
    g = games.random_value_table(6, seed=9)
    for mask in (0, 5, 63):
        assert g.eval(mask) == g.eval(mask)


def test_normalize_shifts_by_empty_value():
    base = games.SyntheticGame(2, lambda m: 0.5 + 0.5 * (m == 0b11), "shifted")
    normed = games.normalize(base)
    assert normed.eval(0) == 0.0
    assert normed.eval(0b11) == 0.5
    # span is shift-invariant
    assert normed.eval(0b11) - normed.eval(0) == base.eval(0b11) - base.eval(0)


def test_normalize_is_identity_on_normalized_games():
    g = games.make_additive([1.0, -2.0])
    normed = games.normalize(g)
    for mask in co.enumerate_all(2):
        assert normed.eval(mask) == g.eval(mask)


def test_value_table_round_trip(tmp_path):
    g = games.make_additive([1.5, -0.25, 3.0])
    path = tmp_path / "table.csv"
    games.save_value_table(g, path)
    loaded = games.load_value_table(path)
    for mask in co.enumerate_all(3):
        assert loaded.eval(mask) == g.eval(mask)


def test_value_table_comments_and_order(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("# comment\nn=2\n11,3.0\n00,0.0\n# mid comment\n10,2.0\n01,1.0\n")
    g = games.load_value_table(path)
    # bitstring "10" reads left-to-right as players: {1} = bit 0
    assert g.eval(0b01) == 2.0
    assert g.eval(0b10) == 1.0
    assert g.eval(0b11) == 3.0


def test_value_table_missing_line(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("n=2\n00,0.0\n01,1.0\n10,2.0\n")
    with pytest.raises(ValueError, match="incomplete table"):
        games.load_value_table(path)


def test_value_table_duplicate_line(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("n=2\n00,0.0\n00,1.0\n10,2.0\n11,3.0\n")
    with pytest.raises(ValueError, match="duplicate"):
        games.load_value_table(path)


def test_value_table_bad_width(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("n=2\n000,0.0\n01,1.0\n10,2.0\n11,3.0\n")
    with pytest.raises(ValueError, match="inconsistent"):
        games.load_value_table(path)


def test_value_table_non_finite(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("n=2\n00,nan\n01,1.0\n10,2.0\n11,3.0\n")
    with pytest.raises(ValueError, match="non-finite"):
        games.load_value_table(path)


ADDITIVE_ORACLE = (
    "import sys\n"
    "for line in sys.stdin:\n"
    "    bits = line.strip()\n"
    "    c = [1.0, 2.0, 3.0]\n"
    "    print(sum(c[j] for j, ch in enumerate(bits) if ch == '1'), flush=True)\n"
)


def test_oracle_game_matches_additive():
    direct = games.make_additive([1.0, 2.0, 3.0])
    with games.open_oracle([sys.executable, "-c", ADDITIVE_ORACLE], n=3) as oracle:
        for mask in co.enumerate_all(3):
            assert oracle.eval(mask) == direct.eval(mask)
        assert oracle.eval_count == 8


def test_oracle_cache_avoids_round_trips():
    counting = (
        "import sys\n"
        "count = 0\n"
        "for line in sys.stdin:\n"
        "    count += 1\n"
        "    print(float(count), flush=True)\n"
    )
    with games.open_oracle([sys.executable, "-c", counting], n=2) as oracle:
        first = oracle.eval(0b01)
        assert oracle.eval(0b01) == first  # cached, no second round trip
        assert oracle.eval(0b10) == first + 1.0
        assert oracle.eval_count == 2


def test_oracle_full_sweep_counter_unaffected_by_estimator_requeries():
    from svakadd.estimator import EstimatorConfig, run_svakadd

    with games.open_oracle([sys.executable, "-c", ADDITIVE_ORACLE], n=3) as oracle:
        run_svakadd(oracle, EstimatorConfig(k=1, budget=5, seed=0))
        for mask in co.enumerate_all(3):
            oracle.eval(mask)
        run_svakadd(oracle, EstimatorConfig(k=1, budget=8, seed=1))
        assert oracle.eval_count == 8  # distinct coalitions only, ever


def test_oracle_bad_reply_is_protocol_error():
    with games.open_oracle(
        [sys.executable, "-c", "import sys\n[print('abc', flush=True) for _ in sys.stdin]"],
        n=2,
    ) as oracle:
        with pytest.raises(GameEvalError, match="non-numeric"):
            oracle.eval(0b01)


def test_oracle_child_exit_mid_session():
    with pytest.raises(GameEvalError):
        with games.open_oracle([sys.executable, "-c", "pass"], n=2) as oracle:
            oracle.eval(0b01)


def test_oracle_spawn_failure():
    with pytest.raises(GameEvalError):
        games.open_oracle(["/nonexistent/binary"], n=2)


def test_discretize_equal_width():
    data = games.discretize(np.array([[0.0], [1.0], [2.0], [3.0]]), bins=2)
    assert data.codes[:, 0].tolist() == [0, 0, 1, 1]


def test_discretize_constant_column():
    data = games.discretize(np.full((5, 1), 7.0), bins=4)
    assert data.codes[:, 0].tolist() == [0] * 5


def test_discretize_endpoints():
    data = games.discretize(np.array([[0.0], [10.0]]), bins=2)
    assert data.codes[:, 0].tolist() == [0, 1]


def test_discretize_keeps_small_categorical_columns():
    raw = np.array([[0.0], [5.0], [0.0], [5.0], [9.0]])
    data = games.discretize(raw, bins=4)
    assert data.codes[:, 0].tolist() == [0, 1, 0, 1, 2]


def test_discretize_rejects_bad_input():
    with pytest.raises(ValueError):
        games.discretize(np.array([[1.0]]), bins=1)
    with pytest.raises(ValueError):
        games.discretize(np.array([[np.nan]]), bins=2)


def _tc_game(codes):
    return games.total_correlation_game(games.DataMatrix(np.asarray(codes)))


def test_total_correlation_empty_and_singletons_zero():
    g = _tc_game([[0, 1, 0], [1, 0, 1], [0, 1, 1], [1, 0, 0]])
    assert g.eval(0) == 0.0
    for j in range(3):
        assert g.eval(1 << j) == 0.0


def test_total_correlation_identical_columns():
    # Two identical uniform binary columns: nu({1,2}) = ln 2.
    g = _tc_game([[0, 0], [1, 1], [0, 0], [1, 1]])
    assert g.eval(0b11) == pytest.approx(math.log(2))


def test_total_correlation_independent_columns():
    # Jointly uniform over all four combinations: no shared information.
    g = _tc_game([[0, 0], [0, 1], [1, 0], [1, 1]])
    assert g.eval(0b11) == pytest.approx(0.0, abs=1e-12)


def test_total_correlation_nonnegative_and_monotone_on_duplicate():
    # Column 3 duplicates column 1; adding it never lowers the worth.
    rng = np.random.default_rng(5)
    first = rng.integers(0, 3, size=40)
    second = rng.integers(0, 2, size=40)
    codes = np.stack([first, second, first], axis=1)
    g = _tc_game(codes)
    for mask in co.enumerate_all(3):
        assert g.eval(mask) >= -1e-12
    for mask in co.enumerate_all(3):
        if mask & 0b001 and not mask & 0b100:
            assert g.eval(mask | 0b100) >= g.eval(mask) - 1e-12


def test_total_correlation_log_base():
    nat = _tc_game([[0, 0], [1, 1], [0, 0], [1, 1]])
    bits = games.total_correlation_game(
        games.DataMatrix(np.array([[0, 0], [1, 1], [0, 0], [1, 1]])), base=2
    )
    assert bits.eval(0b11) == pytest.approx(nat.eval(0b11) / math.log(2))


def test_load_data_csv(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1.0,2.0\n3.5,4.5\n")
    names, data = games.load_data_csv(path)
    assert names == ["a", "b"]
    assert data.shape == (2, 2)
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1.0,x\n")
    with pytest.raises(ValueError, match="non-numeric"):
        games.load_data_csv(bad)
