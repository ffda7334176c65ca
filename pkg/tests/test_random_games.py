from itertools import product

import pytest

from dominance_lab import ALL_OPERATORS, LS, LW, iterate
from dominance_lab.random_games import GeneratorConfig, generate, strategy_label


class TestConfigValidation:
    def test_players_outside_2_to_4_rejected(self):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, players=(1, 2))
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, players=(2, 5))

    def test_bad_tie_bias_rejected(self):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, tie_bias=1.5)

    def test_empty_payoff_range_rejected(self):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, payoff_range=(3, -3))

    def test_distinct_mode_needs_a_wide_enough_grid(self):
        with pytest.raises(ValueError):
            GeneratorConfig(seed=1, strategies=(2, 4), payoff_range=(0, 2),
                            distinct_payoffs=True)

    def test_json_round_trip(self):
        config = GeneratorConfig(seed=9, players=(2, 3), strategies=(2, 4),
                                 payoff_range=(-5, 5), tie_bias=0.4)
        assert GeneratorConfig.from_json_dict(config.to_json_dict()) == config

    def test_json_accepts_scalars_for_ranges(self):
        config = GeneratorConfig.from_json_dict({"seed": 2, "players": 3, "strategies": 2})
        assert config.players == (3, 3) and config.strategies == (2, 2)


class TestGeneration:
    def test_same_config_same_game(self):
        config = GeneratorConfig(seed=42, players=(2, 3), strategies=(2, 4))
        assert generate(config) == generate(config)

    def test_distinct_seeds_rarely_collide(self):
        config = GeneratorConfig(seed=0, strategies=(2, 4))
        games = [generate(config.with_seed(s)) for s in range(50)]
        assert len(set(games)) == 50

    def test_shapes_respect_the_config(self):
        for seed in range(20):
            game = generate(GeneratorConfig(seed=seed, players=(2, 4), strategies=(2, 3)))
            assert 2 <= game.player_count <= 4
            assert all(2 <= k <= 3 for k in game.shape)

    def test_payoffs_stay_on_the_grid(self):
        game = generate(GeneratorConfig(seed=5, payoff_range=(-2, 2), tie_bias=0.5))
        for table in game.payoffs:
            for value in table:
                assert value.denominator == 1 and -2 <= value <= 2

    def test_strategy_labels(self):
        assert [strategy_label(i) for i in (0, 1, 25, 26)] == ["A", "B", "Z", "S27"]


class TestDistinctPayoffs:
    def columns(self, game, player):
        others = [range(k) for i, k in enumerate(game.shape) if i != player]
        for opponents in product(*others):
            column = []
            for s in range(game.shape[player]):
                profile = list(opponents)
                profile.insert(player, s)
                column.append(game.payoffs[player][game.flat_index(tuple(profile))])
            yield column

    def test_no_ties_within_any_compared_column(self):
        for seed in range(15):
            game = generate(
                GeneratorConfig(seed=seed, players=(2, 3), strategies=(2, 4),
                                distinct_payoffs=True)
            )
            for player in range(game.player_count):
                for column in self.columns(game, player):
                    assert len(set(column)) == len(column)

    def test_weak_and_strict_pure_local_iterations_coincide(self):
        # With all compared payoffs distinct, >=-with-one-> collapses to >.
        for seed in range(20):
            game = generate(
                GeneratorConfig(seed=seed, strategies=(2, 4), distinct_payoffs=True)
            )
            lw = iterate(LW, game)
            ls = iterate(LS, game)
            assert [s.after.kept for s in lw.steps] == [s.after.kept for s in ls.steps]


class TestDegenerateShapes:
    def test_single_strategy_players_fix_immediately(self):
        game = generate(GeneratorConfig(seed=3, strategies=(1, 1)))
        for kind in ALL_OPERATORS:
            trace = iterate(kind, game)
            assert len(trace.steps) == 1 and trace.fixpoint.is_full
