"""Tests for the deviant-mean learner and its update rules."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symcast.errors import BadConfigError, DegenerateDivisiveError
from symcast.learner import (
    ADDITIVE_SUBTRACTIVE,
    MULTIPLICATIVE_DIVISIVE,
    Learner,
    LearnerConfig,
    adjust_candidates,
    make_adjustment_grid,
    round_half_away_from_zero,
    select_winners,
    with_class_level,
)

nonzero_diffs = st.floats(min_value=-10, max_value=10, allow_nan=False).filter(
    lambda d: d != 0
)


class TestAdjustmentGrid:
    def test_default_grid_shape_and_endpoints(self):
        grid = make_adjustment_grid(1000, 2.0)
        assert grid.shape == (1000,)
        assert grid[0] == 0.002
        assert grid[1] == 0.004
        assert grid[-1] == 2.0
        assert np.all(np.diff(grid) > 0)
        assert np.all(grid > 0)

    def test_four_point_grid(self):
        assert np.array_equal(make_adjustment_grid(4, 2.0), [0.5, 1.0, 1.5, 2.0])

    def test_singleton_grid(self):
        assert np.array_equal(make_adjustment_grid(1, 0.01), [0.01])

    def test_grid_is_read_only(self):
        grid = make_adjustment_grid(10, 1.0)
        with pytest.raises(ValueError):
            grid[0] = 99.0


@pytest.mark.parametrize(
    "value,expected",
    [
        (0.4, 0),
        (0.5, 1),
        (1.5, 2),
        (2.5, 3),
        (-0.4, 0),
        (-0.5, -1),
        (-1.5, -2),
        (2.0, 2),
        (-3.0, -3),
    ],
)
def test_round_half_away_from_zero(value, expected):
    assert round_half_away_from_zero(value) == expected


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs,field",
        [
            (dict(population_size=0), "population_size"),
            (dict(max_deviant_adjust=0.0), "max_deviant_adjust"),
            (dict(max_deviant_adjust=-1.0), "max_deviant_adjust"),
            (dict(rule_mode="banana"), "rule_mode"),
            (dict(k_winners=0), "k_winners"),
            (dict(population_size=10, k_winners=11), "k_winners"),
            (dict(class_level=0), "class_level"),
        ],
    )
    def test_bad_field_is_named(self, kwargs, field):
        with pytest.raises(BadConfigError) as info:
            LearnerConfig(**kwargs).validate()
        assert info.value.field == field

    def test_defaults_are_valid(self):
        LearnerConfig().validate()

    def test_with_class_level(self):
        config = with_class_level(LearnerConfig(), 8)
        assert config.class_level == 8
        assert config.population_size == 1000


class TestPredictNext:
    def test_zero_mean_identity(self):
        learner = Learner(LearnerConfig())
        assert learner.predict_next(1) == (1.0, 1)

    def test_negative_raw_clamps_to_one(self):
        learner = Learner(LearnerConfig())
        learner.deviant_mean = -2.0
        raw, cls = learner.predict_next(1)
        assert raw == -1.0
        assert cls == 1

    def test_high_raw_clamps_to_the_class_level(self):
        learner = Learner(LearnerConfig())
        learner.deviant_mean = 2.0
        raw, cls = learner.predict_next(5)
        assert raw == 7.0
        assert cls == 5

    @given(
        mean=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        current=st.integers(min_value=1, max_value=5),
    )
    def test_predicted_class_always_in_range(self, mean, current):
        learner = Learner(LearnerConfig())
        learner.deviant_mean = mean
        _, cls = learner.predict_next(current)
        assert 1 <= cls <= 5


class TestAdjustCandidates:
    def test_positive_diff_subtracts(self):
        grid = np.array([0.5])
        assert adjust_candidates(1.0, grid, +1.0).tolist() == [0.5]

    def test_negative_diff_adds(self):
        grid = np.array([0.5])
        assert adjust_candidates(1.0, grid, -1.0).tolist() == [1.5]

    def test_divisive_weakening(self):
        grid = make_adjustment_grid(2, 1.0)
        out = adjust_candidates(2.0, grid, +1.0, MULTIPLICATIVE_DIVISIVE)
        assert out.tolist() == [1.0, 0.5]

    def test_multiplicative_reinforcement(self):
        grid = make_adjustment_grid(2, 1.0)
        out = adjust_candidates(2.0, grid, -1.0, MULTIPLICATIVE_DIVISIVE)
        assert out.tolist() == [1.0, 2.0]

    def test_zero_diff_is_not_this_branch(self):
        with pytest.raises(ValueError):
            adjust_candidates(1.0, make_adjustment_grid(4, 2.0), 0.0)

    def test_zero_mean_degenerates_in_divisive_mode(self):
        with pytest.raises(DegenerateDivisiveError):
            adjust_candidates(0.0, make_adjustment_grid(4, 2.0), +1.0, MULTIPLICATIVE_DIVISIVE)

    def test_unknown_mode_rejected(self):
        with pytest.raises(BadConfigError):
            adjust_candidates(1.0, make_adjustment_grid(4, 2.0), 1.0, "midmode")

    @given(
        mean=st.floats(min_value=-100, max_value=100, allow_nan=False),
        diff=nonzero_diffs,
        population=st.integers(min_value=1, max_value=64),
    )
    def test_candidate_count_is_conserved(self, mean, diff, population):
        grid = make_adjustment_grid(population, 2.0)
        assert adjust_candidates(mean, grid, diff).shape == (population,)

    @given(mean=st.floats(min_value=-100, max_value=100, allow_nan=False), diff=nonzero_diffs)
    def test_directionality(self, mean, diff):
        grid = make_adjustment_grid(32, 2.0)
        candidates = adjust_candidates(mean, grid, diff)
        if diff > 0:
            assert np.all(candidates < mean)
        else:
            assert np.all(candidates > mean)


class TestSelectWinners:
    def test_closest_candidate_wins(self):
        winners = select_winners(np.array([0.5, 1.9, 2.2]), previous_value=1, expected=3)
        assert winners.tolist() == [1.9]

    def test_singleton(self):
        assert select_winners(np.array([7.25]), 1, 4).tolist() == [7.25]

    def test_full_tie_falls_back_to_grid_order(self):
        # residuals tie at 1.0 and |candidate| ties at 1.0; first entry wins
        winners = select_winners(np.array([-1.0, 1.0]), previous_value=2, expected=2)
        assert winners.tolist() == [-1.0]

    def test_residual_tie_prefers_smaller_magnitude(self):
        winners = select_winners(np.array([3.0, -1.0]), previous_value=2, expected=3)
        assert winners.tolist() == [-1.0]

    def test_top_k_are_ranked_by_residual(self):
        winners = select_winners(np.array([0.5, 1.9, 2.2]), 1, 3, k_winners=2)
        assert winners.tolist() == [1.9, 2.2]

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            select_winners(np.array([1.0]), 1, 2, k_winners=2)

    @given(
        candidates=st.lists(
            st.floats(min_value=-50, max_value=50, allow_nan=False), min_size=1, max_size=40
        ),
        previous=st.integers(min_value=1, max_value=9),
        expected=st.integers(min_value=1, max_value=9),
    )
    def test_winner_residual_is_minimal(self, candidates, previous, expected):
        array = np.array(candidates)
        winner = select_winners(array, previous, expected)[0]
        best = min(abs(previous + c - expected) for c in candidates)
        assert abs(previous + winner - expected) == best


class TestApplyBias:
    def test_positive_bias(self):
        learner = Learner(LearnerConfig(bias=0.01))
        learner.deviant_mean = 1.0
        learner.apply_bias()
        assert learner.deviant_mean == pytest.approx(1.01)

    def test_zero_bias_is_identity(self):
        learner = Learner(LearnerConfig())
        learner.deviant_mean = 1.0
        learner.apply_bias()
        assert learner.deviant_mean == 1.0

    def test_bias_on_a_negative_mean(self):
        learner = Learner(LearnerConfig(bias=0.5))
        learner.deviant_mean = -2.0
        learner.apply_bias()
        assert learner.deviant_mean == -1.5


class TestLearnStep:
    def test_underprediction_reinforces_the_mean(self):
        learner = Learner(LearnerConfig())
        outcome = learner.learn_step(1, 5)
        assert outcome.raw_prediction == 1.0
        assert outcome.predicted_class == 1
        assert outcome.signed_diff == -4.0
        assert outcome.winner_candidates == (2.0,)
        assert outcome.new_deviant_mean == 2.0
        assert not outcome.used_fallback
        assert learner.steps_seen == 1

    def test_overprediction_weakens_the_mean(self):
        learner = Learner(LearnerConfig())
        learner.deviant_mean = 2.0
        outcome = learner.learn_step(5, 5)
        assert outcome.raw_prediction == 7.0
        assert outcome.predicted_class == 5
        assert outcome.signed_diff == 2.0
        assert outcome.new_deviant_mean == 0.0

    def test_exact_prediction_takes_the_bias_branch(self):
        learner = Learner(LearnerConfig())
        outcome = learner.learn_step(3, 3)
        assert outcome.signed_diff == 0.0
        assert outcome.winner_candidates == ()
        assert outcome.new_deviant_mean == 0.0
        assert learner.deviant_mean == 0.0

    def test_divisive_from_zero_falls_back_and_is_flagged(self):
        learner = Learner(LearnerConfig(rule_mode=MULTIPLICATIVE_DIVISIVE))
        outcome = learner.learn_step(1, 5)
        assert outcome.used_fallback
        assert outcome.new_deviant_mean == 2.0

    def test_divisive_with_a_nonzero_mean_does_not_fall_back(self):
        learner = Learner(LearnerConfig(rule_mode=MULTIPLICATIVE_DIVISIVE))
        learner.deviant_mean = 1.0
        outcome = learner.learn_step(1, 5)
        assert not outcome.used_fallback
        assert outcome.new_deviant_mean == 2.0

    def test_multiple_winners_average(self):
        learner = Learner(LearnerConfig(population_size=4, k_winners=2))
        # candidates 0.5, 1.0, 1.5, 2.0 against a gap of 3: winners 2.0 and 1.5
        outcome = learner.learn_step(1, 4)
        assert outcome.winner_candidates == (2.0, 1.5)
        assert outcome.new_deviant_mean == 1.75

    @pytest.mark.parametrize("value", [1, 3, 5])
    def test_zero_diff_with_zero_bias_is_a_fixed_point(self, value):
        learner = Learner(LearnerConfig())
        before = learner.deviant_mean
        learner.learn_step(value, value)
        assert learner.deviant_mean == before

    def test_ramp_converges_after_one_step(self):
        learner = Learner(LearnerConfig())
        learner.learn_step(1, 2)
        assert abs(learner.deviant_mean - 1.0) <= 0.002
        for previous, expected in [(2, 3), (3, 4), (4, 5)]:
            outcome = learner.learn_step(previous, expected)
            assert outcome.predicted_class == expected

    def test_replays_are_bit_identical(self):
        pairs = [(1, 5), (5, 5), (5, 1), (1, 1), (1, 3), (3, 2)]
        runs = []
        for _ in range(2):
            learner = Learner(LearnerConfig())
            runs.append([learner.learn_step(p, e) for p, e in pairs])
        assert runs[0] == runs[1]
