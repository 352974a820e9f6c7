"""Game schema, belief geometry and single-belief receiver optimization."""

import json
import random
from fractions import Fraction as F

import pytest

from commgame.games import (
    Belief,
    BeliefSlice,
    Game,
    SchemaError,
    best_response,
    full_binary_slice,
    game_to_doc,
    parse_game,
    pooling_value,
)


def tiny_doc(**overrides):
    """A minimal valid two-state document, tweakable per test."""
    doc = {
        "states": ["lo", "hi"],
        "messages": ["m1", "m2"],
        "actions": ["a1", "a2"],
        "sender_payoff": [
            [["0", "0"], ["0", "0"]],
            [["0", "0"], ["0", "0"]],
        ],
        "receiver_payoff": [["1", "0"], ["0", "1"]],
        "prior": ["1/2", "1/2"],
    }
    doc.update(overrides)
    return doc


def test_parse_simple_two_d_receiver_table():
    game = parse_game(tiny_doc())
    assert game.is_simple
    assert game.is_cheap_talk
    assert game.receiver_payoff[0][0] == game.receiver_payoff[0][1]
    assert game.receiver_column(0) == (F(1), F(0))
    assert game.receiver_column(1) == (F(0), F(1))


def test_parse_accepts_json_text():
    game = parse_game(json.dumps(tiny_doc()))
    assert game.states == ("lo", "hi")


def test_prior_must_sum_to_one():
    with pytest.raises(SchemaError, match="sum"):
        parse_game(tiny_doc(prior=["1/2", "1/3"]))


def test_negative_prior_rejected():
    with pytest.raises(SchemaError):
        parse_game(tiny_doc(prior=["3/2", "-1/2"]))


def test_bad_rational_token_names_cell():
    doc = tiny_doc()
    doc["sender_payoff"][1][0][1] = "0.5x"
    with pytest.raises(SchemaError, match="m1"):
        parse_game(doc)


def test_missing_tensor_cell():
    doc = tiny_doc()
    doc["sender_payoff"][0][1] = ["0"]
    with pytest.raises(SchemaError):
        parse_game(doc)


def test_three_d_receiver_tensor_not_simple():
    doc = tiny_doc(
        receiver_payoff=[
            [["1", "0"], ["2", "0"]],
            [["0", "1"], ["0", "2"]],
        ]
    )
    game = parse_game(doc)
    assert not game.is_simple


def test_round_trip_through_document():
    game = parse_game(tiny_doc())
    again = parse_game(game_to_doc(game))
    assert again == game
    # simple games keep the compact receiver table on the way out
    assert game_to_doc(game)["receiver_payoff"] == [["1", "0"], ["0", "1"]]


def test_belief_validation():
    with pytest.raises(ValueError):
        Belief((F(1, 2), F(1, 3)))
    with pytest.raises(ValueError):
        Belief((F(3, 2), F(-1, 2)))
    b = Belief.point_mass(3, 1)
    assert b.support() == (1,)
    assert str(b) == "(0, 1, 0)"


def test_belief_slice_grid_and_endpoints():
    sl = BeliefSlice(
        base=Belief((F(1), F(0))),
        direction=(F(-1), F(1)),
        t_range=(F(0), F(1)),
    )
    assert sl.belief_at(F(1, 3)) == Belief((F(2, 3), F(1, 3)))
    grid = sl.grid(F(1, 4))
    assert grid == (F(0), F(1, 4), F(1, 2), F(3, 4), F(1))
    # a step that does not divide the range drops the far endpoint
    assert sl.grid(F(2, 5)) == (F(0), F(2, 5), F(4, 5))
    with pytest.raises(ValueError):
        sl.belief_at(F(3, 2))


def test_slice_direction_must_preserve_mass():
    with pytest.raises(ValueError):
        BeliefSlice(
            base=Belief((F(1), F(0))),
            direction=(F(1), F(1)),
            t_range=(F(0), F(1)),
        )


def test_full_binary_slice():
    game = parse_game(tiny_doc())
    sl = full_binary_slice(game)
    assert sl.belief_at(F(0)) == Belief((F(1), F(0)))
    assert sl.belief_at(F(1)) == Belief((F(0), F(1)))


def test_best_response_ties_and_labels():
    game = parse_game(tiny_doc())
    acts, val = best_response(game, Belief((F(1, 2), F(1, 2))), "m1")
    assert acts == (0, 1)
    assert val == F(1, 2)
    with pytest.raises(ValueError, match="unknown message"):
        best_response(game, Belief((F(1, 2), F(1, 2))), "nope")


def test_best_response_message_independent_when_simple():
    game = parse_game(tiny_doc())
    b = Belief((F(1, 3), F(2, 3)))
    assert best_response(game, b, 0) == best_response(game, b, 1)
    assert pooling_value(game, b) == F(2, 3)


def _random_game(rng, n_states=2, n_messages=2, n_actions=2, simple=False):
    def cell():
        return F(rng.randint(-5, 5))

    states = tuple(f"s{i}" for i in range(n_states))
    messages = tuple(f"m{i}" for i in range(n_messages))
    actions = tuple(f"a{i}" for i in range(n_actions))
    sender = tuple(
        tuple(tuple(cell() for _ in actions) for _ in messages) for _ in states
    )
    if simple:
        cols = [tuple(cell() for _ in actions) for _ in states]
        receiver = tuple(tuple(cols[s] for _ in messages) for s in range(n_states))
    else:
        receiver = tuple(
            tuple(tuple(cell() for _ in actions) for _ in messages) for _ in states
        )
    weights = [rng.randint(1, 9) for _ in states]
    total = sum(weights)
    prior = Belief(tuple(F(w, total) for w in weights))
    return Game(states, messages, actions, sender, receiver, prior)


def _random_belief(rng, n):
    weights = [rng.randint(0, 9) for _ in range(n)]
    if sum(weights) == 0:
        weights[rng.randrange(n)] = 1
    total = sum(weights)
    return Belief(tuple(F(w, total) for w in weights))


def test_best_response_value_convex_in_belief():
    """value(mix) <= mix of values, exactly, over random simple games."""
    rng = random.Random(4711)
    for _ in range(60):
        game = _random_game(rng, n_states=3, n_actions=3, simple=True)
        b1 = _random_belief(rng, 3)
        b2 = _random_belief(rng, 3)
        lam = F(rng.randint(0, 8), 8)
        mix = Belief(tuple(lam * b1[i] + (1 - lam) * b2[i] for i in range(3)))
        v_mix = best_response(game, mix, 0)[1]
        v_split = lam * best_response(game, b1, 0)[1] + (1 - lam) * best_response(game, b2, 0)[1]
        assert v_mix <= v_split
