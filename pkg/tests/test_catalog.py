"""Built-in fixtures: structure flags, stored numbers, cross-checks."""

from fractions import Fraction as F

import pytest

from commgame.catalog import builtin_game, builtin_names, builtin_slice
from commgame.experiments import decision_value, posteriors_of
from commgame.games import Belief, best_response, parse_game, game_to_doc, pooling_value


def test_names_and_unknown():
    assert builtin_names() == (
        "lemma5-fourstate",
        "lemma6-transparent",
        "lemma7-beerquiche",
    )
    with pytest.raises(KeyError, match="lemma6-transparent"):
        builtin_game("nope")


def test_fourstate_structure():
    game, expected = builtin_game("lemma5-fourstate")
    assert (game.n_states, game.n_messages, game.n_actions) == (4, 3, 2)
    assert game.is_simple and not game.is_cheap_talk
    assert game.receiver_column(0) == (F(0), F(0), F(1), F(2))
    assert game.receiver_column(1) == (F(1), F(1), F(0), F(0))
    # the fourth type's second-action payoffs across messages
    assert tuple(game.sender_payoff[3][m][1] for m in range(3)) == (F(5, 4), F(0), F(-1))
    assert expected.kink.t == F(13, 36)
    assert expected.kink.value == F(59, 72)
    assert expected.kink.other_limit == F(25, 36)


def test_fourstate_slice_and_segments():
    game, expected = builtin_game("lemma5-fourstate")
    sl = builtin_slice("lemma5-fourstate")
    assert sl.belief_at(F(1, 4)) == game.default_prior
    assert game.default_prior == Belief.from_values(("1/3", "1/4", "1/8", "7/24"))
    assert expected.value_on_slice(F(3, 10)) == F(113, 120)
    assert expected.value_on_slice(F(13, 36)) == F(59, 72)
    assert expected.value_on_slice(F(2, 5)) == F(11, 15)
    for entry in expected.values:
        assert expected.value_on_slice(entry.belief[1]) == entry.value


def test_fourstate_point_beliefs():
    game, _ = builtin_game("lemma5-fourstate")
    # belief concentrated on the third state: first action, value 1
    acts, val = best_response(game, Belief.point_mass(4, 2), "m1")
    assert acts == (0,)
    assert val == F(1)
    # the tie line between the actions
    acts, val = best_response(game, Belief.from_values(("0", "2/3", "0", "1/3")), "m2")
    assert acts == (0, 1)
    assert val == F(2, 3)


def test_fourstate_pooling_on_slice():
    game, expected = builtin_game("lemma5-fourstate")
    sl = expected.slice
    assert pooling_value(game, sl.belief_at(F(1, 2))) == F(5, 6)
    for entry in expected.pooling:
        assert pooling_value(game, entry.belief) == entry.value


def test_fourstate_full_information_value():
    game, _ = builtin_game("lemma5-fourstate")
    prior = game.default_prior
    full = sum(
        prior[s] * max(game.receiver_payoff[s][0]) for s in range(game.n_states)
    )
    assert full == F(31, 24)


def test_transparent_structure_and_pooling():
    game, expected = builtin_game("lemma6-transparent")
    assert game.is_simple and game.is_cheap_talk and game.has_transparent_motives
    mu0, mu1, mu2 = (entry.belief for entry in expected.values)
    assert mu0 == game.default_prior
    acts, val = best_response(game, mu0, "g")
    assert [game.actions[a] for a in acts] == ["l"]
    assert val == F(5, 4)
    assert pooling_value(game, mu1) == F(19, 12)
    assert pooling_value(game, mu2) == F(11, 12)
    assert [e.value for e in expected.values] == [F(67, 52), F(83, 52), F(127, 132)]


def test_transparent_initial_experiment_splits_prior():
    game, expected = builtin_game("lemma6-transparent")
    dist = posteriors_of(game.default_prior, expected.initial_experiment)
    mu0, mu1, mu2 = (entry.belief for entry in expected.values)
    assert dist.atoms == ((F(1, 2), mu1), (F(1, 2), mu2))


def test_transparent_null_optimal_decision_value():
    """The stored equilibrium posteriors at the base belief price out to
    the stored equilibrium value when treated as a pure decision."""
    game, expected = builtin_game("lemma6-transparent")
    label, atoms = expected.witness_posteriors[0]
    assert label == "mu0"
    total = sum(w * pooling_value(game, post) for w, post in atoms)
    assert total == F(67, 52)
    assert atoms[0] == (F(6, 13), Belief.from_values(("13/24", "11/24", "0")))


def test_beerquiche_structure():
    game, expected = builtin_game("lemma7-beerquiche")
    assert (game.n_states, game.n_messages, game.n_actions) == (2, 2, 2)
    assert not game.is_simple
    # sender payoff listed first in the tree: (tW, B, F) -> 0, receiver 1
    assert game.sender_payoff[0][0][0] == F(0)
    assert game.receiver_payoff[0][0][0] == F(1)
    # the extra unit after quiche: correct action pays 2 there
    assert game.receiver_payoff[0][1][0] == F(2)
    assert game.receiver_payoff[1][1][1] == F(2)
    assert pooling_value(game, expected.slice.belief_at(F(3, 5))) == F(6, 5)


def test_beerquiche_segments():
    _, expected = builtin_game("lemma7-beerquiche")
    assert expected.value_on_slice(F(2, 5)) == F(4, 5)
    assert expected.value_on_slice(F(3, 5)) == F(6, 5)
    assert expected.value_on_slice(F(1, 2)) == F(1)
    assert expected.value_on_slice(F(0)) == F(2)
    h = expected.harmful_splits[0]
    assert (h.prior_t, h.lo_t, h.hi_t, h.loss) == (F(11, 20), F(9, 20), F(13, 20), F(1, 8))


def test_harmful_split_arithmetic_consistent():
    """Stored split losses agree with the stored piecewise values."""
    for name in ("lemma5-fourstate", "lemma7-beerquiche"):
        _, expected = builtin_game(name)
        for h in expected.harmful_splits:
            lam = (h.hi_t - h.prior_t) / (h.hi_t - h.lo_t)
            mixed = lam * expected.value_on_slice(h.lo_t) + (1 - lam) * expected.value_on_slice(h.hi_t)
            assert expected.value_on_slice(h.prior_t) - mixed == h.loss


def test_document_round_trip_all_builtins():
    for name in builtin_names():
        game, _ = builtin_game(name)
        assert parse_game(game_to_doc(game)) == game


def test_slice_lookup_errors():
    with pytest.raises(KeyError, match="no associated slice"):
        builtin_slice("lemma6-transparent")
