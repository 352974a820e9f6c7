"""Posterior algebra, composition and the Blackwell order."""

import random
from fractions import Fraction as F

import pytest

from commgame.experiments import (
    EQUIVALENT,
    FIRST_DOMINATES,
    INCOMPARABLE,
    SECOND_DOMINATES,
    Experiment,
    PosteriorDistribution,
    blackwell_compare,
    compose,
    decision_value,
    experiment_of_strategy,
    experiment_to_doc,
    parse_experiment,
    posteriors_of,
    uninformative,
)
from commgame.games import Belief, Game, parse_game, pooling_value

TWO = ("lo", "hi")


def binary(p_lo, p_hi):
    """Two-state, two-signal experiment from the per-state chance of the
    first signal."""
    p_lo, p_hi = F(p_lo), F(p_hi)
    return Experiment(TWO, ("y1", "y2"), ((p_lo, 1 - p_lo), (p_hi, 1 - p_hi)))


def from_posteriors(prior, targets):
    """Build a two-state experiment splitting prior into the target
    posteriors (all beliefs given as the probability of the second state).

    Weights come from the martingale identity; the construction fails
    loudly if the prior is not in the targets' convex hull.
    """
    prior = F(prior)
    lo, hi = (F(t) for t in targets)
    assert lo <= prior <= hi and lo < hi
    w_lo = (hi - prior) / (hi - lo)
    kernel = []
    for s, p_state in enumerate(((1 - prior, prior))):
        posts = ((1 - lo, 1 - hi), (lo, hi))[s]
        row = tuple(
            (w * posts[j]) / p_state if p_state else F(1 - j)
            for j, w in enumerate((w_lo, 1 - w_lo))
        )
        kernel.append(row)
    return Experiment(TWO, ("y1", "y2"), tuple(kernel))


def test_posteriors_of_symmetric_binary():
    exp = Experiment(TWO, ("y1", "y2"), ((F(3, 4), F(1, 4)), (F(1, 4), F(3, 4))))
    dist = posteriors_of(Belief((F(1, 2), F(1, 2))), exp)
    assert dist.atoms == (
        (F(1, 2), Belief((F(3, 4), F(1, 4)))),
        (F(1, 2), Belief((F(1, 4), F(3, 4)))),
    )


def test_posteriors_of_uninformative_single_atom():
    prior = Belief((F(1, 3), F(2, 3)))
    dist = posteriors_of(prior, uninformative(TWO))
    assert dist.atoms == ((F(1), prior),)


def test_posteriors_of_drops_dead_signals():
    exp = Experiment(TWO, ("y1", "y2", "dead"), (
        (F(1, 2), F(1, 2), F(0)),
        (F(0), F(1), F(0)),
    ))
    dist = posteriors_of(Belief((F(1, 2), F(1, 2))), exp)
    assert len(dist) == 2
    assert dist.atoms[0] == (F(1, 4), Belief((F(1), F(0))))


def test_martingale_enforced():
    with pytest.raises(ValueError, match="average"):
        PosteriorDistribution(
            Belief((F(1, 2), F(1, 2))),
            ((F(1), Belief((F(1, 4), F(3, 4)))),),
        )
    with pytest.raises(ValueError, match="positive"):
        PosteriorDistribution(
            Belief((F(1, 2), F(1, 2))),
            ((F(0), Belief((F(1, 2), F(1, 2)))), (F(1), Belief((F(1, 2), F(1, 2))))),
        )


def test_kernel_rows_must_be_stochastic():
    with pytest.raises(ValueError, match="sum"):
        Experiment(TWO, ("y1", "y2"), ((F(1, 2), F(1, 3)), (F(1), F(0))))
    with pytest.raises(ValueError, match="nonnegative"):
        Experiment(TWO, ("y1", "y2"), ((F(3, 2), F(-1, 2)), (F(1), F(0))))


def test_experiment_of_strategy_mixing():
    """One type pure, the other mixing so that message m1 carries the
    posterior 1/5 and m2 reveals the high state."""
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
    game = parse_game(doc)
    mu0, muj = F(1, 2), F(1, 5)
    sigma = (1 - mu0) * muj / ((1 - muj) * mu0)  # chance the high type sends m1
    assert sigma == F(1, 4)
    strategy = ((F(1), F(0)), (sigma, 1 - sigma))
    exp = experiment_of_strategy(game, game.default_prior, strategy)
    dist = posteriors_of(game.default_prior, exp)
    assert dist.atoms[0][1] == Belief((1 - muj, muj))
    assert dist.atoms[1][1] == Belief((F(0), F(1)))


def test_compose_three_posterior_chain():
    """Initial split 1/2 -> {1/5, 7/10}; the second branch splits on into
    {2/5, 1}; the composition carries posteriors {1/5, 2/5, 1}."""
    prior = Belief((F(1, 2), F(1, 2)))
    zeta = from_posteriors("1/2", ("1/5", "7/10"))
    gamma2 = from_posteriors("7/10", ("2/5", "1"))
    xi = compose(zeta, {"y1": uninformative(TWO), "y2": gamma2})
    assert xi.signals == ("y1.null", "y2.y1", "y2.y2")
    dist = posteriors_of(prior, xi)
    assert dist.atoms == (
        (F(2, 5), Belief((F(4, 5), F(1, 5)))),
        (F(3, 10), Belief((F(3, 5), F(2, 5)))),
        (F(3, 10), Belief((F(0), F(1)))),
    )
    eta = from_posteriors("1/2", ("2/5", "1"))
    assert blackwell_compare(xi, eta) == FIRST_DOMINATES
    assert blackwell_compare(eta, xi) == SECOND_DOMINATES


def test_compose_missing_reachable_continuation():
    zeta = binary("1/2", "1/4")
    with pytest.raises(Exception, match="y2"):
        compose(zeta, {"y1": uninformative(TWO)})
    # unreachable signals need no continuation
    dead = Experiment(TWO, ("y1", "y2"), ((F(1), F(0)), (F(1), F(0))))
    composed = compose(dead, {"y1": uninformative(TWO)})
    assert composed.signals == ("y1.null",)


def test_compose_with_uninformative_parts():
    zeta = binary("2/3", "1/6")
    # uninformative initial: equivalent to the single continuation
    left = compose(uninformative(TWO), {"null": zeta})
    assert blackwell_compare(left, zeta) == EQUIVALENT
    # all-uninformative continuations: equivalent to the initial
    right = compose(zeta, {"y1": uninformative(TWO), "y2": uninformative(TWO)})
    assert blackwell_compare(right, zeta) == EQUIVALENT


def test_blackwell_basics():
    ident = Experiment(TWO, ("L", "H"), ((F(1), F(0)), (F(0), F(1))))
    noise = binary("1/2", "1/2")
    some = binary("3/4", "1/4")
    assert blackwell_compare(some, some) == EQUIVALENT
    assert blackwell_compare(ident, some) == FIRST_DOMINATES
    assert blackwell_compare(noise, some) == SECOND_DOMINATES
    e1 = binary("3/4", "1/4")
    e2 = binary("9/10", "2/5")
    assert blackwell_compare(e1, e2) == INCOMPARABLE
    with pytest.raises(ValueError, match="state"):
        blackwell_compare(some, uninformative(("a", "b", "c")))


def test_blackwell_ignores_dead_signals():
    padded = Experiment(TWO, ("y1", "y2", "dead"), (
        (F(3, 4), F(1, 4), F(0)),
        (F(1, 4), F(3, 4), F(0)),
    ))
    assert blackwell_compare(padded, binary("3/4", "1/4")) == EQUIVALENT


def _random_simple_game(rng, n_states, n_actions=2):
    states = tuple(f"s{i}" for i in range(n_states))
    cols = [tuple(F(rng.randint(-5, 5)) for _ in range(n_actions)) for _ in states]
    receiver = tuple((cols[s],) for s in range(n_states))
    sender = tuple(((F(0),) * n_actions,) for _ in states)
    return Game(states, ("m",), tuple(f"a{i}" for i in range(n_actions)),
                sender, receiver, Belief.point_mass(n_states, 0))


def _random_belief(rng, n):
    weights = [rng.randint(0, 9) for _ in range(n)]
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    return Belief(tuple(F(w, total) for w in weights))


def _random_experiment(rng, states, n_signals):
    kernel = []
    for _ in states:
        weights = [rng.randint(0, 4) for _ in range(n_signals)]
        if sum(weights) == 0:
            weights[rng.randrange(n_signals)] = 1
        total = sum(weights)
        kernel.append(tuple(F(w, total) for w in weights))
    return Experiment(tuple(states), tuple(f"y{j}" for j in range(n_signals)), tuple(kernel))


def _random_garbling(rng, n_from, n_to):
    rows = []
    for _ in range(n_from):
        weights = [rng.randint(0, 4) for _ in range(n_to)]
        if sum(weights) == 0:
            weights[rng.randrange(n_to)] = 1
        total = sum(weights)
        rows.append([F(w, total) for w in weights])
    return rows


def test_garbled_experiments_compare_and_order_values():
    """e1 and its garbling e2 = e1.G: compare reports dominance and the
    decision value respects it for every simple game, exactly."""
    rng = random.Random(624)
    states = ("s0", "s1", "s2")
    for _ in range(25):
        e1 = _random_experiment(rng, states, 3)
        g = _random_garbling(rng, 3, 2)
        kernel2 = tuple(
            tuple(sum(row[i] * g[i][j] for i in range(3)) for j in range(2))
            for row in e1.kernel
        )
        e2 = Experiment(states, ("z0", "z1"), kernel2)
        assert blackwell_compare(e1, e2) in (FIRST_DOMINATES, EQUIVALENT)
        for _ in range(3):
            game = _random_simple_game(rng, 3, n_actions=3)
            prior = _random_belief(rng, 3)
            assert decision_value(prior, e1, game) >= decision_value(prior, e2, game)


def test_decision_value_uninformative_is_pooling():
    rng = random.Random(250)
    for _ in range(20):
        game = _random_simple_game(rng, 3)
        prior = _random_belief(rng, 3)
        assert decision_value(prior, uninformative(game.states), game) == pooling_value(game, prior)


def test_decision_value_rejects_non_simple():
    doc = {
        "states": ["lo", "hi"],
        "messages": ["m1", "m2"],
        "actions": ["a1", "a2"],
        "sender_payoff": [
            [["0", "0"], ["0", "0"]],
            [["0", "0"], ["0", "0"]],
        ],
        "receiver_payoff": [
            [["1", "0"], ["2", "0"]],
            [["0", "1"], ["0", "2"]],
        ],
        "prior": ["1/2", "1/2"],
    }
    game = parse_game(doc)
    with pytest.raises(ValueError, match="simple"):
        decision_value(game.default_prior, uninformative(TWO), game)


def test_experiment_document_round_trip():
    exp = binary("2/3", "1/6")
    doc = experiment_to_doc(exp)
    assert parse_experiment(doc) == exp
    assert doc["kernel"][0] == ["2/3", "1/3"]
