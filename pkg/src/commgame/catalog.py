"""Built-in study games with machine-checkable expected results.

Three small games, each a minimal witness that information can hurt the
receiver once a structural hypothesis is dropped:

* ``lemma5-fourstate``: simple, four states, three messages, two
  actions.  Along a one-dimensional family of priors the value function
  is piecewise linear with a downward jump, so a binary experiment
  straddling the jump is strictly harmful.
* ``lemma6-transparent``: cheap talk with transparent motives, three
  states and three actions.  A specific half/half binary experiment
  lowers the receiver's value; the induced equilibrium experiments are
  Blackwell-incomparable with the no-learning equilibrium experiment.
* ``lemma7-beerquiche``: a two-state, two-message, two-action signalling
  game with a message-dependent receiver payoff (the receiver gains an
  extra unit for acting correctly after the second message).  Its value
  function jumps upward, so again a straddling experiment hurts.

Every quantity stored in an ExpectedResults was derived by hand and is
reproduced exactly by the solver; the acceptance suite is the bridge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .experiments import Experiment
from .games import Belief, BeliefSlice, Game, full_binary_slice
from .ratlin import Rational


def _f(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class ExpectedValue:
    """One expected number at one belief, with a note on its origin."""

    label: str
    belief: Belief
    value: Rational
    source: str


@dataclass(frozen=True)
class Segment:
    """One linear piece of a value function along a slice.

    The piece applies on [lo, hi], with each endpoint included only if
    the corresponding flag is set, and evaluates to intercept + slope*t.
    """

    lo: Rational
    hi: Rational
    intercept: Rational
    slope: Rational
    closed_left: bool = True
    closed_right: bool = True

    def contains(self, t: Rational) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.closed_left:
            return False
        if t == self.hi and not self.closed_right:
            return False
        return True

    def value_at(self, t: Rational) -> Rational:
        return self.intercept + self.slope * t


@dataclass(frozen=True)
class Kink:
    """A discontinuity point: the value there and the one-sided limit
    from the open side of the jump."""

    t: Rational
    value: Rational
    other_limit: Rational


@dataclass(frozen=True)
class HarmfulSplit:
    """An expected harmful binary experiment along a slice.

    The prior at prior_t splits into posteriors at lo_t and hi_t; the
    mixture of values falls short of the value at the prior by loss.
    """

    prior_t: Rational
    lo_t: Rational
    hi_t: Rational
    loss: Rational


@dataclass(frozen=True)
class ExpectedResults:
    """Frozen numbers a correct solver must reproduce exactly."""

    name: str
    note: str
    values: tuple[ExpectedValue, ...] = ()
    pooling: tuple[ExpectedValue, ...] = ()
    slice: BeliefSlice | None = None
    segments: tuple[Segment, ...] = ()
    kink: Kink | None = None
    harmful_splits: tuple[HarmfulSplit, ...] = ()
    witness_posteriors: tuple[tuple[str, tuple[tuple[Rational, Belief], ...]], ...] = ()
    initial_experiment: Experiment | None = None
    initial_expected_value: Rational | None = None
    initial_verdict: str | None = None

    def value_on_slice(self, t: Rational) -> Rational:
        """Evaluate the stored piecewise form at slice coordinate t."""
        for segment in self.segments:
            if segment.contains(t):
                return segment.value_at(t)
        raise ValueError(f"t={t} is outside every stored segment")


def _fourstate() -> tuple[Game, ExpectedResults]:
    # Simple game: the receiver wants the second action in the first two
    # states and the first action in the last two.  The first two types
    # have strictly dominant messages; the fourth type never gains from
    # its third message.
    states = ("t1", "t2", "t3", "t4")
    messages = ("m1", "m2", "m3")
    actions = ("a1", "a2")
    r_rows = {
        "t1": ("0", "1"),
        "t2": ("0", "1"),
        "t3": ("1", "0"),
        "t4": ("2", "0"),
    }
    s_rows = {
        # [message][action], per state
        "t1": (("1", "1"), ("0", "0"), ("0", "0")),
        "t2": (("0", "0"), ("1", "1"), ("0", "0")),
        "t3": (("0", "2"), ("1", "4"), ("3", "0")),
        "t4": (("-1", "5/4"), ("2", "0"), ("-2", "-1")),
    }
    receiver = tuple(
        tuple(tuple(_f(x) for x in r_rows[s]) for _ in messages) for s in states
    )
    sender = tuple(
        tuple(tuple(_f(x) for x in row) for row in s_rows[s]) for s in states
    )
    slice_ = BeliefSlice(
        base=Belief.from_values(("1/3", "0", "1/8", "13/24")),
        direction=(_f("0"), _f("1"), _f("0"), _f("-1")),
        t_range=(_f("0"), _f("13/24")),
    )
    prior = slice_.belief_at(_f("1/4"))
    game = Game(states, messages, actions, sender, receiver, prior)

    seg_note = "piecewise value derivation along the stored slice"
    expected = ExpectedResults(
        name="lemma5-fourstate",
        note=(
            "Value along the slice that varies weight between the second "
            "and fourth states: 37/24 - 2t up to t = 13/36, then 1/3 + t. "
            "The drop at 13/36 makes a straddling experiment harmful."
        ),
        values=(
            ExpectedValue("t=1/4", slice_.belief_at(_f("1/4")), _f("25/24"), seg_note),
            ExpectedValue("t=3/10", slice_.belief_at(_f("3/10")), _f("113/120"), seg_note),
            ExpectedValue("t=13/36", slice_.belief_at(_f("13/36")), _f("59/72"), seg_note),
            ExpectedValue("t=2/5", slice_.belief_at(_f("2/5")), _f("11/15"), seg_note),
        ),
        pooling=(
            ExpectedValue("t=1/4", slice_.belief_at(_f("1/4")), _f("17/24"), "best fixed action"),
            ExpectedValue("t=2/5", slice_.belief_at(_f("2/5")), _f("11/15"), "best fixed action"),
        ),
        slice=slice_,
        segments=(
            Segment(_f("0"), _f("13/36"), _f("37/24"), _f("-2")),
            Segment(_f("13/36"), _f("13/24"), _f("1/3"), _f("1"), closed_left=False),
        ),
        kink=Kink(_f("13/36"), _f("59/72"), _f("25/36")),
        harmful_splits=(HarmfulSplit(_f("3/10"), _f("1/5"), _f("2/5"), _f("1/240")),),
    )
    return game, expected


def _transparent() -> tuple[Game, ExpectedResults]:
    # Cheap talk with transparent motives: every type wants the first
    # two actions equally and dislikes the third.
    states = ("tL", "tM", "tH")
    messages = ("g", "b")
    actions = ("l", "s", "x")
    r_cols = {
        "l": ("0", "1", "2"),
        "s": ("13/24", "13/24", "1"),
        "x": ("1", "0", "1"),
    }
    receiver = tuple(
        tuple(
            tuple(_f(r_cols[a][si]) for a in actions)
            for _ in messages
        )
        for si in range(len(states))
    )
    sender = tuple(
        tuple((_f("1"), _f("1"), _f("0")) for _ in messages) for _ in states
    )
    mu0 = Belief.from_values(("1/4", "1/4", "1/2"))
    mu1 = Belief.from_values(("1/12", "1/4", "2/3"))
    mu2 = Belief.from_values(("5/12", "1/4", "1/3"))
    game = Game(states, messages, actions, sender, receiver, mu0)

    # Half/half binary experiment carrying the prior to mu1 and mu2.
    zeta = Experiment(
        states,
        ("y1", "y2"),
        (
            (_f("1/6"), _f("5/6")),
            (_f("1/2"), _f("1/2")),
            (_f("2/3"), _f("1/3")),
        ),
    )
    eq_note = "receiver-optimal equilibrium at the three study beliefs"
    expected = ExpectedResults(
        name="lemma6-transparent",
        note=(
            "At the base belief and at the first split belief the best "
            "equilibrium separates the high and low types with the middle "
            "type mixing; at the second split belief that arrangement "
            "breaks and the best equilibrium separates high from middle "
            "instead, which is worth much less. The half/half experiment "
            "into the two split beliefs is therefore harmful."
        ),
        values=(
            ExpectedValue("mu0", mu0, _f("67/52"), eq_note),
            ExpectedValue("mu1", mu1, _f("83/52"), eq_note),
            ExpectedValue("mu2", mu2, _f("127/132"), eq_note),
        ),
        pooling=(
            ExpectedValue("mu0", mu0, _f("5/4"), "best fixed action"),
            ExpectedValue("mu1", mu1, _f("19/12"), "best fixed action"),
            ExpectedValue("mu2", mu2, _f("11/12"), "best fixed action"),
        ),
        witness_posteriors=(
            (
                "mu0",
                (
                    (_f("6/13"), Belief.from_values(("13/24", "11/24", "0"))),
                    (_f("7/13"), Belief.from_values(("0", "1/14", "13/14"))),
                ),
            ),
        ),
        initial_experiment=zeta,
        initial_expected_value=_f("2195/1716"),
        initial_verdict="harmful",
    )
    return game, expected


def _beerquiche() -> tuple[Game, ExpectedResults]:
    # Two types (weak, strong), two messages (beer, quiche), two receiver
    # actions (fight, not fight).  Payoff pairs from the game tree,
    # sender first; the receiver gets an extra unit for acting correctly
    # after quiche, which breaks message-independence.
    states = ("tW", "tS")
    messages = ("B", "Q")
    actions = ("F", "NF")
    pairs = {
        ("tW", "B"): {"F": ("0", "1"), "NF": ("2", "0")},
        ("tW", "Q"): {"F": ("1", "2"), "NF": ("3", "0")},
        ("tS", "B"): {"F": ("1", "0"), "NF": ("3", "1")},
        ("tS", "Q"): {"F": ("0", "0"), "NF": ("2", "2")},
    }
    sender = tuple(
        tuple(tuple(_f(pairs[s, m][a][0]) for a in actions) for m in messages)
        for s in states
    )
    receiver = tuple(
        tuple(tuple(_f(pairs[s, m][a][1]) for a in actions) for m in messages)
        for s in states
    )
    prior = Belief.from_values(("2/5", "3/5"))
    game = Game(states, messages, actions, sender, receiver, prior)
    slice_ = full_binary_slice(game)

    expected = ExpectedResults(
        name="lemma7-beerquiche",
        note=(
            "With t the weight on the strong type: below 1/2 the weak "
            "type mixes onto beer with odds t/(1-t), the receiver mixes "
            "after beer, and the value is 2 - 3t; from 1/2 on the types "
            "pool on quiche and the value is 2t. The upward jump at 1/2 "
            "makes a straddling experiment harmful."
        ),
        values=(
            ExpectedValue("t=2/5", slice_.belief_at(_f("2/5")), _f("4/5"),
                          "semi-pooling branch"),
            ExpectedValue("t=3/5", slice_.belief_at(_f("3/5")), _f("6/5"),
                          "pooling branch"),
        ),
        pooling=(
            ExpectedValue("t=3/5", slice_.belief_at(_f("3/5")), _f("6/5"),
                          "best message/action pair against the prior"),
        ),
        slice=slice_,
        segments=(
            Segment(_f("0"), _f("1/2"), _f("2"), _f("-3"), closed_right=False),
            Segment(_f("1/2"), _f("1"), _f("0"), _f("2")),
        ),
        kink=Kink(_f("1/2"), _f("1"), _f("1/2")),
        harmful_splits=(HarmfulSplit(_f("11/20"), _f("9/20"), _f("13/20"), _f("1/8")),),
    )
    return game, expected


_BUILDERS = {
    "lemma5-fourstate": _fourstate,
    "lemma6-transparent": _transparent,
    "lemma7-beerquiche": _beerquiche,
}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


def builtin_game(name: str) -> tuple[Game, ExpectedResults]:
    """Look up a built-in game and its expected results by name."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(builtin_names())
        raise KeyError(f"unknown builtin {name!r}; valid names: {known}") from None
    return builder()


def builtin_slice(name: str) -> BeliefSlice:
    """The named one-dimensional prior family of a built-in game."""
    _, expected = builtin_game(name)
    if expected.slice is None:
        raise KeyError(f"builtin {name!r} has no associated slice")
    return expected.slice
