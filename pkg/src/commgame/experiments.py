"""Statistical experiments, posterior distributions and the Blackwell order.

An experiment maps states to distributions over signals.  Together with
a prior it induces a distribution over posterior beliefs whose mean is
the prior; that identity is enforced exactly on construction.  Blackwell
comparisons reduce to exact garbling feasibility programs, so they hold
for every prior at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .games import Belief, Game, SchemaError, _coerce, pooling_value
from .ratlin import (
    Constraint,
    LinearProgram,
    Rational,
    ZERO,
    ONE,
    format_rational,
    lp_solve,
)

FIRST_DOMINATES = "first_dominates"
SECOND_DOMINATES = "second_dominates"
EQUIVALENT = "equivalent"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Experiment:
    """A signal structure: one distribution over signals per state."""

    states: tuple[str, ...]
    signals: tuple[str, ...]
    kernel: tuple[tuple[Rational, ...], ...]

    def __post_init__(self) -> None:
        if not self.signals:
            raise ValueError("an experiment needs at least one signal")
        if len(self.kernel) != len(self.states):
            raise ValueError("kernel must have one row per state")
        for row in self.kernel:
            if len(row) != len(self.signals):
                raise ValueError("kernel rows must have one entry per signal")
            if any(p < 0 for p in row):
                raise ValueError("kernel entries must be nonnegative")
            if sum(row) != 1:
                raise ValueError("kernel rows must sum to exactly 1")

    def column(self, j: int) -> tuple[Rational, ...]:
        return tuple(row[j] for row in self.kernel)


@dataclass(frozen=True)
class PosteriorDistribution:
    """Finitely many posterior beliefs with positive weights.

    Carries the prior it was generated from; the exact mean-equals-prior
    identity is validated on construction.
    """

    prior: Belief
    atoms: tuple[tuple[Rational, Belief], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("a posterior distribution needs at least one atom")
        if any(w <= 0 for w, _ in self.atoms):
            raise ValueError("atom weights must be positive")
        if sum(w for w, _ in self.atoms) != 1:
            raise ValueError("atom weights must sum to exactly 1")
        for s in range(len(self.prior)):
            mean = sum(w * post[s] for w, post in self.atoms)
            if mean != self.prior[s]:
                raise ValueError("posterior distribution does not average to the prior")

    def __len__(self) -> int:
        return len(self.atoms)


def uninformative(states: Sequence[str]) -> Experiment:
    """The one-signal experiment that reveals nothing."""
    return Experiment(tuple(states), ("null",), tuple((ONE,) for _ in states))


def posteriors_of(prior: Belief, experiment: Experiment) -> PosteriorDistribution:
    """Bayes-update the prior on every signal of positive probability."""
    if len(prior) != len(experiment.states):
        raise ValueError("prior length does not match the experiment's state count")
    atoms = []
    for j in range(len(experiment.signals)):
        weight = sum(prior[s] * experiment.kernel[s][j] for s in range(len(prior)))
        if weight == 0:
            continue
        posterior = Belief(
            tuple(prior[s] * experiment.kernel[s][j] / weight for s in range(len(prior)))
        )
        atoms.append((weight, posterior))
    return PosteriorDistribution(prior, tuple(atoms))


def experiment_of_strategy(game: Game, prior: Belief, sender) -> Experiment:
    """View a sender strategy as an experiment whose signals are messages."""
    if len(prior) != game.n_states:
        raise ValueError("prior length does not match the game")
    rows = sender.rows if hasattr(sender, "rows") else tuple(tuple(r) for r in sender)
    if len(rows) != game.n_states or any(len(r) != game.n_messages for r in rows):
        raise ValueError("sender strategy shape does not match the game")
    return Experiment(game.states, game.messages, tuple(tuple(row) for row in rows))


def compose(initial: Experiment, continuation: Mapping[str, Experiment]) -> Experiment:
    """Run a follow-up experiment after each signal of an initial one.

    The composed signal set is the pairs "y.m".  Every signal of the
    initial experiment that can occur must have a continuation; signals
    whose kernel column is identically zero may be omitted.
    """
    columns: list[tuple[str, int, Experiment, int]] = []
    for j, y in enumerate(initial.signals):
        reachable = any(initial.kernel[s][j] > 0 for s in range(len(initial.states)))
        if y not in continuation:
            if reachable:
                raise SchemaError(f"missing continuation for reachable signal {y!r}")
            continue
        follow = continuation[y]
        if follow.states != initial.states:
            raise ValueError(f"continuation for {y!r} has a different state set")
        for k in range(len(follow.signals)):
            columns.append((y, j, follow, k))

    signals = tuple(f"{y}.{follow.signals[k]}" for y, _, follow, k in columns)
    kernel = tuple(
        tuple(
            initial.kernel[s][j] * follow.kernel[s][k]
            for _, j, follow, k in columns
        )
        for s in range(len(initial.states))
    )
    return Experiment(initial.states, signals, kernel)


def _without_null_columns(experiment: Experiment) -> Experiment:
    keep = [
        j
        for j in range(len(experiment.signals))
        if any(row[j] > 0 for row in experiment.kernel)
    ]
    if len(keep) == len(experiment.signals):
        return experiment
    return Experiment(
        experiment.states,
        tuple(experiment.signals[j] for j in keep),
        tuple(tuple(row[j] for j in keep) for row in experiment.kernel),
    )


def _garbling_exists(source: Experiment, target: Experiment) -> bool:
    """Exact feasibility of target = source . G over row-stochastic G."""
    ns = len(source.signals)
    nt = len(target.signals)
    nvars = ns * nt
    constraints = []
    for i in range(ns):
        coeffs = [ZERO] * nvars
        for j in range(nt):
            coeffs[i * nt + j] = ONE
        constraints.append(Constraint(tuple(coeffs), "=", ONE))
    for s in range(len(source.states)):
        for j in range(nt):
            coeffs = [ZERO] * nvars
            for i in range(ns):
                coeffs[i * nt + j] = source.kernel[s][i]
            constraints.append(Constraint(tuple(coeffs), "=", target.kernel[s][j]))
    return lp_solve(LinearProgram(None, tuple(constraints))).ok


def blackwell_compare(first: Experiment, second: Experiment) -> str:
    """Place two experiments in the Blackwell order.

    Signals of probability zero in every state are dropped before the
    comparison, and the verdict is prior-independent.
    """
    if first.states != second.states:
        raise ValueError("experiments must share the state set")
    e1 = _without_null_columns(first)
    e2 = _without_null_columns(second)
    forward = _garbling_exists(e1, e2)
    backward = _garbling_exists(e2, e1)
    if forward and backward:
        return EQUIVALENT
    if forward:
        return FIRST_DOMINATES
    if backward:
        return SECOND_DOMINATES
    return INCOMPARABLE


def decision_value(prior: Belief, experiment: Experiment, game: Game) -> Rational:
    """Expected value of best-responding to each posterior separately.

    Only defined for simple games, where the receiver's problem does not
    depend on which message carried the information.
    """
    if not game.is_simple:
        raise ValueError("decision_value requires a simple game")
    distribution = posteriors_of(prior, experiment)
    return sum(w * pooling_value(game, post) for w, post in distribution.atoms)


# ---------------------------------------------------------------------------
# document form


def parse_experiment(doc: Mapping[str, Any] | str) -> Experiment:
    """Build an Experiment from its document form (mapping or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise SchemaError("experiment document must be a mapping")
    for key in ("states", "signals", "kernel"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    states = tuple(doc["states"])
    signals = tuple(doc["signals"])
    if not all(isinstance(x, str) and x for x in states + signals):
        raise SchemaError("states and signals must be nonempty strings")
    raw = doc["kernel"]
    if not isinstance(raw, Sequence) or len(raw) != len(states):
        raise SchemaError("kernel must have one row per state")
    kernel = []
    for s, row in enumerate(raw):
        if not isinstance(row, Sequence) or len(row) != len(signals):
            raise SchemaError(f"kernel row for state {states[s]!r} has the wrong length")
        kernel.append(
            tuple(_coerce(x, f"kernel entry ({states[s]}, {signals[j]})") for j, x in enumerate(row))
        )
    try:
        return Experiment(states, signals, tuple(kernel))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def experiment_to_doc(experiment: Experiment) -> dict[str, Any]:
    return {
        "states": list(experiment.states),
        "signals": list(experiment.signals),
        "kernel": [[format_rational(x) for x in row] for row in experiment.kernel],
    }


def load_experiment(path) -> Experiment:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_experiment(fh.read())
