"""Finite sender-receiver games and belief primitives.

A game couples finite state, message and action sets with exact rational
payoff tensors indexed [state][message][action] and a default prior.
The parser accepts a compact document form in which a receiver table
that does not depend on the message is written two-dimensionally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .ratlin import Rational, ZERO, ONE, format_rational, parse_rational


class SchemaError(ValueError):
    """Raised when an input document fails validation."""


def _coerce(value: Any, where: str) -> Rational:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: expected a rational string, got {type(value).__name__}")


@dataclass(frozen=True)
class Belief:
    """A probability distribution over the states of a game."""

    probabilities: tuple[Rational, ...]

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.probabilities):
            raise ValueError("belief entries must be nonnegative")
        if sum(self.probabilities) != 1:
            raise ValueError("belief entries must sum to exactly 1")

    @classmethod
    def from_values(cls, values: Iterable[Any]) -> "Belief":
        return cls(tuple(_coerce(v, "belief entry") for v in values))

    @classmethod
    def point_mass(cls, size: int, index: int) -> "Belief":
        return cls(tuple(ONE if i == index else ZERO for i in range(size)))

    def __getitem__(self, index: int) -> Rational:
        return self.probabilities[index]

    def __len__(self) -> int:
        return len(self.probabilities)

    def __iter__(self):
        return iter(self.probabilities)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.probabilities) if p > 0)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(p) for p in self.probabilities) + ")"


@dataclass(frozen=True)
class BeliefSlice:
    """A one-dimensional affine family of beliefs.

    Points are base + t * direction for t in t_range.  The direction
    must sum to zero so every point stays on the probability simplex;
    validity at the two endpoints gives validity on the whole segment.
    """

    base: Belief
    direction: tuple[Rational, ...]
    t_range: tuple[Rational, Rational]

    def __post_init__(self) -> None:
        if len(self.direction) != len(self.base):
            raise ValueError("direction length does not match the belief length")
        if sum(self.direction) != 0:
            raise ValueError("slice direction must sum to zero")
        lo, hi = self.t_range
        if lo > hi:
            raise ValueError("empty t_range")
        for t in (lo, hi):
            self.belief_at(t)

    def belief_at(self, t: Rational) -> Belief:
        lo, hi = self.t_range
        if not lo <= t <= hi:
            raise ValueError(f"t={t} outside the slice range [{lo}, {hi}]")
        return Belief(tuple(b + t * d for b, d in zip(self.base, self.direction)))

    def grid(self, step: Rational) -> tuple[Rational, ...]:
        """Grid points lo, lo+step, ... up to hi (hi included only when hit exactly)."""
        if step <= 0:
            raise ValueError("step must be positive")
        lo, hi = self.t_range
        count = int((hi - lo) / step)
        return tuple(lo + k * step for k in range(count + 1))


def full_binary_slice(game: "Game") -> BeliefSlice:
    """The whole belief simplex of a two-state game, parameterized by the
    probability of the second state."""
    if game.n_states != 2:
        raise ValueError("full_binary_slice needs a two-state game")
    return BeliefSlice(
        Belief((ONE, ZERO)),
        (Fraction(-1), Fraction(1)),
        (ZERO, ONE),
    )


Tensor = tuple[tuple[tuple[Rational, ...], ...], ...]


@dataclass(frozen=True)
class Game:
    """A finite communication game between one sender and one receiver."""

    states: tuple[str, ...]
    messages: tuple[str, ...]
    actions: tuple[str, ...]
    sender_payoff: Tensor
    receiver_payoff: Tensor
    default_prior: Belief

    def __post_init__(self) -> None:
        for name, labels in (("states", self.states), ("messages", self.messages), ("actions", self.actions)):
            if not labels:
                raise ValueError(f"{name} must be nonempty")
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate {name} labels")
        for tensor_name, tensor in (("sender_payoff", self.sender_payoff), ("receiver_payoff", self.receiver_payoff)):
            if len(tensor) != len(self.states):
                raise ValueError(f"{tensor_name} has wrong state dimension")
            for srow in tensor:
                if len(srow) != len(self.messages):
                    raise ValueError(f"{tensor_name} has wrong message dimension")
                for mrow in srow:
                    if len(mrow) != len(self.actions):
                        raise ValueError(f"{tensor_name} has wrong action dimension")
        if len(self.default_prior) != len(self.states):
            raise ValueError("prior length does not match the state count")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_messages(self) -> int:
        return len(self.messages)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @cached_property
    def is_simple(self) -> bool:
        """True when the receiver's payoff ignores the message."""
        return all(
            row == srow[0]
            for srow in self.receiver_payoff
            for row in srow
        )

    @cached_property
    def is_cheap_talk(self) -> bool:
        """True when the sender's payoff ignores the message."""
        return all(
            row == srow[0]
            for srow in self.sender_payoff
            for row in srow
        )

    @cached_property
    def has_transparent_motives(self) -> bool:
        """Cheap talk where the sender's payoff also ignores the state."""
        return self.is_cheap_talk and all(
            srow[0] == self.sender_payoff[0][0] for srow in self.sender_payoff
        )

    def receiver_column(self, action: int) -> tuple[Rational, ...]:
        """Per-state receiver payoff of one action in a simple game.

        For two-action simple games these are the customary v (first
        action) and w (second action) vectors.
        """
        if not self.is_simple:
            raise ValueError("receiver_column is only meaningful for simple games")
        return tuple(srow[0][action] for srow in self.receiver_payoff)

    def message_index(self, message: int | str) -> int:
        """Resolve a message given by label or position."""
        if isinstance(message, str):
            try:
                return self.messages.index(message)
            except ValueError:
                raise ValueError(f"unknown message label {message!r}") from None
        if not 0 <= message < self.n_messages:
            raise ValueError(f"message index {message} out of range")
        return message


def best_response(game: Game, belief: Belief, message: int | str) -> tuple[tuple[int, ...], Rational]:
    """All receiver best replies to a belief after a message, with value.

    Returns (actions, value) where actions lists every maximizer in
    action order; ties are preserved, not broken.  The message may be
    given by label or by position.
    """
    message = game.message_index(message)
    if len(belief) != game.n_states:
        raise ValueError("belief length does not match the state count")
    best_value = None
    best_actions: list[int] = []
    for a in range(game.n_actions):
        value = sum(
            belief[s] * game.receiver_payoff[s][message][a]
            for s in range(game.n_states)
        )
        if best_value is None or value > best_value:
            best_value = value
            best_actions = [a]
        elif value == best_value:
            best_actions.append(a)
    return tuple(best_actions), best_value


def pooling_value(game: Game, belief: Belief) -> Rational:
    """Receiver value of hearing nothing: the best single reply.

    Maximized over messages; for simple games every message gives the
    same answer.
    """
    return max(best_response(game, belief, m)[1] for m in range(game.n_messages))


# ---------------------------------------------------------------------------
# document form


def parse_game(doc: Mapping[str, Any] | str) -> Game:
    """Build a Game from its document form (a mapping or JSON text).

    receiver_payoff may be given as a 2-D [state][action] table, which
    expands to a message-independent tensor; such games come out simple
    by construction.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise SchemaError("game document must be a mapping")

    for key in ("states", "messages", "actions", "sender_payoff", "receiver_payoff", "prior"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")

    def labels(key: str) -> tuple[str, ...]:
        raw = doc[key]
        if not isinstance(raw, Sequence) or isinstance(raw, str) or not raw:
            raise SchemaError(f"{key} must be a nonempty array of labels")
        if not all(isinstance(x, str) and x for x in raw):
            raise SchemaError(f"{key} must contain nonempty strings")
        return tuple(raw)

    states = labels("states")
    messages = labels("messages")
    actions = labels("actions")

    def cell(table: Any, s: int, m: int, a: int, name: str) -> Rational:
        where = f"{name} for ({states[s]}, {messages[m]}, {actions[a]})"
        try:
            value = table[s][m][a]
        except (IndexError, KeyError, TypeError):
            raise SchemaError(f"missing {where}") from None
        return _coerce(value, where)

    sender = tuple(
        tuple(
            tuple(cell(doc["sender_payoff"], s, m, a, "sender payoff") for a in range(len(actions)))
            for m in range(len(messages))
        )
        for s in range(len(states))
    )

    raw_receiver = doc["receiver_payoff"]
    if _looks_two_dimensional(raw_receiver):
        def rcell(s: int, a: int) -> Rational:
            where = f"receiver payoff for ({states[s]}, {actions[a]})"
            try:
                value = raw_receiver[s][a]
            except (IndexError, KeyError, TypeError):
                raise SchemaError(f"missing {where}") from None
            return _coerce(value, where)

        rows = tuple(tuple(rcell(s, a) for a in range(len(actions))) for s in range(len(states)))
        receiver = tuple(tuple(rows[s] for _ in messages) for s in range(len(states)))
    else:
        receiver = tuple(
            tuple(
                tuple(cell(raw_receiver, s, m, a, "receiver payoff") for a in range(len(actions)))
                for m in range(len(messages))
            )
            for s in range(len(states))
        )

    raw_prior = doc["prior"]
    if not isinstance(raw_prior, Sequence) or len(raw_prior) != len(states):
        raise SchemaError("prior must list one probability per state")
    prior_values = [_coerce(p, "prior entry") for p in raw_prior]
    if any(p < 0 for p in prior_values):
        raise SchemaError("prior entries must be nonnegative")
    if sum(prior_values) != 1:
        raise SchemaError("prior does not sum to 1")

    try:
        return Game(states, messages, actions, sender, receiver, Belief(tuple(prior_values)))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def _looks_two_dimensional(table: Any) -> bool:
    if not isinstance(table, Sequence) or isinstance(table, str) or not table:
        return False
    row = table[0]
    if not isinstance(row, Sequence) or isinstance(row, str) or not row:
        return False
    inner = row[0]
    return isinstance(inner, str) or not isinstance(inner, Sequence)


def game_to_doc(game: Game) -> dict[str, Any]:
    """Serialize a Game back to its document form.

    Simple games emit the compact 2-D receiver table, so parse and emit
    round-trip exactly.
    """
    doc: dict[str, Any] = {
        "states": list(game.states),
        "messages": list(game.messages),
        "actions": list(game.actions),
        "sender_payoff": [
            [[format_rational(x) for x in mrow] for mrow in srow]
            for srow in game.sender_payoff
        ],
    }
    if game.is_simple:
        doc["receiver_payoff"] = [
            [format_rational(x) for x in srow[0]] for srow in game.receiver_payoff
        ]
    else:
        doc["receiver_payoff"] = [
            [[format_rational(x) for x in mrow] for mrow in srow]
            for srow in game.receiver_payoff
        ]
    doc["prior"] = [format_rational(p) for p in game.default_prior]
    return doc


def load_game(path) -> Game:
    """Read and parse a game document from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_game(fh.read())
