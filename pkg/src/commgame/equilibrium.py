"""Receiver-optimal weak perfect Bayesian equilibria, exactly.

The search space is organized by support patterns: an assignment of a
nonempty message set to every sender type and a nonempty action set to
every on-path message.  Fixing a pattern splits the equilibrium
conditions into two independent linear systems:

* the sender side: with q_m(state) = prior * sigma_state(m) the
  receiver's optimality conditions (indifference inside each action
  support, weak preference against outside actions) are linear in
  sigma, and so is the receiver's expected payoff, which makes the best
  sigma for the pattern a small exact linear program;
* the receiver side: the sender's optimality conditions (indifference
  across each type's message support, deterrence of every other
  message) are linear in rho alone and do not mention the prior, so
  feasibility is decided once per pattern per game and reused across
  priors.

Both programs use weak inequalities, i.e. each pattern is solved over
its closure.  Closure points whose supports degenerate are still valid
weak PBE as assembled here, because every on-path action set is checked
in advance to be optimal under some belief, and messages whose
probability vanishes are assigned exactly such a belief.  Conversely
every weak PBE lies in the closure of its own literal pattern, so the
maximum over patterns is the receiver-optimal value.

Off-path messages get their beliefs from a feasibility search: each
candidate action support that is optimal under some belief is tried in
canonical order, jointly with the deterrence constraints, and the first
feasible one is kept.  For simple cheap-talk games the search is
skipped: copying any on-path message's response and belief both deters
(payoffs do not depend on the message) and stays optimal.

The enumeration order is fixed, and ties in value are broken by the
first pattern in that order; internal pruning (strictly dominated
messages, payoff-preserving message permutations, upper bounds) only
skips patterns that provably cannot win the tie.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Mapping, Sequence

from .experiments import Experiment, experiment_of_strategy, posteriors_of
from .games import Belief, Game, SchemaError, _coerce, best_response
from .ratlin import (
    Constraint,
    LinearProgram,
    ONE,
    Rational,
    ZERO,
    format_rational,
    lp_solve,
)


class CapsExceeded(Exception):
    """The game is larger than the enumeration caps allow."""


@dataclass(frozen=True)
class Caps:
    """Size limits for the support-pattern enumeration."""

    states: int = 4
    messages: int = 3
    actions: int = 3

    def check(self, game: Game) -> None:
        if (
            game.n_states > self.states
            or game.n_messages > self.messages
            or game.n_actions > self.actions
        ):
            raise CapsExceeded(
                f"game has {game.n_states} states, {game.n_messages} messages, "
                f"{game.n_actions} actions; enumeration is capped at "
                f"{self.states}/{self.messages}/{self.actions} "
                "(raise the caps explicitly to go beyond)"
            )


DEFAULT_CAPS = Caps()


def _check_rows(rows, count, width, what) -> None:
    if len(rows) != count:
        raise ValueError(f"{what} must have {count} rows")
    for row in rows:
        if len(row) != width:
            raise ValueError(f"{what} rows must have {width} entries")
        if any(p < 0 for p in row):
            raise ValueError(f"{what} entries must be nonnegative")
        if sum(row) != 1:
            raise ValueError(f"{what} rows must sum to exactly 1")


@dataclass(frozen=True)
class SenderStrategy:
    """One distribution over messages per state."""

    rows: tuple[tuple[Rational, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("sender strategy needs at least one row")
        _check_rows(self.rows, len(self.rows), len(self.rows[0]), "sender strategy")

    def support(self, state: int) -> tuple[int, ...]:
        return tuple(m for m, p in enumerate(self.rows[state]) if p > 0)


@dataclass(frozen=True)
class ReceiverStrategy:
    """One distribution over actions per message."""

    rows: tuple[tuple[Rational, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("receiver strategy needs at least one row")
        _check_rows(self.rows, len(self.rows), len(self.rows[0]), "receiver strategy")

    def support(self, message: int) -> tuple[int, ...]:
        return tuple(a for a, p in enumerate(self.rows[message]) if p > 0)


@dataclass(frozen=True)
class Assessment:
    """Strategies plus a belief for every message, on- or off-path."""

    sender: SenderStrategy
    receiver: ReceiverStrategy
    beliefs: tuple[Belief, ...]


@dataclass(frozen=True)
class SupportPattern:
    """Message supports per state and action supports per on-path message.

    receiver_supports holds None for off-path messages (no type sends
    them); their response is chosen later, during the off-path search.
    """

    sender_supports: tuple[tuple[int, ...], ...]
    receiver_supports: tuple[tuple[int, ...] | None, ...]

    def __post_init__(self) -> None:
        on_path = set()
        for support in self.sender_supports:
            if not support:
                raise ValueError("every type needs a nonempty message support")
            on_path.update(support)
        for m, support in enumerate(self.receiver_supports):
            if (m in on_path) != (support is not None):
                raise ValueError(
                    "receiver supports must cover exactly the on-path messages"
                )
            if support is not None and not support:
                raise ValueError("on-path action supports must be nonempty")

    def on_path(self) -> tuple[int, ...]:
        return tuple(
            m for m, support in enumerate(self.receiver_supports) if support is not None
        )


@dataclass(frozen=True)
class Violation:
    """One exact equilibrium condition that failed."""

    kind: str  # "bayes", "receiver" or "sender"
    detail: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.detail}"


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class ValueRecord:
    """The receiver-optimal outcome at one belief."""

    belief: Belief
    value: Rational
    witness: Assessment
    induced: Experiment
    pattern_id: int


# ---------------------------------------------------------------------------
# verification


def verify_pbe(game: Game, prior: Belief, assessment: Assessment) -> VerificationReport:
    """Check an assessment against the weak PBE conditions, exactly.

    Checks Bayes consistency of on-path beliefs, receiver optimality of
    every played action against the stated belief, and sender optimality
    of every supported message; each failure is reported with the
    offending state or message and the profitable deviation.
    """
    n, nm, nk = game.n_states, game.n_messages, game.n_actions
    sender, receiver, beliefs = assessment.sender, assessment.receiver, assessment.beliefs
    if len(prior) != n:
        raise ValueError("prior length does not match the game")
    if len(sender.rows) != n or len(sender.rows[0]) != nm:
        raise ValueError("sender strategy shape does not match the game")
    if len(receiver.rows) != nm or len(receiver.rows[0]) != nk:
        raise ValueError("receiver strategy shape does not match the game")
    if len(beliefs) != nm or any(len(b) != n for b in beliefs):
        raise ValueError("assessment needs one belief per message")

    violations = []

    for m in range(nm):
        mass = sum(prior[s] * sender.rows[s][m] for s in range(n))
        if mass > 0:
            for s in range(n):
                if beliefs[m][s] * mass != prior[s] * sender.rows[s][m]:
                    violations.append(Violation(
                        "bayes",
                        f"belief after {game.messages[m]} is not the Bayes "
                        f"posterior at state {game.states[s]}",
                    ))
                    break

    for m in range(nm):
        values = [
            sum(beliefs[m][s] * game.receiver_payoff[s][m][a] for s in range(n))
            for a in range(nk)
        ]
        top = max(values)
        for a in range(nk):
            if receiver.rows[m][a] > 0 and values[a] < top:
                better = game.actions[values.index(top)]
                violations.append(Violation(
                    "receiver",
                    f"after {game.messages[m]} the receiver plays "
                    f"{game.actions[a]} but strictly prefers {better}",
                ))

    for s in range(n):
        payoffs = [
            sum(receiver.rows[m][a] * game.sender_payoff[s][m][a] for a in range(nk))
            for m in range(nm)
        ]
        top = max(payoffs)
        for m in range(nm):
            if sender.rows[s][m] > 0 and payoffs[m] < top:
                better = game.messages[payoffs.index(top)]
                violations.append(Violation(
                    "sender",
                    f"type {game.states[s]} sends {game.messages[m]} but "
                    f"gains by deviating to {better}",
                ))

    return VerificationReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _mask_bits(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def enumerate_patterns(game: Game, caps: Caps = DEFAULT_CAPS) -> list[SupportPattern]:
    """The full, literal pattern list in canonical order.

    Sender supports run through an odometer over nonempty message
    subsets (last state fastest, subsets in numeric bitmask order), and
    for each the action supports run through an odometer over the
    on-path messages (last message fastest).  The position in this list
    is the pattern id reported by receiver_optimal.
    """
    caps.check(game)
    n, nm, nk = game.n_states, game.n_messages, game.n_actions
    patterns = []
    for smasks in itertools.product(range(1, 1 << nm), repeat=n):
        on_path = 0
        for mask in smasks:
            on_path |= mask
        live = _mask_bits(on_path)
        sender_supports = tuple(_mask_bits(mask) for mask in smasks)
        for rmasks in itertools.product(range(1, 1 << nk), repeat=len(live)):
            receiver_supports: list[tuple[int, ...] | None] = [None] * nm
            for m, rmask in zip(live, rmasks):
                receiver_supports[m] = _mask_bits(rmask)
            patterns.append(SupportPattern(sender_supports, tuple(receiver_supports)))
    return patterns


# ---------------------------------------------------------------------------
# the pattern solver


@dataclass(frozen=True)
class _RhoPlan:
    """Cached receiver-side solution for one pattern: full action rows
    and, per off-path message, either a belief witness or the on-path
    message to copy."""

    rows: tuple[tuple[Rational, ...], ...]
    off_path: tuple[tuple[int, Any], ...]  # (message, Belief | ("copy", m0))


class _Solver:
    """Per-game state: pruning tables and prior-independent caches."""

    def __init__(self, game: Game):
        self.game = game
        self.n = game.n_states
        self.nm = game.n_messages
        self.nk = game.n_actions
        self.amask_full = (1 << self.nk) - 1
        self._feasible_beliefs: dict[tuple[int, int], Belief | None] = {}
        self._rho_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], _RhoPlan | None] = {}
        self.allowed = self._undominated_masks()
        self.symmetry = self._message_symmetries()
        # ub_state[s][mask]: the most the receiver can get in state s when
        # the type's messages stay inside mask, over all actions.
        self.ub_state = [
            [
                max(
                    (max(game.receiver_payoff[s][m]) for m in _mask_bits(mask)),
                    default=ZERO,
                )
                for mask in range(1 << self.nm)
            ]
            for s in range(self.n)
        ]
        # rmax[s][m][amask]: the same with the actions after m restricted,
        # the per-combo refinement of ub_state.
        self.rmax = [
            [
                [ZERO]
                + [
                    max(game.receiver_payoff[s][m][a] for a in _mask_bits(amask))
                    for amask in range(1, 1 << self.nk)
                ]
                for m in range(self.nm)
            ]
            for s in range(self.n)
        ]

    # -- game-level precomputation

    def _undominated_masks(self) -> list[int]:
        """Per state, the messages whose best case is not beaten by some
        other message's worst case; the rest cannot be sent in any
        equilibrium, whatever the receiver does."""
        masks = []
        for s in range(self.n):
            safest = max(min(row) for row in self.game.sender_payoff[s])
            mask = 0
            for m in range(self.nm):
                if max(self.game.sender_payoff[s][m]) >= safest:
                    mask |= 1 << m
            masks.append(mask)
        return masks

    def _message_symmetries(self) -> list[tuple[int, ...]]:
        """Message permutations fixing both payoff tensors, identity excluded."""
        perms = []
        for perm in itertools.permutations(range(self.nm)):
            if perm == tuple(range(self.nm)):
                continue
            if all(
                self.game.sender_payoff[s][perm[m]] == self.game.sender_payoff[s][m]
                and self.game.receiver_payoff[s][perm[m]] == self.game.receiver_payoff[s][m]
                for s in range(self.n)
                for m in range(self.nm)
            ):
                perms.append(perm)
        return perms

    def _orbit_key(self, smasks: tuple[int, ...]) -> tuple[int, ...]:
        best = smasks
        for perm in self.symmetry:
            image = tuple(
                sum(1 << perm[m] for m in _mask_bits(mask)) for mask in smasks
            )
            if image < best:
                best = image
        return best

    def feasible_belief(self, message: int, amask: int) -> Belief | None:
        """A belief making every action in amask optimal after message,
        or None; cached, and message-independent for simple games."""
        key = (-1 if self.game.is_simple else message, amask)
        if key in self._feasible_beliefs:
            return self._feasible_beliefs[key]
        actions = _mask_bits(amask)
        rep = actions[0]
        constraints = [Constraint((ONE,) * self.n, "=", ONE)]
        payoff = self.game.receiver_payoff
        for a in actions[1:]:
            coeffs = tuple(
                payoff[s][message][rep] - payoff[s][message][a] for s in range(self.n)
            )
            constraints.append(Constraint(coeffs, "=", ZERO))
        for c in range(self.nk):
            if amask >> c & 1:
                continue
            coeffs = tuple(
                payoff[s][message][rep] - payoff[s][message][c] for s in range(self.n)
            )
            constraints.append(Constraint(coeffs, ">=", ZERO))
        result = lp_solve(LinearProgram(None, tuple(constraints)))
        belief = Belief(result.witness) if result.ok else None
        self._feasible_beliefs[key] = belief
        return belief

    # -- receiver side (prior-independent)

    def rho_plan(self, smasks: tuple[int, ...], rmasks: tuple[int, ...]) -> _RhoPlan | None:
        """Receiver rows satisfying the sender's optimality conditions
        for this pattern, plus off-path responses, or None."""
        key = (smasks, rmasks)
        if key in self._rho_cache:
            return self._rho_cache[key]
        live = [m for m in range(self.nm) if rmasks[m]]
        off = [m for m in range(self.nm) if not rmasks[m]]
        shortcut = self.game.is_simple and self.game.is_cheap_talk

        plan = None
        if shortcut:
            rows = self._solve_rho(smasks, rmasks, live, [], {})
            if rows is not None:
                m0 = live[0]
                full = list(rows)
                for m in off:
                    full[m] = rows[m0]
                plan = _RhoPlan(tuple(full), tuple((m, ("copy", m0)) for m in off))
        else:
            candidates = []
            for m in off:
                masks = [
                    amask
                    for amask in range(1, 1 << self.nk)
                    if self.feasible_belief(m, amask) is not None
                ]
                candidates.append(masks)
            for combo in itertools.product(*candidates):
                off_masks = dict(zip(off, combo))
                rows = self._solve_rho(smasks, rmasks, live, off, off_masks)
                if rows is not None:
                    plan = _RhoPlan(
                        tuple(rows),
                        tuple(
                            (m, self.feasible_belief(m, off_masks[m])) for m in off
                        ),
                    )
                    break

        self._rho_cache[key] = plan
        return plan

    def _solve_rho(self, smasks, rmasks, live, off, off_masks):
        """One joint feasibility program over all response rows."""
        layout: dict[int, tuple[int, tuple[int, ...]]] = {}
        nvars = 0
        for m in live:
            actions = _mask_bits(rmasks[m])
            layout[m] = (nvars, actions)
            nvars += len(actions)
        for m in off:
            actions = _mask_bits(off_masks[m])
            layout[m] = (nvars, actions)
            nvars += len(actions)

        def pay_into(coeffs, state, message, scale):
            base, actions = layout[message]
            for i, a in enumerate(actions):
                coeffs[base + i] += scale * self.game.sender_payoff[state][message][a]

        constraints = []
        for m, (base, actions) in layout.items():
            coeffs = [ZERO] * nvars
            for i in range(len(actions)):
                coeffs[base + i] = ONE
            constraints.append(Constraint(tuple(coeffs), "=", ONE))
        for s in range(self.n):
            support = _mask_bits(smasks[s])
            rep = support[0]
            for m in support[1:]:
                coeffs = [ZERO] * nvars
                pay_into(coeffs, s, rep, ONE)
                pay_into(coeffs, s, m, -ONE)
                constraints.append(Constraint(tuple(coeffs), "=", ZERO))
            for m in layout:
                if smasks[s] >> m & 1:
                    continue
                coeffs = [ZERO] * nvars
                pay_into(coeffs, s, m, ONE)
                pay_into(coeffs, s, rep, -ONE)
                constraints.append(Constraint(tuple(coeffs), "<=", ZERO))

        result = lp_solve(LinearProgram(None, tuple(constraints)))
        if not result.ok:
            return None
        rows = []
        for m in range(self.nm):
            row = [ZERO] * self.nk
            if m in layout:
                base, actions = layout[m]
                for i, a in enumerate(actions):
                    row[a] = result.witness[base + i]
            rows.append(tuple(row))
        return rows

    # -- sender side (per prior)

    def solve_combo(self, prior, smasks, rmasks, screen=False):
        """Best sigma for one full pattern at one prior.

        Returns (value, sigma_rows) or None when the receiver-side
        optimality region is empty.  rho feasibility is not consulted
        here.  With screen on, combos whose action supports force a
        message's probability to zero are dropped as well: their
        solutions recur under a smaller pattern earlier in the order.
        """
        n, nm = self.n, self.nm
        payoff = self.game.receiver_payoff
        live = [m for m in range(nm) if rmasks[m]]
        supporters = {m: [s for s in range(n) if smasks[s] >> m & 1] for m in live}
        mixing = {s for s in range(n) if smasks[s].bit_count() > 1 and prior[s] > 0}

        # messages supported by no mixing type have a fixed posterior
        pinned: dict[int, tuple[Rational, ...] | None] = {}
        for m in live:
            if any(s in mixing for s in supporters[m]):
                continue
            direction = tuple(
                prior[s] if smasks[s] >> m & 1 else ZERO for s in range(n)
            )
            pinned[m] = direction if any(direction) else None

        for m in live:
            actions = _mask_bits(rmasks[m])
            if m in pinned:
                if pinned[m] is None:
                    # dead message: only needs a supporting belief
                    if self.feasible_belief(m, rmasks[m]) is None:
                        return None
                    continue
                direction = pinned[m]
                values = [
                    sum(direction[s] * payoff[s][m][a] for s in range(n))
                    for a in range(self.nk)
                ]
                top = max(values)
                if any(values[a] != top for a in actions):
                    return None
            else:
                if self.feasible_belief(m, rmasks[m]) is None:
                    return None
                if screen and self._forces_dead(prior, supporters[m], m, actions):
                    return None

        # variables: one per (mixing state, supported message)
        index: dict[tuple[int, int], int] = {}
        for s in mixing:
            for m in _mask_bits(smasks[s]):
                index[s, m] = len(index)
        nvars = len(index)

        constant = ZERO
        objective = [ZERO] * nvars
        constraints = []
        for s in mixing:
            coeffs = [ZERO] * nvars
            for m in _mask_bits(smasks[s]):
                coeffs[index[s, m]] = ONE
            constraints.append(Constraint(tuple(coeffs), "=", ONE))

        for m in live:
            actions = _mask_bits(rmasks[m])
            rep = actions[0]
            if m in pinned:
                direction = pinned[m]
                if direction is not None:
                    constant += sum(
                        direction[s] * payoff[s][m][rep] for s in range(n)
                    )
                continue
            for s in supporters[m]:
                if s in mixing:
                    objective[index[s, m]] += prior[s] * payoff[s][m][rep]
                else:
                    constant += prior[s] * payoff[s][m][rep]
            for a, b in zip(actions, actions[1:]):
                coeffs = [ZERO] * nvars
                shift = ZERO
                for s in supporters[m]:
                    gap = payoff[s][m][a] - payoff[s][m][b]
                    if s in mixing:
                        coeffs[index[s, m]] = prior[s] * gap
                    else:
                        shift += prior[s] * gap
                constraints.append(Constraint(tuple(coeffs), "=", -shift))
            for c in range(self.nk):
                if rmasks[m] >> c & 1:
                    continue
                coeffs = [ZERO] * nvars
                shift = ZERO
                for s in supporters[m]:
                    gap = payoff[s][m][rep] - payoff[s][m][c]
                    if s in mixing:
                        coeffs[index[s, m]] = prior[s] * gap
                    else:
                        shift += prior[s] * gap
                constraints.append(Constraint(tuple(coeffs), ">=", -shift))

        if nvars == 0:
            sigma = self._sigma_rows(smasks, prior, {})
            return constant, sigma
        result = lp_solve(LinearProgram(tuple(objective), tuple(constraints)))
        if not result.ok:
            return None
        witness = {key: result.witness[i] for key, i in index.items()}
        sigma = self._sigma_rows(smasks, prior, witness)
        return constant + result.value, sigma

    def _forces_dead(self, prior, supporters, m, actions):
        """True when the optimality conditions for this action support can
        only hold with zero probability on the message."""
        payoff = self.game.receiver_payoff
        heard = [s for s in supporters if prior[s] > 0]
        if not heard:
            return False
        if len(actions) > 1:
            gaps = [payoff[s][m][actions[0]] - payoff[s][m][actions[1]] for s in heard]
            if all(g > 0 for g in gaps) or all(g < 0 for g in gaps):
                return True
        for c in range(self.nk):
            if c in actions:
                continue
            gaps = [payoff[s][m][actions[0]] - payoff[s][m][c] for s in heard]
            if all(g < 0 for g in gaps):
                return True
        return False

    def _sigma_rows(self, smasks, prior, witness):
        rows = []
        for s in range(self.n):
            support = _mask_bits(smasks[s])
            row = [ZERO] * self.nm
            if len(support) == 1:
                row[support[0]] = ONE
            elif prior[s] > 0:
                for m in support:
                    row[m] = witness[s, m]
            else:
                # never heard, so any distribution on the support works
                share = Fraction(1, len(support))
                for m in support:
                    row[m] = share
            rows.append(tuple(row))
        return tuple(rows)

    # -- assembly

    def assemble(self, prior, smasks, rmasks, sigma, plan: _RhoPlan) -> Assessment:
        beliefs: list[Belief | None] = [None] * self.nm
        masses = []
        for m in range(self.nm):
            mass = sum(prior[s] * sigma[s][m] for s in range(self.n))
            masses.append(mass)
            if mass > 0:
                beliefs[m] = Belief(
                    tuple(prior[s] * sigma[s][m] / mass for s in range(self.n))
                )
            elif rmasks[m]:
                beliefs[m] = self.feasible_belief(m, rmasks[m])
        for m, entry in plan.off_path:
            if isinstance(entry, Belief):
                beliefs[m] = entry
            else:
                beliefs[m] = beliefs[entry[1]]
        return Assessment(
            SenderStrategy(sigma), ReceiverStrategy(plan.rows), tuple(beliefs)
        )


@lru_cache(maxsize=24)
def _solver_for(game: Game) -> _Solver:
    return _Solver(game)


def _combo_count(nk: int, live: int) -> int:
    return ((1 << nk) - 1) ** live


def solve_pattern(game: Game, prior: Belief, pattern: SupportPattern) -> list[Assessment]:
    """Solve one pattern at one prior.

    Returns at most one assessment: the receiver-payoff-maximizing
    point of the pattern's closure, or an empty list when the closure
    holds no equilibrium.
    """
    if len(prior) != game.n_states:
        raise ValueError("prior length does not match the game")
    if len(pattern.sender_supports) != game.n_states:
        raise ValueError("pattern state dimension does not match the game")
    if len(pattern.receiver_supports) != game.n_messages:
        raise ValueError("pattern message dimension does not match the game")
    solver = _solver_for(game)
    smasks = tuple(
        sum(1 << m for m in support) for support in pattern.sender_supports
    )
    rmasks = tuple(
        sum(1 << a for a in support) if support is not None else 0
        for support in pattern.receiver_supports
    )
    solved = solver.solve_combo(prior, smasks, rmasks)
    if solved is None:
        return []
    plan = solver.rho_plan(smasks, rmasks)
    if plan is None:
        return []
    value, sigma = solved
    return [solver.assemble(prior, smasks, rmasks, sigma, plan)]


def _search(game, prior, caps, max_on_path, collect):
    """Shared engine behind receiver_optimal and optimal_assessments.

    Runs two passes over the canonical order: first the all-pure sender
    patterns (solved arithmetically, they seed a strong incumbent),
    then everything else.  Entries are compared by value first and
    canonical id second, which makes the processing order irrelevant to
    the reported winner.
    """
    caps.check(game)
    if len(prior) != game.n_states:
        raise ValueError("prior length does not match the game")
    solver = _solver_for(game)
    n, nm, nk = solver.n, solver.nm, solver.nk

    best_value: Rational | None = None
    best_id: int | None = None
    kept: list[tuple[int, tuple, tuple, tuple, Rational]] = []

    def consider(value, pid, smasks, rmasks, sigma):
        nonlocal best_value, best_id
        entry = (pid, smasks, rmasks, sigma, value)
        if best_value is None or value > best_value:
            best_value, best_id = value, pid
            kept.clear()
            kept.append(entry)
        elif value == best_value:
            if collect:
                kept.append(entry)
                best_id = min(best_id, pid)
            elif pid < best_id:
                best_id = pid
                kept[0] = entry

    def may_beat(bound, first_pid) -> bool:
        """Can anything at or below this bound, at or after this id,
        still change the outcome?"""
        if best_value is None or bound > best_value:
            return True
        return bound == best_value and (collect or first_pid < best_id)

    def run_combos(base, smasks, live, pure_only):
        fixed = None
        if pure_only:
            # every posterior is pinned; compute them once per message
            fixed = {}
            for m in live:
                direction = tuple(
                    prior[s] if smasks[s] >> m & 1 else ZERO for s in range(n)
                )
                total = sum(direction)
                if total == 0:
                    fixed[m] = None
                else:
                    posterior = Belief(tuple(d / total for d in direction))
                    fixed[m] = (total, best_response(game, posterior, m))
        for rindex, rmasks_live in enumerate(
            itertools.product(range(1, 1 << nk), repeat=len(live))
        ):
            pid = base + rindex
            rmasks = [0] * nm
            for m, rmask in zip(live, rmasks_live):
                rmasks[m] = rmask
            rmasks = tuple(rmasks)
            if pure_only:
                value = ZERO
                ok = True
                for m in live:
                    actions = _mask_bits(rmasks[m])
                    if fixed[m] is None:
                        if solver.feasible_belief(m, rmasks[m]) is None:
                            ok = False
                            break
                        continue
                    total, (argmax, top) = fixed[m]
                    if any(a not in argmax for a in actions):
                        ok = False
                        break
                    value += total * top
                if not ok or not may_beat(value, pid):
                    continue
                solved = (value, solver._sigma_rows(smasks, prior, {}))
            else:
                bound = sum(
                    prior[s]
                    * max(solver.rmax[s][m][rmasks[m]] for m in _mask_bits(smasks[s]))
                    for s in range(n)
                    if prior[s] > 0
                )
                if not may_beat(bound, pid):
                    continue
                solved = solver.solve_combo(prior, smasks, rmasks, screen=True)
                if solved is None or not may_beat(solved[0], pid):
                    continue
            if solver.rho_plan(smasks, rmasks) is None:
                continue
            consider(solved[0], pid, smasks, rmasks, solved[1])

    for pure_pass in (True, False):
        base = 0
        seen_orbits: set[tuple[int, ...]] = set()
        for smasks in itertools.product(range(1, 1 << nm), repeat=n):
            on_path = 0
            for mask in smasks:
                on_path |= mask
            live = _mask_bits(on_path)
            span = _combo_count(nk, len(live))
            is_pure = all(mask.bit_count() == 1 for mask in smasks)
            try:
                if is_pure != pure_pass:
                    continue
                if max_on_path is not None and len(live) > max_on_path:
                    continue
                if any(mask & ~allowed for mask, allowed in zip(smasks, solver.allowed)):
                    continue
                if solver.symmetry:
                    key = solver._orbit_key(smasks)
                    if key in seen_orbits:
                        continue
                    seen_orbits.add(key)
                bound = sum(
                    prior[s] * solver.ub_state[s][smasks[s]] for s in range(n)
                )
                if not may_beat(bound, base):
                    continue
                run_combos(base, smasks, live, is_pure)
            finally:
                base += span

    if best_value is None:
        raise RuntimeError(
            "internal completeness failure: no pattern admitted an equilibrium"
        )
    return solver, best_value, kept


def _build_record(solver, game, prior, entry) -> ValueRecord:
    pid, smasks, rmasks, sigma, value = entry
    plan = solver.rho_plan(smasks, rmasks)
    assessment = solver.assemble(prior, smasks, rmasks, sigma, plan)
    induced = experiment_of_strategy(game, prior, assessment.sender)
    return ValueRecord(prior, value, assessment, induced, pid)


def receiver_optimal(
    game: Game,
    prior: Belief | None = None,
    caps: Caps = DEFAULT_CAPS,
    max_on_path: int | None = None,
) -> ValueRecord:
    """The receiver-optimal weak PBE value and a witness at one prior.

    Ties are broken by the first pattern in canonical enumeration
    order.  max_on_path restricts the search to patterns with at most
    that many on-path messages (useful for cross-checking the two-state
    reduction).
    """
    prior = _pick_prior(game, prior)
    solver, _, kept = _search(game, prior, caps, max_on_path, collect=False)
    return _build_record(solver, game, prior, kept[0])


def optimal_assessments(
    game: Game,
    prior: Belief | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[ValueRecord, ...]:
    """Every value-maximizing pattern's witness, first id first.

    Witnesses inducing the same posterior distribution are collapsed,
    keeping the earliest pattern.
    """
    prior = _pick_prior(game, prior)
    solver, _, kept = _search(game, prior, caps, None, collect=True)
    records = []
    seen = set()
    for entry in sorted(kept, key=lambda e: e[0]):
        record = _build_record(solver, game, prior, entry)
        dist = posteriors_of(prior, record.induced)
        key = tuple(sorted((w, tuple(p)) for w, p in dist.atoms))
        if key in seen:
            continue
        seen.add(key)
        records.append(record)
    return tuple(records)


def _pick_prior(game: Game, prior: Belief | None) -> Belief:
    return game.default_prior if prior is None else prior


# ---------------------------------------------------------------------------
# document form


def assessment_to_doc(game: Game, assessment: Assessment) -> dict[str, Any]:
    return {
        "sender": [[format_rational(p) for p in row] for row in assessment.sender.rows],
        "receiver": [[format_rational(p) for p in row] for row in assessment.receiver.rows],
        "beliefs": [[format_rational(p) for p in b] for b in assessment.beliefs],
    }


def parse_assessment(game: Game, doc: Mapping[str, Any]) -> Assessment:
    for key in ("sender", "receiver", "beliefs"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")

    def grid(rows, what):
        if not isinstance(rows, Sequence) or isinstance(rows, str):
            raise SchemaError(f"{what} must be an array of arrays")
        return tuple(
            tuple(_coerce(x, f"{what} entry") for x in row) for row in rows
        )

    try:
        return Assessment(
            SenderStrategy(grid(doc["sender"], "sender")),
            ReceiverStrategy(grid(doc["receiver"], "receiver")),
            tuple(Belief(row) for row in grid(doc["beliefs"], "beliefs")),
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
