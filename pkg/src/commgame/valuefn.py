"""The receiver's value as a function of the prior.

The optimal equilibrium value V(mu) of the communication game need not
be convex in the prior, so an informative initial experiment can leave
the receiver strictly worse off ex ante.  This module documents such
failures: a sweep evaluates V on a grid along a one-dimensional slice
of the simplex, a convexity report tests every grid secant against the
value at the straddled point, and an experiment evaluation prices a
concrete initial experiment by re-solving the game at each induced
posterior.

Everything is exact rational arithmetic.  A reported violation is a
fact about the game, not a numerical artifact; an empty report only
certifies convexity at the chosen grid resolution.
"""

from __future__ import annotations

from dataclasses import dataclass

from .equilibrium import DEFAULT_CAPS, Caps, ValueRecord, receiver_optimal
from .experiments import Experiment, compose, experiment_of_strategy
from .games import Belief, BeliefSlice, Game
from .ratlin import Rational

BENEFICIAL = "beneficial"
NEUTRAL = "neutral"
HARMFUL = "harmful"


@dataclass(frozen=True)
class CurveSample:
    """The solved game at one point of a slice."""

    t: Rational
    record: ValueRecord

    @property
    def value(self) -> Rational:
        return self.record.value

    @property
    def pattern_id(self) -> int:
        return self.record.pattern_id


@dataclass(frozen=True)
class ValueCurve:
    """V sampled on an ascending grid along a slice."""

    slice: BeliefSlice
    samples: tuple[CurveSample, ...]

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class SecantViolation:
    """A grid triple on which the value function fails the secant test.

    The prior at prior_t is the weight/(1 - weight) convex combination
    of the beliefs at lo_t and hi_t, yet the same combination of values
    falls short of the value at the prior by loss > 0.  The binary
    experiment splitting prior_t into those two posteriors is therefore
    strictly harmful.
    """

    prior_t: Rational
    lo_t: Rational
    hi_t: Rational
    weight: Rational
    loss: Rational


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    violations: tuple[SecantViolation, ...]


@dataclass(frozen=True)
class SignalOutcome:
    """One positive-probability signal of an initial experiment: its
    weight, the Bayes posterior, and the solved game at that posterior."""

    signal: str
    weight: Rational
    posterior: Belief
    record: ValueRecord


@dataclass(frozen=True)
class ExperimentEvaluation:
    """Ex-ante price of an initial experiment.

    expected_value is the weight-mixture of the per-signal optimal
    values; baseline is the value at the prior with no initial
    experiment; the verdict compares the two exactly.
    """

    prior: Belief
    initial: Experiment
    outcomes: tuple[SignalOutcome, ...]
    expected_value: Rational
    baseline: Rational
    verdict: str


def sweep(
    game: Game,
    slice: BeliefSlice,
    step: Rational | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> ValueCurve:
    """Solve the game at every grid point of the slice.

    The default step is 1/120 of the slice's parameter range.
    """
    if step is None:
        lo, hi = slice.t_range
        if hi == lo:
            raise ValueError("slice has zero length; provide an explicit step")
        step = (hi - lo) / 120
    samples = tuple(
        CurveSample(t, receiver_optimal(game, slice.belief_at(t), caps=caps))
        for t in slice.grid(step)
    )
    return ValueCurve(slice, samples)


def _slopes_nondecreasing(samples: tuple[CurveSample, ...]) -> bool:
    # cross-multiplied secant-slope comparison; grid t's are strictly
    # increasing, so both denominators are positive
    for a, b, c in zip(samples, samples[1:], samples[2:]):
        if (b.value - a.value) * (c.t - b.t) > (c.value - b.value) * (b.t - a.t):
            return False
    return True


def _secant_violations(
    samples: tuple[CurveSample, ...],
) -> tuple[SecantViolation, ...]:
    # A grid function with nondecreasing secant slopes is the restriction
    # of its convex piecewise-linear interpolant, so every straddling
    # secant passes; conversely a slope decrease is itself a violating
    # adjacent triple.  The O(n) slope check therefore decides emptiness
    # and the cubic enumeration runs only on genuine counterexamples.
    if _slopes_nondecreasing(samples):
        return ()
    found = []
    n = len(samples)
    for i in range(n):
        ti, vi = samples[i].t, samples[i].value
        for j in range(i + 1, n - 1):
            tj, vj = samples[j].t, samples[j].value
            for k in range(j + 1, n):
                tk, vk = samples[k].t, samples[k].value
                lam = (tk - tj) / (tk - ti)
                mixture = lam * vi + (1 - lam) * vk
                if mixture < vj:
                    found.append(SecantViolation(tj, ti, tk, lam, vj - mixture))
    return tuple(found)


def convexity_report(curve: ValueCurve) -> ConvexityReport:
    """Exact secant test over all sample triples of an existing curve."""
    if len(curve.samples) < 3:
        raise ValueError("convexity needs at least three samples")
    violations = _secant_violations(curve.samples)
    return ConvexityReport(not violations, violations)


def find_harmful_split(
    game: Game,
    slice: BeliefSlice,
    step: Rational | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[SecantViolation, ...]:
    """Search a slice grid for strictly harmful binary experiments.

    Sweeps the slice and reports every grid triple t1 < t < t2 whose
    value secant dips below the value at t.  An empty result means no
    violation exists at this resolution, not that none exists at all.
    """
    curve = sweep(game, slice, step, caps=caps)
    if len(curve.samples) < 3:
        return ()
    return _secant_violations(curve.samples)


def evaluate_initial_experiment(
    game: Game,
    prior: Belief,
    initial: Experiment,
    caps: Caps = DEFAULT_CAPS,
) -> ExperimentEvaluation:
    """Price an initial experiment against no learning at all.

    Each positive-probability signal leads to a Bayes posterior, the
    game is re-solved there, and the expectation of the optimal values
    is compared with the optimal value at the prior.
    """
    if len(prior) != len(initial.states):
        raise ValueError("prior length does not match the experiment's state count")
    if len(prior) != game.n_states:
        raise ValueError("prior length does not match the game")
    outcomes = []
    for j, signal in enumerate(initial.signals):
        weight = sum(prior[s] * initial.kernel[s][j] for s in range(len(prior)))
        if weight == 0:
            continue
        posterior = Belief(
            tuple(prior[s] * initial.kernel[s][j] / weight for s in range(len(prior)))
        )
        record = receiver_optimal(game, posterior, caps=caps)
        outcomes.append(SignalOutcome(signal, weight, posterior, record))
    expected = sum(o.weight * o.record.value for o in outcomes)
    baseline = receiver_optimal(game, prior, caps=caps).value
    if expected > baseline:
        verdict = BENEFICIAL
    elif expected < baseline:
        verdict = HARMFUL
    else:
        verdict = NEUTRAL
    return ExperimentEvaluation(
        prior, initial, tuple(outcomes), expected, baseline, verdict
    )


def composed_experiment(game: Game, evaluation: ExperimentEvaluation) -> Experiment:
    """The information the receiver ultimately holds.

    After each signal of the initial experiment the sender's equilibrium
    strategy at the induced posterior is itself an experiment; composing
    the two stages gives the experiment whose signals are (signal,
    message) pairs.  Its posterior distribution refines the initial one,
    yet it need not be Blackwell-comparable with the equilibrium
    experiment of the no-learning game.
    """
    continuation = {
        o.signal: experiment_of_strategy(game, o.posterior, o.record.witness.sender)
        for o in evaluation.outcomes
    }
    return compose(evaluation.initial, continuation)
