"""Command-line front end.

Subcommands parse game and experiment files (JSON, rational strings),
run the corresponding analysis, and emit a text report or CSV rows.
When a sweep or a harmful-split search writes delimited output, a
rendering of the curve is placed next to it as a PNG unless suppressed.

Exit status: 0 on success, 1 when an analysis is refused because the
game exceeds the dimension caps, 2 on any input problem.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .catalog import ExpectedResults, builtin_game, builtin_names
from .equilibrium import (
    Caps,
    CapsExceeded,
    DEFAULT_CAPS,
    assessment_to_doc,
    parse_assessment,
    receiver_optimal,
    verify_pbe,
)
from .experiments import blackwell_compare, load_experiment, posteriors_of
from .games import (
    Belief,
    BeliefSlice,
    Game,
    SchemaError,
    full_binary_slice,
    game_to_doc,
    load_game,
    pooling_value,
)
from .ratlin import format_rational, rational_to_decimal
from .valuefn import convexity_report, evaluate_initial_experiment, sweep


# ---------------------------------------------------------------------------
# argument parsing helpers


def _parse_rational(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{what} must be a rational like '3/10', got {text!r}")


def _parse_prior(text: str, game: Game) -> Belief:
    probs = tuple(_parse_rational(tok, "prior entry") for tok in text.split(","))
    if len(probs) != game.n_states:
        raise SchemaError(
            f"prior has {len(probs)} entries but the game has {game.n_states} states"
        )
    return Belief(probs)


def _parse_caps(text: str | None) -> Caps:
    if text is None:
        return DEFAULT_CAPS
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3 or not all(p.isdigit() and int(p) > 0 for p in parts):
        raise SchemaError("caps must be 'states,messages,actions' with positive integers")
    return Caps(int(parts[0]), int(parts[1]), int(parts[2]))


def _parse_slice(text: str) -> BeliefSlice:
    tokens = [tok.strip() for tok in text.split(",")]
    if len(tokens) < 5 or len(tokens) % 2 == 0:
        raise SchemaError(
            "slice must be 'b1,..,bn,d1,..,dn,lo:hi': a base belief, a "
            "direction of the same length, then the t range"
        )
    n = (len(tokens) - 1) // 2
    bounds = tokens[-1].split(":")
    if len(bounds) != 2:
        raise SchemaError("slice range must be 'lo:hi'")
    base = Belief(tuple(_parse_rational(tok, "slice base entry") for tok in tokens[:n]))
    direction = tuple(
        _parse_rational(tok, "slice direction entry") for tok in tokens[n : 2 * n]
    )
    lo = _parse_rational(bounds[0], "slice range bound")
    hi = _parse_rational(bounds[1], "slice range bound")
    return BeliefSlice(base, direction, (lo, hi))


def _game_source(args) -> tuple[Game, ExpectedResults | None]:
    """The game a command acts on: a file path or a --builtin name."""
    if getattr(args, "builtin", None):
        if args.game is not None:
            raise SchemaError("give a game file or --builtin, not both")
        game, expected = builtin_game(args.builtin)
        return game, expected
    if args.game is None:
        raise SchemaError("a game file or --builtin is required")
    return load_game(args.game), None


def _resolve_slice(args, game: Game, expected: ExpectedResults | None) -> BeliefSlice:
    if args.slice:
        return _parse_slice(args.slice)
    if expected is not None and expected.slice is not None:
        return expected.slice
    if game.n_states == 2:
        return full_binary_slice(game)
    raise SchemaError("this game has no default slice; pass --slice")


# ---------------------------------------------------------------------------
# report rendering


def _seq(values) -> str:
    return ", ".join(format_rational(v) for v in values)


def _classify(game: Game) -> str:
    bits = []
    if game.is_simple:
        bits.append("simple")
    if game.has_transparent_motives:
        bits.append("transparent motives")
    elif game.is_cheap_talk:
        bits.append("cheap talk")
    return ", ".join(bits) if bits else "general"


def _deliver(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _figure_path(out: str) -> str:
    return os.path.splitext(out)[0] + ".png"


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    game, _ = _game_source(args)
    prior = _parse_prior(args.prior, game) if args.prior else None
    record = receiver_optimal(game, prior, caps=_parse_caps(args.caps))
    lines = [
        f"game: {game.n_states} states, {game.n_messages} messages, "
        f"{game.n_actions} actions ({_classify(game)})",
        f"prior: {_seq(record.belief)}",
        f"V_T = {format_rational(record.value)}",
        f"pooling value = {format_rational(pooling_value(game, record.belief))}",
        f"witness pattern id: {record.pattern_id}",
        "induced posteriors:",
    ]
    for weight, posterior in posteriors_of(record.belief, record.induced).atoms:
        lines.append(f"  weight {format_rational(weight)} -> {_seq(posterior)}")
    lines.append("sender strategy:")
    for s, state in enumerate(game.states):
        lines.append(f"  {state}: {_seq(record.witness.sender.rows[s])}")
    lines.append("receiver strategy:")
    for m, message in enumerate(game.messages):
        lines.append(f"  {message}: {_seq(record.witness.receiver.rows[m])}")
    lines.append("beliefs:")
    for m, message in enumerate(game.messages):
        lines.append(f"  {message}: {_seq(record.witness.beliefs[m])}")
    _deliver("\n".join(lines) + "\n", args.out)
    if args.witness_out:
        doc = assessment_to_doc(game, record.witness)
        _deliver(json.dumps(doc, indent=2) + "\n", args.witness_out)
    return 0


def cmd_verify(args) -> int:
    game, _ = _game_source(args)
    prior = _parse_prior(args.prior, game) if args.prior else game.default_prior
    with open(args.assessment, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    report = verify_pbe(game, prior, parse_assessment(game, doc))
    lines = [f"assessment is a weak PBE: {'yes' if report.valid else 'no'}"]
    lines.extend(f"  {violation}" for violation in report.violations)
    _deliver("\n".join(lines) + "\n", args.out)
    return 0


def _sweep_for(args):
    game, expected = _game_source(args)
    slice = _resolve_slice(args, game, expected)
    step = _parse_rational(args.step, "step") if args.step else None
    curve = sweep(game, slice, step, caps=_parse_caps(args.caps))
    return game, curve


def _chosen_format(args) -> str:
    if args.format:
        return args.format
    if args.out and args.out.endswith(".csv"):
        return "csv"
    return "text"


def cmd_sweep(args) -> int:
    _, curve = _sweep_for(args)
    if _chosen_format(args) == "csv":
        text = _csv_text(
            ("t", "value_rational", "value_decimal", "witness_pattern_id"),
            (
                (
                    format_rational(s.t),
                    format_rational(s.value),
                    rational_to_decimal(s.value),
                    s.pattern_id,
                )
                for s in curve.samples
            ),
        )
    else:
        text = "".join(
            f"t={format_rational(s.t)}  value={format_rational(s.value)}  "
            f"decimal={rational_to_decimal(s.value)}  pattern={s.pattern_id}\n"
            for s in curve.samples
        )
    _deliver(text, args.out)
    if args.out and not args.no_figure:
        from .plotting import render_curve  # deferred: pulls in matplotlib

        render_curve(curve, _figure_path(args.out), title=args.builtin or args.game)
    return 0


def cmd_find_harmful(args) -> int:
    _, curve = _sweep_for(args)
    violations = () if len(curve.samples) < 3 else convexity_report(curve).violations
    if _chosen_format(args) == "csv":
        text = _csv_text(
            ("prior_t", "lo_t", "hi_t", "weight", "loss_rational", "loss_decimal"),
            (
                (
                    format_rational(v.prior_t),
                    format_rational(v.lo_t),
                    format_rational(v.hi_t),
                    format_rational(v.weight),
                    format_rational(v.loss),
                    rational_to_decimal(v.loss),
                )
                for v in violations
            ),
        )
    elif not violations:
        text = "no violating secants at this resolution\n"
    else:
        lines = [f"{len(violations)} violating secants"]
        lines.extend(
            f"prior t={format_rational(v.prior_t)} <- "
            f"{format_rational(v.lo_t)}, {format_rational(v.hi_t)}  "
            f"weight={format_rational(v.weight)}  loss={format_rational(v.loss)}"
            for v in violations
        )
        text = "\n".join(lines) + "\n"
    _deliver(text, args.out)
    if args.out and not args.no_figure:
        from .plotting import render_curve  # deferred: pulls in matplotlib

        render_curve(
            curve,
            _figure_path(args.out),
            violations=violations,
            title=args.builtin or args.game,
        )
    return 0


def cmd_experiment_eval(args) -> int:
    game, _ = _game_source(args)
    prior = _parse_prior(args.prior, game) if args.prior else game.default_prior
    initial = load_experiment(args.experiment)
    evaluation = evaluate_initial_experiment(
        game, prior, initial, caps=_parse_caps(args.caps)
    )
    lines = [f"baseline V_T = {format_rational(evaluation.baseline)}"]
    for o in evaluation.outcomes:
        lines.append(
            f"signal {o.signal}: weight {format_rational(o.weight)}, "
            f"posterior {_seq(o.posterior)}, value {format_rational(o.record.value)}"
        )
    lines.append(f"expected value = {format_rational(evaluation.expected_value)}")
    lines.append(f"verdict: {evaluation.verdict}")
    _deliver("\n".join(lines) + "\n", args.out)
    return 0


def cmd_blackwell(args) -> int:
    verdict = blackwell_compare(load_experiment(args.first), load_experiment(args.second))
    _deliver(verdict + "\n", args.out)
    return 0


def cmd_builtin(args) -> int:
    game, expected = builtin_game(args.name)
    if args.emit:
        path = args.out or f"{args.name}.json"
        _deliver(json.dumps(game_to_doc(game), indent=2) + "\n", path)
        print(f"wrote {path}")
        return 0
    lines = [
        f"{args.name}: {game.n_states} states, {game.n_messages} messages, "
        f"{game.n_actions} actions ({_classify(game)})",
        f"prior: {_seq(game.default_prior)}",
        f"note: {expected.note}",
    ]
    if expected.values:
        lines.append("expected values:")
        for ev in expected.values:
            lines.append(f"  {ev.label}: {format_rational(ev.value)}")
    _deliver("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commgame",
        description="Receiver-optimal equilibrium analysis of finite "
        "sender-receiver games in exact rational arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_game_source(p, with_positional=True):
        if with_positional:
            p.add_argument("game", nargs="?", help="game file (JSON)")
        p.add_argument(
            "--builtin",
            metavar="NAME",
            help="use a built-in game instead of a file "
            f"({', '.join(builtin_names())})",
        )
        p.add_argument("--caps", metavar="S,M,A", help="dimension caps (default 4,3,3)")

    def add_slice_arguments(p):
        p.add_argument(
            "--slice",
            metavar="SPEC",
            help="belief slice 'b1,..,bn,d1,..,dn,lo:hi' (defaults to the "
            "builtin's slice, or the full simplex of a two-state game)",
        )
        p.add_argument("--step", metavar="RAT", help="grid step (default: range/120)")
        p.add_argument("--format", choices=("text", "csv"))
        p.add_argument("--no-figure", action="store_true", help="skip the PNG rendering")

    analyze = sub.add_parser("analyze", help="receiver-optimal value at one prior")
    add_game_source(analyze)
    analyze.add_argument("--prior", metavar="CSV", help="comma-separated rationals")
    analyze.add_argument("--out", metavar="PATH")
    analyze.add_argument(
        "--witness-out", metavar="PATH", help="write the witness assessment as JSON"
    )
    analyze.set_defaults(func=cmd_analyze)

    verify = sub.add_parser("verify", help="check an assessment file for weak PBE")
    add_game_source(verify)
    verify.add_argument("assessment", help="assessment file (JSON)")
    verify.add_argument("--prior", metavar="CSV")
    verify.add_argument("--out", metavar="PATH")
    verify.set_defaults(func=cmd_verify)

    sweep_p = sub.add_parser("sweep", help="value curve along a belief slice")
    add_game_source(sweep_p)
    add_slice_arguments(sweep_p)
    sweep_p.add_argument("--out", metavar="PATH")
    sweep_p.set_defaults(func=cmd_sweep)

    harmful = sub.add_parser(
        "find-harmful", help="search a slice for harmful binary experiments"
    )
    add_game_source(harmful)
    add_slice_arguments(harmful)
    harmful.add_argument("--out", metavar="PATH")
    harmful.set_defaults(func=cmd_find_harmful)

    evaluate = sub.add_parser(
        "experiment-eval", help="price an initial experiment against no learning"
    )
    add_game_source(evaluate)
    evaluate.add_argument("experiment", help="experiment file (JSON)")
    evaluate.add_argument("--prior", metavar="CSV")
    evaluate.add_argument("--out", metavar="PATH")
    evaluate.set_defaults(func=cmd_experiment_eval)

    blackwell = sub.add_parser("blackwell", help="compare two experiment files")
    blackwell.add_argument("first")
    blackwell.add_argument("second")
    blackwell.add_argument("--out", metavar="PATH")
    blackwell.set_defaults(func=cmd_blackwell)

    builtin = sub.add_parser("builtin", help="describe or emit a built-in game")
    builtin.add_argument("name", choices=builtin_names())
    builtin.add_argument(
        "--emit", action="store_true", help="write the game file (default NAME.json)"
    )
    builtin.add_argument("--out", metavar="PATH")
    builtin.set_defaults(func=cmd_builtin)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapsExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
