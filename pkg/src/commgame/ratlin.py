"""Exact rational linear algebra and linear programming.

Everything in this module works over arbitrary-precision rationals.  The
scalar type is the standard library Fraction, re-exported as Rational;
it already guarantees reduced form with a positive denominator and
parses/prints the "p/q" notation used in our file formats.  Floats never
appear except in the decimal formatting helper for reports, and even
that one is pure integer arithmetic underneath.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_RELATIONS = (LESS_EQUAL, EQUAL, GREATER_EQUAL)


def parse_rational(text: str) -> Rational:
    """Parse "p/q" or "p" into a Rational, rejecting anything else."""
    cleaned = text.strip()
    if not _RATIONAL_RE.match(cleaned):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(cleaned)


def format_rational(value: Rational) -> str:
    """Render a Rational as "p/q", or "p" when the denominator is 1."""
    return str(value)


def rational_to_decimal(value: Rational, places: int = 12) -> str:
    """Exact fixed-point decimal rendering, round half to even."""
    if places < 0:
        raise ValueError("places must be nonnegative")
    scaled = value * Fraction(10) ** places
    units = round(scaled)  # Fraction.__round__ is exact half-to-even
    sign = "-" if units < 0 else ""
    digits = str(abs(units)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


# ---------------------------------------------------------------------------
# linear systems


@dataclass(frozen=True)
class LinearSystem:
    """A system of linear equations: coefficients x = rhs."""

    coefficients: tuple[tuple[Rational, ...], ...]
    rhs: tuple[Rational, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != len(self.rhs):
            raise ValueError("row count mismatch between coefficients and rhs")
        widths = {len(row) for row in self.coefficients}
        if len(widths) > 1:
            raise ValueError("ragged coefficient rows")


@dataclass(frozen=True)
class SystemSolution:
    """Outcome of solve_linear_system.

    kind is one of "unique", "parametric", "inconsistent".  In the
    parametric case the full solution set is `solution + span(basis)`
    with free rational coefficients.
    """

    kind: str
    solution: tuple[Rational, ...] | None = None
    basis: tuple[tuple[Rational, ...], ...] = ()

    @property
    def is_unique(self) -> bool:
        return self.kind == "unique"


def solve_linear_system(system: LinearSystem) -> SystemSolution:
    """Exact Gauss-Jordan elimination with full solution classification."""
    rows = [list(row) + [b] for row, b in zip(system.coefficients, system.rhs)]
    if not rows:
        return SystemSolution("unique", solution=())
    ncols = len(rows[0]) - 1

    pivot_cols: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][c]
        rows[r] = [x / pivot for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(rows):
            break

    for i in range(r, len(rows)):
        if rows[i][ncols] != 0:
            return SystemSolution("inconsistent")

    particular = [ZERO] * ncols
    for i, c in enumerate(pivot_cols):
        particular[c] = rows[i][ncols]

    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    if not free_cols:
        return SystemSolution("unique", solution=tuple(particular))

    basis = []
    for fc in free_cols:
        vector = [ZERO] * ncols
        vector[fc] = ONE
        for i, c in enumerate(pivot_cols):
            vector[c] = -rows[i][fc]
        basis.append(tuple(vector))
    return SystemSolution("parametric", solution=tuple(particular), basis=tuple(basis))


# ---------------------------------------------------------------------------
# linear programs


@dataclass(frozen=True)
class Constraint:
    """coeffs . x  REL  rhs, with REL one of "<=", "=", ">="."""

    coeffs: tuple[Rational, ...]
    relation: str
    rhs: Rational

    def __post_init__(self) -> None:
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class LinearProgram:
    """Maximize objective . x subject to constraints.

    objective None means a pure feasibility problem.  lower_bounds, when
    given, holds one entry per variable: a Rational lower bound, or None
    for a free variable.  Omitting lower_bounds bounds every variable
    below by zero, which suits the probability-style variables that
    dominate this codebase.
    """

    objective: tuple[Rational, ...] | None
    constraints: tuple[Constraint, ...]
    lower_bounds: tuple[Rational | None, ...] | None = None

    def variable_count(self) -> int:
        if self.objective is not None:
            return len(self.objective)
        if self.constraints:
            return len(self.constraints[0].coeffs)
        if self.lower_bounds is not None:
            return len(self.lower_bounds)
        return 0


@dataclass(frozen=True)
class LpResult:
    """status is "optimal", "feasible", "infeasible" or "unbounded".

    witness holds a maximizer (or any feasible point for feasibility
    problems); value holds the objective value when one was requested.
    """

    status: str
    witness: tuple[Rational, ...] | None = None
    value: Rational | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "feasible")


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise AssertionError("fraction-free pivot produced a non-integer")
    return q


class _Tableau:
    """Fraction-free simplex tableau.

    True entries are rows[i][j] / den where den is the most recent pivot
    element (initially 1, always positive).  Integer pivoting keeps all
    entries integral, so signs and ratio tests are plain int compares.
    extras holds objective rows that are carried through every pivot.
    """

    __slots__ = ("rows", "extras", "den", "basis")

    def __init__(self, rows: list[list[int]], basis: list[int], extras: list[list[int]]):
        self.rows = rows
        self.extras = extras
        self.den = 1
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        if piv <= 0:
            raise AssertionError("pivot element must be positive")
        den = self.den
        prow = self.rows[r]

        def transform(row: list[int]) -> list[int]:
            f = row[c]
            if f == 0:
                if piv == den:
                    return row
                return [_exact_div(piv * a, den) for a in row]
            return [_exact_div(piv * a - f * b, den) for a, b in zip(row, prow)]

        self.rows = [row if i == r else transform(row) for i, row in enumerate(self.rows)]
        self.extras = [transform(row) for row in self.extras]
        self.den = piv
        self.basis[r] = c


def _bland_run(tab: _Tableau, which: int, allowed: int) -> str:
    """Simplex iterations under Bland's rule on objective row `which`.

    Only columns below `allowed` may enter the basis, which is how the
    artificial block stays locked out.  Returns "optimal" or "unbounded".
    """
    while True:
        obj = tab.extras[which]
        entering = None
        for j in range(allowed):
            if obj[j] < 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        leaving = None
        for i, row in enumerate(tab.rows):
            if row[entering] > 0:
                if leaving is None:
                    leaving = i
                else:
                    a = row[-1] * tab.rows[leaving][entering]
                    b = tab.rows[leaving][-1] * row[entering]
                    if a < b or (a == b and tab.basis[i] < tab.basis[leaving]):
                        leaving = i
        if leaving is None:
            return "unbounded"
        tab.pivot(leaving, entering)


def _integerize(values: Sequence[Rational]) -> tuple[list[int], int]:
    """Scale a rational row to integers; returns (row, scale factor)."""
    if not values:
        return [], 1
    denom = lcm(*(v.denominator for v in values))
    return [int(v * denom) for v in values], denom


def lp_solve(program: LinearProgram) -> LpResult:
    """Two-phase exact simplex, Bland's rule throughout.

    Maximizes the objective when one is present; otherwise reports any
    feasible point.  Termination is guaranteed by Bland's rule, and all
    tableau arithmetic happens on integers.
    """
    nvars = program.variable_count()
    for con in program.constraints:
        if len(con.coeffs) != nvars:
            raise ValueError("constraint width does not match variable count")
    if program.objective is not None and len(program.objective) != nvars:
        raise ValueError("objective width does not match variable count")
    lower = program.lower_bounds
    if lower is None:
        lower = tuple(ZERO for _ in range(nvars))
    if len(lower) != nvars:
        raise ValueError("lower_bounds width does not match variable count")

    # substitute x = lb + xhat with xhat >= 0, splitting free variables
    # into a difference of two nonnegative parts
    col_of: list[tuple[int, int | None]] = []
    ncols = 0
    for lb in lower:
        if lb is None:
            col_of.append((ncols, ncols + 1))
            ncols += 2
        else:
            col_of.append((ncols, None))
            ncols += 1

    def expand(coeffs: Sequence[Rational]) -> tuple[list[Rational], Rational]:
        row = [ZERO] * ncols
        offset = ZERO
        for j, a in enumerate(coeffs):
            if a == 0:
                continue
            plus, minus = col_of[j]
            row[plus] += a
            if minus is not None:
                row[minus] -= a
            else:
                offset += a * lower[j]  # type: ignore[operator]
        return row, offset

    scaled_rows: list[list[int]] = []
    relations: list[str] = []
    for con in program.constraints:
        row, offset = expand(con.coeffs)
        ints, _ = _integerize(row + [con.rhs - offset])
        rel = con.relation
        if ints[-1] < 0:
            ints = [-x for x in ints]
            rel = {LESS_EQUAL: GREATER_EQUAL, GREATER_EQUAL: LESS_EQUAL, EQUAL: EQUAL}[rel]
        scaled_rows.append(ints)
        relations.append(rel)

    n_slack = sum(1 for rel in relations if rel != EQUAL)
    n_art = sum(1 for rel in relations if rel != LESS_EQUAL)
    art_start = ncols + n_slack
    total = art_start + n_art

    rows: list[list[int]] = []
    basis: list[int] = []
    art_row_ids: list[int] = []
    slack_at, art_at = ncols, art_start
    for ints, rel in zip(scaled_rows, relations):
        row = ints[:-1] + [0] * (n_slack + n_art) + [ints[-1]]
        if rel == LESS_EQUAL:
            row[slack_at] = 1
            basis.append(slack_at)
            slack_at += 1
        else:
            if rel == GREATER_EQUAL:
                row[slack_at] = -1
                slack_at += 1
            row[art_at] = 1
            basis.append(art_at)
            art_row_ids.append(len(rows))
            art_at += 1
        rows.append(row)

    extras: list[list[int]] = []
    obj_scale = 1
    obj_offset = ZERO
    if program.objective is not None:
        obj_row, obj_offset = expand(program.objective)
        obj_ints, obj_scale = _integerize(obj_row)
        extras.append([-x for x in obj_ints] + [0] * (n_slack + n_art) + [0])

    tab = _Tableau(rows, basis, extras)

    if n_art:
        w = [0] * (total + 1)
        for i in art_row_ids:
            for j, x in enumerate(rows[i]):
                w[j] -= x
        for j in range(art_start, total):
            w[j] = 0
        tab.extras.append(w)
        status = _bland_run(tab, len(tab.extras) - 1, art_start)
        if status != "optimal":
            raise AssertionError("phase 1 is bounded by construction")
        if tab.extras[-1][-1] != 0:
            return LpResult("infeasible")
        tab.extras.pop()
        # pivot out any artificial still basic at level zero
        for i in range(len(tab.rows)):
            if tab.basis[i] >= art_start:
                col = next((j for j in range(art_start) if tab.rows[i][j] != 0), None)
                if col is None:
                    continue  # 0 = 0 row; stays inert from here on
                if tab.rows[i][col] < 0:
                    tab.rows[i] = [-x for x in tab.rows[i]]
                tab.pivot(i, col)

    if program.objective is None:
        return LpResult("feasible", witness=_extract(tab, col_of, lower, ncols))

    status = _bland_run(tab, 0, art_start)
    if status == "unbounded":
        return LpResult("unbounded")
    value = Fraction(tab.extras[0][-1], tab.den * obj_scale) + obj_offset
    return LpResult("optimal", witness=_extract(tab, col_of, lower, ncols), value=value)


def _extract(tab: _Tableau, col_of, lower, ncols: int) -> tuple[Rational, ...]:
    """Read the basic solution back out in terms of the original variables."""
    xhat = [ZERO] * ncols
    for i, b in enumerate(tab.basis):
        if b < ncols:
            xhat[b] = Fraction(tab.rows[i][-1], tab.den)
    out = []
    for j, (plus, minus) in enumerate(col_of):
        if minus is None:
            out.append(lower[j] + xhat[plus])
        else:
            out.append(xhat[plus] - xhat[minus])
    return tuple(out)
