"""File-output figures for value curves and secant diagnostics.

Rendering always goes through the Agg backend, so the command line
never opens a window; a figure is a side product written next to the
delimited report it illustrates.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .valuefn import SecantViolation, ValueCurve


def render_curve(
    curve: ValueCurve,
    path: str,
    violations: tuple[SecantViolation, ...] = (),
    max_secants: int = 3,
    title: str | None = None,
) -> None:
    """Plot a sampled value curve, overlaying the worst violating secants.

    Secants are ranked by loss; at most max_secants are drawn so a
    dense violation set does not blot out the curve.
    """
    value_at = {s.t: s.value for s in curve.samples}
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(
        [float(s.t) for s in curve.samples],
        [float(s.value) for s in curve.samples],
        marker=".",
        linewidth=1.0,
        color="tab:blue",
    )
    ranked = sorted(violations, key=lambda v: (-v.loss, v.prior_t, v.lo_t, v.hi_t))
    for v in ranked[:max_secants]:
        ax.plot(
            [float(v.lo_t), float(v.hi_t)],
            [float(value_at[v.lo_t]), float(value_at[v.hi_t])],
            linestyle="--",
            linewidth=1.0,
            color="tab:red",
        )
        ax.plot(
            [float(v.prior_t)],
            [float(value_at[v.prior_t])],
            marker="o",
            fillstyle="none",
            color="tab:red",
        )
    ax.set_xlabel("t")
    ax.set_ylabel("receiver value")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
