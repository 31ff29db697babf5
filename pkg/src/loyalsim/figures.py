"""Rendering of result tables to PNG figures.

The CSV output is the primary artifact; these plots are a convenience so a
`run` leaves something eyeballable next to the data.  Layouts follow the
scenario semantics (revenue curves, critical-k curves, regime markers).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .harness import ResultTable

__all__ = ["render"]

_TARGET_COLORS = {"both": "tab:green", "owner1": "tab:orange",
                  "owner2": "tab:purple", "none": "tab:red"}


def _column(table: ResultTable, name: str):
    j = table.columns.index(name)
    return [row[j] for row in table.rows]


def render(table: ResultTable, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    scenario = table.scenario

    if scenario in ("fig3", "monopoly_sweep"):
        ax.plot(_column(table, "p"), _column(table, "revenue"), marker="o")
        ax.set_xlabel("base pay p")
        ax.set_ylabel("optimal program revenue")
    elif scenario == "fig4":
        n = _column(table, "n")
        ax.plot(n, _column(table, "r_hb"), marker="o", label="hyperbolic bonus")
        ax.plot(n, _column(table, "r_upper"), marker="s", label="upper bound")
        ax.plot(n, _column(table, "gap"), marker="^", label="over-subsidy gap")
        ax.set_xlabel("number of owner classes n")
        ax.set_ylabel("money")
        ax.legend()
    elif scenario in ("fig5", "fig6"):
        x_name = "ratio" if scenario == "fig5" else "k"
        xs = _column(table, x_name)
        rs = _column(table, "R_a")
        targets = _column(table, "target")
        for target in dict.fromkeys(targets):
            pts = [(x, r) for x, r, t in zip(xs, rs, targets) if t == target]
            ax.plot(*zip(*pts), marker="o", linestyle="none",
                    color=_TARGET_COLORS.get(target, "gray"), label=f"target={target}")
        ax.set_xlabel("price ratio p_b/p_a" if scenario == "fig5" else "heterogeneity k")
        ax.set_ylabel("platform a revenue")
        ax.legend()
    elif scenario == "fig7":
        xs = _column(table, "ratio")
        ax.plot(xs, _column(table, "r_llp"), marker="o", label="loyalty program")
        ax.plot(xs, _column(table, "r_signup"), marker="s", label="sign-up bonus")
        ax.set_xlabel("price ratio p_b/p_a")
        ax.set_ylabel("platform a revenue")
        ax.legend()
    elif scenario == "fig8":
        xs = _column(table, "ratio")
        for col, label in (("k_signup", "sign-up bonus"), ("k_llp", "loyalty program")):
            ys = [y if not math.isinf(y) else float("nan") for y in _column(table, col)]
            ax.plot(xs, ys, marker="o", label=label)
        ax.set_xlabel("price ratio p_b/p_a")
        ax.set_ylabel("critical heterogeneity k'")
        ax.set_yscale("log")
        ax.legend()
    else:
        # Generic fallback: first column against every numeric column.
        xs = _column(table, table.columns[0])
        for name in table.columns[1:]:
            ys = _column(table, name)
            if all(isinstance(y, (int, float)) for y in ys):
                ax.plot(xs, ys, marker="o", label=name)
        ax.set_xlabel(table.columns[0])
        ax.legend()

    ax.set_title(scenario)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
