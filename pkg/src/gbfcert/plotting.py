"""Figures written next to the tabular CLI output."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _style(ax, xlabel, ylabel):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.tick_params(direction="out")


def plot_scan(rows, path, width=7.0):
    """t_p against p with the lower bound log2(p) - 2; applicable primes filled."""
    height = width * (math.sqrt(5) - 1) / 2
    fig, ax = plt.subplots(figsize=(width, height))
    ps = [r["p"] for r in rows]
    if ps:
        xs = [2 + k * (max(ps) - 2) / 200 for k in range(201)]
        ax.plot(xs, [math.log2(x) - 2 for x in xs], color="0.5", lw=1, ls="--",
                label=r"$\log_2 p - 2$")
    app = [r for r in rows if r["applicable"]]
    rest = [r for r in rows if not r["applicable"]]
    ax.scatter([r["p"] for r in app], [r["t_p"] for r in app], s=18, color="k",
               label="all hypotheses hold")
    ax.scatter([r["p"] for r in rest], [r["t_p"] for r in rest], s=18,
               facecolors="none", edgecolors="k", label="not applicable")
    _style(ax, "p", r"$t_p$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_census(census, path, width=7.0):
    """Stacked N/M/other sizes for every order-2 shift."""
    reports = census.reports
    labels = ["(" + ",".join(map(str, r.shift)) + ")" for r in reports]
    fig, ax = plt.subplots(figsize=(width, width * 0.5))
    xs = range(len(reports))
    n = [r.n_v for r in reports]
    m = [r.m_v for r in reports]
    o = [r.o_v for r in reports]
    ax.bar(xs, n, color="0.2", label=r"$F(\lambda)=F(\lambda+v)$")
    ax.bar(xs, m, bottom=n, color="0.6", label=r"$F(\lambda)=-F(\lambda+v)$")
    ax.bar(xs, o, bottom=[a + b for a, b in zip(n, m)], color="0.9", edgecolor="0.5",
           label="neither")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=45 if len(labels) > 8 else 0, fontsize=8)
    _style(ax, "shift v", "cells")
    ax.set_title(f"type {census.type}", fontsize=10)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
