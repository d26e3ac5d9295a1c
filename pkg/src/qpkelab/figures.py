"""Figure rendering for the report path.

All analytic curves, no Monte Carlo: attack success versus codeword
length, minimum codeword length versus threshold strength, and the
equality-test fooling probability versus register count. Rendering is
headless (Agg); every function writes one PNG and returns its path.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import (
    SecurityThreshold,
    p_success_closed,
    p_success_conditional,
    s_min_simple,
    s_min_tight,
)
from .symtest import q_closed_form

_FIGSIZE = (6.4, 4.2)
_DPI = 150


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def save_attack_success_curve(path: str, copies_list: Sequence[int], s_max: int) -> str:
    """Success probability of the compound attack, closed form vs double sum."""
    fig, ax = _new_axes(
        "Compound attack success vs codeword length",
        "codeword length s",
        "success probability",
    )
    lens = list(range(1, s_max + 1))
    for t in copies_list:
        closed = [p_success_closed(t, s) for s in lens]
        summed = [
            (p_success_conditional(t, s, 0) + p_success_conditional(t, s, 1)) / 2.0
            for s in lens
        ]
        (line,) = ax.plot(lens, closed, label=f"T={t} closed form")
        ax.plot(lens, summed, "o", color=line.get_color(), markersize=4, label=f"T={t} double sum")
    ax.axhline(0.5, color="gray", linestyle=":", linewidth=1, label="random guessing")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_codeword_bound_chart(
    path: str, copies_list: Sequence[int], exponents: Sequence[int]
) -> str:
    """Minimum codeword length against the advantage threshold 2^-k."""
    fig, ax = _new_axes(
        "Codeword length needed for advantage below 2^-k",
        "threshold exponent k",
        "minimum codeword length s",
    )
    for t in copies_list:
        tight = [s_min_tight(t, SecurityThreshold(2.0**-k)) for k in exponents]
        simple = [s_min_simple(t, SecurityThreshold(2.0**-k)) for k in exponents]
        (line,) = ax.plot(exponents, tight, label=f"T={t} tight")
        ax.plot(exponents, simple, "--", color=line.get_color(), label=f"T={t} simple")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_equality_test_curve(path: str, overlaps: Sequence[float], n_max: int) -> str:
    """Fooling probability of the equality test against register count."""
    fig, ax = _new_axes(
        "Equality test: outcome-zero probability",
        "registers N",
        "probability of outcome zero",
    )
    counts = list(range(1, n_max + 1))
    for lam in overlaps:
        ax.plot(counts, [q_closed_form(n, lam) for n in counts], marker="o", markersize=3, label=f"overlap {lam}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
