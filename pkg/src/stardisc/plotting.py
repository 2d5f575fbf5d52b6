"""Figures rendered next to the CSV/JSON reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .chaining import SUM_TARGET, CoefficientTable, SumSweep  # noqa: E402
from .core import PointSet  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_coefficients(table: CoefficientTable, path) -> None:
    """c_k against k on a log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = list(range(len(table.c)))
    ax.semilogy(ks, table.c, "o-", ms=3)
    ax.set_xlabel("level k")
    ax.set_ylabel(r"$c_{k,K}$")
    ax.set_title(f"K = {table.K}, sum = {table.full_sum:.8f}")
    ax.grid(True, which="both", alpha=0.3)
    _finish(fig, path)


def plot_sum_sweep(sweep: SumSweep, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    Ks = list(sweep.sums)
    ax.plot(Ks, [sweep.sums[K] for K in Ks], "-", lw=1.5, label=r"$\sum_k c_{k,K}$")
    ax.axhline(SUM_TARGET, color="k", ls="--", lw=1, label="8")
    ax.set_xlabel("K")
    ax.set_ylabel("coefficient sum")
    ax.set_ylim(min(sweep.sums.values()) - 0.1, SUM_TARGET + 0.1)
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    _finish(fig, path)


def plot_pointset(ps: PointSet, path) -> None:
    """Scatter of the first two coordinates (a strip plot when s = 1)."""
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    x = ps.coords[:, 0]
    y = ps.coords[:, 1] if ps.s > 1 else [0.5] * ps.N
    ax.scatter(x, y, s=6)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    ax.set_title(f"N = {ps.N}, s = {ps.s}")
    _finish(fig, path)
