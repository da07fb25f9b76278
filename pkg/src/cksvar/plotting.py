"""Figure rendering for the command-line report paths.

Figures are written next to the delimited output with the same stem.  The
Agg backend keeps rendering headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_path", "plot_limit", "plot_mc_report"]


def _save(fig, out_png: str) -> str:
    fig.tight_layout()
    fig.savefig(out_png, dpi=120)
    plt.close(fig)
    return out_png


def plot_path(t: np.ndarray, y: np.ndarray, x: np.ndarray, out_png: str) -> str:
    """Trajectory of y (with its negative part shaded) and the x block."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(t, y, lw=0.8, label="y")
    for j in range(x.shape[1]):
        ax.plot(t, x[:, j], lw=0.8, label=f"x{j + 1}")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.fill_between(t, np.minimum(y, 0.0), 0.0, color="tab:red", alpha=0.25, label="y below 0")
    ax.set_xlabel("t")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, out_png)


def plot_limit(lam: np.ndarray, Y: np.ndarray, X: np.ndarray, kind: str, out_png: str) -> str:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(lam, Y, lw=0.9, label="Y")
    for j in range(X.shape[0]):
        ax.plot(lam, X[j], lw=0.9, label=f"X{j + 1}")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("lambda")
    ax.set_title(kind)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, out_png)


def _ecdf(ax, sample: np.ndarray, **kw):
    xs = np.sort(sample)
    ys = np.arange(1, xs.size + 1) / xs.size
    ax.step(xs, ys, where="post", **kw)


def plot_mc_report(report, out_png: str) -> str:
    """Empirical CDF overlays, one panel per functional, largest sample size."""
    names = list(report.samples_limit)
    n_last = max(report.samples_model)
    fig, axes = plt.subplots(1, len(names), figsize=(4 * len(names), 3.4), squeeze=False)
    for ax, name in zip(axes[0], names):
        _ecdf(ax, report.samples_model[n_last][name], lw=1.0, label=f"paths n={n_last}")
        _ecdf(ax, report.samples_limit[name], lw=1.0, ls="--", label="limit")
        entry = report.ks[n_last][name]
        tag = f"KS={entry['ks']:.3f}" if entry.get("ks") is not None else f"median={entry['median']:.3f}"
        ax.set_title(f"{name}\n{tag}", fontsize=9)
        ax.legend(fontsize=7)
    return _save(fig, out_png)
