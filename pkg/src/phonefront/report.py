"""Figure rendering for the evaluation commands.

Renders per-utterance rate distributions and bootstrap delta histograms to
image files next to the delimited evaluation output. Import stays lazy and
headless so the rest of the package never pays for matplotlib.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_rate_figure(per_utterance: Sequence[float], micro: float, metric: str,
                       path: str | Path,
                       ci: tuple[float, float] | None = None) -> None:
    """Box plot of per-utterance rates with the micro rate marked."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.boxplot([list(per_utterance)], tick_labels=[metric.upper()], showmeans=True)
    ax.axhline(micro, color="tab:red", linestyle="--", linewidth=1,
               label=f"micro = {micro:.4f}")
    if ci is not None:
        ax.axhspan(ci[0], ci[1], color="tab:red", alpha=0.12,
                   label="95% bootstrap CI")
    ax.set_ylabel(f"{metric.upper()} (lower is better)")
    ax.set_title(f"{metric.upper()} over {len(per_utterance)} utterances")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_delta_figure(deltas: Sequence[float], delta: float, metric: str,
                        path: str | Path,
                        ci: tuple[float, float] | None = None) -> None:
    """Histogram of resampled micro-rate differences (system B minus A)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.hist(list(deltas), bins=40, color="tab:blue", alpha=0.8)
    ax.axvline(0.0, color="black", linewidth=1)
    ax.axvline(delta, color="tab:red", linestyle="--", linewidth=1,
               label=f"delta = {delta:+.4f}")
    if ci is not None:
        ax.axvspan(ci[0], ci[1], color="tab:red", alpha=0.12,
                   label="95% bootstrap CI")
    ax.set_xlabel(f"{metric.upper()} difference (B - A)")
    ax.set_ylabel("resamples")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
