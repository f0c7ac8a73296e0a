"""Figure rendering for the report paths (headless matplotlib).

Two plots back the delimited reports: the label rank-frequency curve
(log-log, with the half-mass rank marked) and the plane-demand
histogram.  Both render to files; nothing here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import CorpusStats, LabelStats


def save_rank_frequency(stats: LabelStats, path: str) -> str:
    """Log-log rank/frequency curve with the p50 rank marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ranks = range(1, len(stats.rank_frequency) + 1)
    ax.loglog(ranks, stats.rank_frequency, marker=".", linestyle="-", linewidth=1)
    if stats.inventory_size:
        half_rank = max(1, round(stats.p50 * stats.inventory_size))
        ax.axvline(half_rank, color="tab:red", linestyle="--", linewidth=1)
        ax.annotate(
            f"half of all occurrences\nwithin top {half_rank} labels",
            xy=(half_rank, stats.rank_frequency[half_rank - 1]),
            xytext=(5, 5),
            textcoords="offset points",
            fontsize=8,
            color="tab:red",
        )
    ax.set_xlabel("label rank")
    ax.set_ylabel("frequency")
    ax.set_title(f"label inventory ({stats.inventory_size} distinct)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_plane_histogram(stats: CorpusStats, path: str) -> str:
    """Bar chart of the fraction of sentences needing each plane count."""
    fig, ax = plt.subplots(figsize=(6, 4))
    planes = sorted(stats.plane_histogram) or [1]
    fractions = [stats.plane_histogram.get(p, 0.0) for p in planes]
    ax.bar([str(p) for p in planes], [100.0 * f for f in fractions], color="tab:blue")
    for x, frac in enumerate(fractions):
        ax.text(x, 100.0 * frac, f"{100.0 * frac:.1f}", ha="center", va="bottom", fontsize=8)
    ax.set_xlabel("planes needed")
    ax.set_ylabel("% of sentences")
    ax.set_title(f"plane demand over {stats.n_sents} sentences")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
