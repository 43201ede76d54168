"""Matplotlib figures for campaign reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import GREEN_BELOW, RED_ABOVE


def save_qvf_histogram(values, path, bins: int = 20, title: str = "") -> None:
    """QVF histogram with the classification thresholds marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(list(values), bins=bins, range=(0.0, 1.0), color="#5b84b1", edgecolor="white")
    ax.axvline(GREEN_BELOW, color="#4f9d5d", linestyle="--", linewidth=1.2,
               label=f"green/white ({GREEN_BELOW})")
    ax.axvline(RED_ABOVE, color="#d65a4a", linestyle="--", linewidth=1.2,
               label=f"white/red ({RED_ABOVE})")
    ax.set_xlabel("QVF")
    ax.set_ylabel("injections")
    ax.set_xlim(0.0, 1.0)
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
