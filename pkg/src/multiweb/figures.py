"""Matplotlib renderings of the emitted matrices and curve tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LinearSegmentedColormap, TwoSlopeNorm  # noqa: E402

# negative -> blue, zero -> white, positive -> orange
DIVERGING = LinearSegmentedColormap.from_list("blue_white_orange", ["tab:blue", "white", "tab:orange"])

STYLE = {
    "font.size": 10,
    "axes.titlesize": 11,
    "axes.labelsize": 10,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def plot_matrix(path, matrix, title="", tick_labels=None):
    matrix = np.asarray(matrix, dtype=float)
    bound = float(np.abs(matrix).max()) or 1.0
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 5))
        im = ax.imshow(matrix, cmap=DIVERGING, norm=TwoSlopeNorm(vcenter=0.0, vmin=-bound, vmax=bound),
                       interpolation="nearest")
        fig.colorbar(im, ax=ax, shrink=0.8)
        if tick_labels is not None and len(tick_labels) <= 30:
            ax.set_xticks(range(len(tick_labels)), tick_labels, rotation=90, fontsize=6)
            ax.set_yticks(range(len(tick_labels)), tick_labels, fontsize=6)
        ax.set_title(title)
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_tile_probabilities(path, rows, L, alpha_hat=None):
    """One curve per tile size: critical weight of a single tile against alpha."""
    sizes = sorted({r["size"] for r in rows})
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 4))
        for s in sizes:
            pts = [(r["alpha"], r["probability"]) for r in rows if r["size"] == s]
            xs, ys = zip(*pts)
            ax.plot(xs, ys, label=f"size {s}")
        if alpha_hat is not None:
            ax.axvline(float(alpha_hat), color="0.5", lw=0.8, ls="--")
        ax.set_xlabel(r"vertex density $\alpha$")
        ax.set_ylabel("critical tile probability")
        ax.set_title(f"L = {L}")
        ax.legend(frameon=False)
        fig.savefig(path)
        plt.close(fig)
    return path
