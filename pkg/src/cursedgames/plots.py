"""Region-map rendering to image files.

Kept separate from the sweep code so everything else imports without a
plotting backend.  The Agg backend is forced here: rendering always goes
to a file, never to a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .arith import as_float

IN_COLOR = "#2a6fb0"
OUT_COLOR = "#dcdcdc"


def render_region_map(region, path, dpi=150) -> None:
    """Render one region map to ``path`` (format from the extension).

    Two-axis maps get one panel per label with membership filled in;
    one-axis maps get stacked verdict strips along the parameter line.
    Scatter panels keep working when the point set is not a full grid.
    """
    if len(region.axes) == 1:
        _render_strips(region, path, dpi)
    else:
        _render_panels(region, path, dpi)


def _render_strips(region, path, dpi):
    labels = region.labels
    xs = [as_float(p[0]) for p in region.points]
    fig, ax = plt.subplots(figsize=(7.0, 1.4 + 0.5 * len(labels)))
    for row, label in enumerate(labels):
        flags = region.values[label]
        for color, keep in ((OUT_COLOR, False), (IN_COLOR, True)):
            picked = [x for x, f in zip(xs, flags) if f == keep]
            ax.scatter(
                picked, [row] * len(picked),
                marker="s", s=48, color=color, linewidths=0,
            )
    ax.set_yticks(range(len(labels)), labels)
    ax.set_ylim(-0.7, len(labels) - 0.3)
    ax.set_xlabel(region.axes[0])
    ax.set_title(f"{region.claim} regions")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def _render_panels(region, path, dpi):
    labels = region.labels
    xs = [as_float(p[0]) for p in region.points]
    ys = [as_float(p[1]) for p in region.points]
    # keep markers between visible and non-overlapping across grid sizes
    size = min(36.0, max(2.0, 36000.0 / max(1, len(region.points))))
    fig, axes = plt.subplots(
        1, len(labels),
        figsize=(3.4 * len(labels) + 0.8, 3.8),
        sharex=True, sharey=True, squeeze=False,
    )
    for ax, label in zip(axes[0], labels):
        colors = [
            IN_COLOR if f else OUT_COLOR for f in region.values[label]
        ]
        ax.scatter(xs, ys, c=colors, marker="s", s=size, linewidths=0)
        ax.set_title(label, fontsize=10)
        ax.set_xlabel(region.axes[0])
    axes[0][0].set_ylabel(region.axes[1])
    fig.suptitle(f"{region.claim} regions")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
