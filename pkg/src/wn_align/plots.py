"""
SVG figures of an analysis report.
"""

import logging
import math

from pathlib import Path
from typing import List, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from wn_align.elicitation import Relation  # noqa: E402
from wn_align.report import AnalysisReport  # noqa: E402


logger = logging.getLogger(__name__)

FIGURES_DIR = "figures"
GOLDEN_MEAN = (math.sqrt(5) - 1.0) / 2.0
FIG_WIDTH = 7.1
STATUS_COLORS = {"matched": "#2b8cbe", "missing": "#bdbdbd", "mismatched": "#e6550d"}
GROUP_COLORS = {"matched": "#2b8cbe", "missing": "#7bccc4", "unrelated": "#bdbdbd"}

PARAMS = {
    "axes.labelsize": 9,
    "font.family": "sans-serif",
    "font.sans-serif": ["DejaVu Sans"],
    "font.size": 8,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": [FIG_WIDTH, FIG_WIDTH * GOLDEN_MEAN],
    "lines.linewidth": 1,
    "lines.markersize": 3,
    "svg.fonttype": "none",
    "svg.hashsalt": "wn-align",
}


def _save(fig: plt.Figure, path: Path, tight: bool = True) -> Path:
    if tight:
        fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _status_bars(ax: plt.Axes, frame: pd.DataFrame, title: str) -> None:
    relations = [r.value for r in Relation]
    bottom = np.zeros(len(relations))
    for status, color in STATUS_COLORS.items():
        shares = (
            frame[frame["status"] == status].set_index("relation")["share"].reindex(relations)
        ).fillna(0.0).to_numpy()
        ax.bar(relations, shares, bottom=bottom, color=color, label=status)
        bottom += shares
    ax.set_ylim(0, 1)
    ax.set_ylabel("share of triplets")
    ax.set_title(title)
    ax.legend(loc="upper right")


def plot_status_distribution(report: AnalysisReport, path: Path) -> Path:
    fig, ax = plt.subplots()
    _status_bars(ax, report.status_dist[report.status_dist["subset"] == "all"], "All triplets")
    return _save(fig, path)


def plot_status_distribution_hapax(report: AnalysisReport, path: Path) -> Path:
    fig, axes = plt.subplots(1, 2, sharey=True)
    for ax, (subset, title) in zip(axes, [("hapax", "Hapaxes"), ("non_hapax", "Non-hapaxes")]):
        _status_bars(ax, report.status_dist[report.status_dist["subset"] == subset], title)
    return _save(fig, path)


def plot_match_rate_curves(report: AnalysisReport, path: Path) -> Path:
    fig, axes = plt.subplots(2, 3, sharex=True, sharey=True)
    for ax, relation in zip(axes.flat, Relation):
        curve = report.curves[relation]
        ax.plot(curve["threshold"], curve["match_rate"], color="#08589e")
        ax.set_title(relation.value)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
    for ax in axes[-1]:
        ax.set_xlabel("frequency threshold")
    for ax in axes[:, 0]:
        ax.set_ylabel("match rate")
    return _save(fig, path)


def matrix_grid(frame: pd.DataFrame) -> np.ndarray:
    """
    Documented x elicited likelihood grid; the diagonal and columns without any mismatch
    are NaN.
    """
    relations = [r.value for r in Relation]
    grid = np.full((len(relations), len(relations)), np.nan)
    for row in frame.itertuples(index=False):
        grid[relations.index(row.documented), relations.index(row.elicited)] = row.likelihood
    for j, relation in enumerate(relations):
        if not (frame[frame["elicited"] == relation]["mass"] > 0).any():
            grid[:, j] = np.nan
    return grid


def plot_mismatch_matrix(report: AnalysisReport, path: Path) -> Path:
    relations = [r.value for r in Relation]
    panels = [
        ("All", report.matrix),
        ("Abstract", report.matrix_abstract),
        ("Physical", report.matrix_physical),
    ]
    fig, axes = plt.subplots(1, 3, figsize=(FIG_WIDTH, FIG_WIDTH / 3 + 0.6))
    for ax, (title, frame) in zip(axes, panels):
        grid = np.ma.masked_invalid(matrix_grid(frame))
        image = ax.imshow(grid, vmin=0, vmax=1, cmap="Blues")
        ax.set_xticks(range(len(relations)))
        ax.set_xticklabels(relations)
        ax.set_yticks(range(len(relations)))
        ax.set_yticklabels(relations)
        ax.set_xlabel("elicited")
        ax.set_title(title)
    axes[0].set_ylabel("documented")
    fig.colorbar(image, ax=list(axes), shrink=0.8)
    return _save(fig, path, tight=False)


def plot_distances(report: AnalysisReport, path: Path) -> Path:
    fig, axes = plt.subplots(1, 2, sharey=True)
    for ax, relation in zip(axes, (Relation.HYP, Relation.HPO)):
        points = report.distances[report.distances["relation"] == relation.value]
        for direct, color, label in ((True, "#2b8cbe", "direct"), (False, "#e6550d", "indirect")):
            subset = points[points["direct"] == direct]
            ax.scatter(subset["distance"], subset["frequency"], color=color, label=label, s=6)
        ax.set_title(relation.value)
        ax.set_xlabel("hypernym distance")
        ax.legend(loc="upper right")
    axes[0].set_ylabel("elicitation frequency")
    return _save(fig, path)


def plot_gloss_similarity(report: AnalysisReport, path: Path) -> Path:
    fig, ax = plt.subplots()
    relations = [r.value for r in Relation]
    x = np.arange(len(relations))
    width = 0.8 / len(GROUP_COLORS)
    gloss = report.gloss
    for i, (group, color) in enumerate(GROUP_COLORS.items()):
        means = gloss[gloss["group"] == group].set_index("relation")["mean"].reindex(relations)
        ax.bar(x + (i - 1) * width, means.fillna(0.0).to_numpy(), width, color=color, label=group)
    ax.set_xticks(x)
    ax.set_xticklabels(relations)
    ax.set_ylim(0, 1)
    ax.set_ylabel("gloss similarity")
    ax.legend(loc="upper right")
    return _save(fig, path)


FIGURES = {
    "status_distribution.svg": plot_status_distribution,
    "status_distribution_hapax.svg": plot_status_distribution_hapax,
    "match_rate_curves.svg": plot_match_rate_curves,
    "mismatch_matrix.svg": plot_mismatch_matrix,
    "distances.svg": plot_distances,
    "gloss_similarity.svg": plot_gloss_similarity,
}


def emit_plots(report: AnalysisReport, output_dir: Union[str, Path]) -> List[Path]:
    """
    Render every figure of a report as SVG under `output_dir`/figures.

    The gloss similarity figure is only drawn when the report holds the gloss study.

    Args:
        report: A complete report.
        output_dir: The report directory.

    Returns:
        The written files.
    """
    directory = Path(output_dir) / FIGURES_DIR
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    with matplotlib.rc_context(PARAMS):
        for name, plot in FIGURES.items():
            if name == "gloss_similarity.svg" and report.gloss is None:
                continue
            written.append(plot(report, directory / name))
    logger.info("Wrote %d figures to %s.", len(written), directory)
    return written
