"""Figure rendering for the CLI report paths.

Each report command writes one or two PNG files next to its delimited
output. Rendering is headless (Agg backend) and optional via the
``figures`` config key.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .baselines import BaselineReport
from .classify import EvaluationReport
from .si import GroundTruthTable, SIResult

_DPI = 150


def plot_si_by_region(results: Sequence[SIResult], path: str | Path, title: str = "Superdiversity index") -> Path:
    path = Path(path)
    ordered = sorted(results, key=lambda r: r.region)
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(ordered)), 4))
    ax.bar([r.region for r in ordered], [r.si for r in ordered], color="#2b7bba")
    ax.set_ylabel("SI")
    ax.set_title(title)
    ax.tick_params(axis="x", rotation=60)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_si_vs_truth(
    results: Sequence[SIResult],
    truth: GroundTruthTable,
    path: str | Path,
    correlation: float | None = None,
) -> Path:
    path = Path(path)
    shared = [r for r in results if r.region in truth.rates]
    xs = [truth.rates[r.region] for r in shared]
    ys = [r.si for r in shared]
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(xs, ys, color="#2b7bba")
    for r, x, y in zip(shared, xs, ys):
        ax.annotate(r.region, (x, y), fontsize=7, xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel("ground-truth rate")
    ax.set_ylabel("SI")
    title = "SI vs ground truth"
    if correlation is not None:
        title += f" (r = {correlation:.3f})"
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_sweep_heatmap(
    rows: Sequence[tuple[float, float, float]],
    path: str | Path,
) -> Path:
    """Heatmap of mean r per (range threshold, entropy threshold)."""
    path = Path(path)
    range_values = sorted({r for r, _, _ in rows})
    entropy_values = sorted({s for _, s, _ in rows})
    grid = [[float("nan")] * len(entropy_values) for _ in range_values]
    for r_thr, s_thr, mean_r in rows:
        grid[range_values.index(r_thr)][entropy_values.index(s_thr)] = mean_r
    fig, ax = plt.subplots(figsize=(1.2 * len(entropy_values) + 2, 0.9 * len(range_values) + 2))
    image = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(entropy_values)), [f"{s:g}" for s in entropy_values])
    ax.set_yticks(range(len(range_values)), [f"{r:g}" for r in range_values])
    ax.set_xlabel("entropy threshold")
    ax.set_ylabel("range threshold")
    ax.set_title("mean correlation per threshold pair")
    for i in range(len(range_values)):
        for j in range(len(entropy_values)):
            ax.text(j, i, f"{grid[i][j]:.3f}", ha="center", va="center", fontsize=8, color="white")
    fig.colorbar(image, ax=ax, label="mean r")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_baselines(reports: Sequence[BaselineReport], path: str | Path) -> Path:
    path = Path(path)
    ordered = sorted(reports, key=lambda r: r.region)
    regions = [r.region for r in ordered]
    measures = [
        ("tweet_count", [r.tweet_count for r in ordered]),
        ("tweets_per_capita", [r.tweets_per_capita or 0.0 for r in ordered]),
        ("language_count", [r.language_count for r in ordered]),
        ("language_entropy", [r.language_entropy for r in ordered]),
        ("ttr", [r.ttr for r in ordered]),
    ]
    fig, axes = plt.subplots(len(measures), 1, figsize=(max(6, 0.4 * len(regions)), 2.2 * len(measures)), sharex=True)
    for ax, (name, values) in zip(axes, measures):
        ax.bar(regions, values, color="#777777")
        ax.set_ylabel(name, fontsize=8)
    axes[-1].tick_params(axis="x", rotation=60)
    fig.suptitle("baseline diversity measures")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_classification_reports(
    reports: Mapping[str, EvaluationReport],
    path: str | Path,
) -> Path:
    """Grouped bars of per-class F1 (with one-std error bars) per lexicon."""
    path = Path(path)
    names = list(reports)
    labels = next(iter(reports.values())).labels if reports else ()
    groups = [*labels, "accuracy"]
    width = 0.8 / max(len(names), 1)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for offset, name in enumerate(names):
        report = reports[name]
        means = [report.f1[label].mean for label in labels] + [report.accuracy.mean]
        stds = [report.f1[label].std for label in labels] + [report.accuracy.std]
        positions = [i + offset * width for i in range(len(groups))]
        ax.bar(positions, means, width=width, yerr=stds, capsize=3, label=name)
    ax.set_xticks([i + width * (len(names) - 1) / 2 for i in range(len(groups))], groups)
    ax.set_ylabel("F1 (accuracy for the last group)")
    ax.set_ylim(0, 1)
    ax.legend()
    ax.set_title("classification performance per lexicon")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
