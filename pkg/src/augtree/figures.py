"""Render corpus-statistics figures next to the TSV report.

Uses the Agg backend so figure rendering works headless; nothing here touches
a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stats import CorpusStats

TOP_LABELS = 20


def _bar(ax, keys, values, title, xlabel, ylabel):
    ax.bar(range(len(keys)), values, color="#4878a8")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels([str(k) for k in keys], rotation=45, ha="right", fontsize=8)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)


def render_stats_figures(stats: CorpusStats, out_dir: "str | Path") -> list[Path]:
    """Write PNG figures for the length histogram, label inventories, and
    LOI distributions; returns the created paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    created = []

    if stats.length_hist:
        lengths = sorted(stats.length_hist)
        fig, ax = plt.subplots(figsize=(8, 4.5))
        _bar(ax, lengths, [stats.length_hist[n] for n in lengths],
             "Sentence length distribution", "tokens per sentence", "sentences")
        path = out_dir / "sentence_lengths.png"
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        created.append(path)

    for counter, stem, title in (
        (stats.upos_counts, "upos_inventory", "POS tag inventory"),
        (stats.deprel_counts, "deprel_inventory", "Dependency label inventory"),
    ):
        if not counter:
            continue
        items = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:TOP_LABELS]
        fig, ax = plt.subplots(figsize=(8, 4.5))
        _bar(ax, [k for k, _ in items], [v for _, v in items], title, "label", "tokens")
        path = out_dir / f"{stem}.png"
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        created.append(path)

    for name, dist in sorted(stats.loi_dist.items()):
        if not dist:
            continue
        keys = sorted(dist)
        fig, ax = plt.subplots(figsize=(6, 4))
        _bar(ax, keys, [dist[k] for k in keys],
             f"Label-of-interest attachments per sentence ({name})",
             "attachments", "sentences")
        path = out_dir / f"loi_distribution_{name}.png"
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        created.append(path)

    return created
