from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

METRICS = (("f1", "F1"), ("roc_auc", "ROC AUC"), ("recall", "Recall"), ("precision", "Precision"))

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "axes.grid.axis": "y",
    "grid.alpha": 0.3,
    "legend.frameon": False,
    "savefig.dpi": 150,
    "svg.hashsalt": "pudetect",
}


def plot_comparison(report, path) -> None:
    """Grouped bars of the four test metrics per model, one panel per trial."""
    from .report import DISPLAY_NAMES

    trials = sorted({r.trial for r in report.results})
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(trials), figsize=(6.4 * len(trials), 3.6),
                                 squeeze=False)
        width = 0.8 / len(METRICS)
        for ax, trial in zip(axes[0], trials):
            rows = [r for r in report.results if r.trial == trial]
            pos = np.arange(len(rows))
            for k, (key, label) in enumerate(METRICS):
                vals = [100.0 * (getattr(r.metrics, key) or 0.0) if r.metrics else 0.0
                        for r in rows]
                ax.bar(pos + (k - 1.5) * width, vals, width, label=label)
            ax.set_xticks(pos)
            ax.set_xticklabels([DISPLAY_NAMES.get(r.model, r.model) for r in rows])
            ax.set_ylim(0, 105)
            ax.set_ylabel("score (%)")
            if len(trials) > 1:
                ax.set_title(f"trial {trial + 1}")
        axes[0][0].legend(loc="lower center", bbox_to_anchor=(0.5, 1.0), ncol=len(METRICS))
        fig.tight_layout()
        fig.savefig(path, format="png", metadata={"Software": None})
        plt.close(fig)
