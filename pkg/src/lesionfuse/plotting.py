"""Figures written next to batch reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from lesionfuse.metrics import EvalReport  # noqa: E402

CLASS_COLORS = {"benign": "tab:blue", "melanoma": "tab:red", "all": "0.4"}


def error_figure(report: EvalReport, path, title: str = "XOR error") -> None:
    """Per-image errors (left) and class mean +/- sigma (right)."""
    fig, (ax_img, ax_cls) = plt.subplots(
        1, 2, figsize=(9, 3.5), gridspec_kw={"width_ratios": [3, 1]}
    )
    scored = [r for r in report.per_image if r.epsilon is not None]
    xs = np.arange(len(scored))
    ax_img.bar(xs, [100 * r.epsilon for r in scored],
               color=[CLASS_COLORS.get(r.label, "0.6") for r in scored])
    ax_img.set_xticks(xs)
    ax_img.set_xticklabels([r.image for r in scored], rotation=60, ha="right", fontsize=7)
    ax_img.set_ylabel(r"$\varepsilon$ (%)")
    ax_img.set_title(title)

    labels = [s.label for s in report.aggregates]
    ax_cls.bar(np.arange(len(labels)), [s.mu for s in report.aggregates],
               yerr=[s.sigma for s in report.aggregates], capsize=4,
               color=[CLASS_COLORS.get(lbl, "0.6") for lbl in labels])
    ax_cls.set_xticks(np.arange(len(labels)))
    ax_cls.set_xticklabels(labels, rotation=30, ha="right")
    ax_cls.set_ylabel(r"$\mu \pm \sigma$ (%)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

