"""Multi-class classification metrics for scoring detector label files.

Accuracy is the proportion of correctly classified items; precision, recall,
and F1 are computed per class one-vs-rest with the 0/0 -> 0 convention, and
averaged both macro and support-weighted (class imbalance matters here).
"""
from __future__ import annotations

import numpy as np


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def classification_report(truth: dict[str, int], pred: dict[str, int],
                          classes: int) -> dict:
    """Score predictions against ground truth over class codes 0..classes-1.

    Every predicted id must exist in truth; unknown ids raise a ValueError
    listing them. Returns accuracy, per-class precision/recall/F1/support,
    macro and weighted averages, and the confusion matrix (rows = true).
    """
    if classes < 2:
        raise ValueError("classes must be >= 2")
    missing = sorted(set(pred) - set(truth))
    if missing:
        raise ValueError(f"predicted ids missing from truth: {missing}")

    confusion = np.zeros((classes, classes), dtype=np.int64)
    for item_id, predicted in pred.items():
        actual = truth[item_id]
        if not (0 <= actual < classes and 0 <= predicted < classes):
            raise ValueError(f"class code out of range for id {item_id!r}")
        confusion[actual, predicted] += 1

    total = int(confusion.sum())
    accuracy = _safe_div(float(np.trace(confusion)), total)

    per_class = {}
    for c in range(classes):
        tp = float(confusion[c, c])
        precision = _safe_div(tp, float(confusion[:, c].sum()))
        recall = _safe_div(tp, float(confusion[c, :].sum()))
        f1 = _safe_div(2.0 * precision * recall, precision + recall)
        per_class[c] = {"precision": precision, "recall": recall, "f1": f1,
                        "support": int(confusion[c, :].sum())}

    def _avg(weights):
        return {metric: float(sum(w * per_class[c][metric] for c, w in enumerate(weights)))
                for metric in ("precision", "recall", "f1")}

    macro = _avg([1.0 / classes] * classes)
    supports = [per_class[c]["support"] for c in range(classes)]
    weighted = _avg([_safe_div(s, total) for s in supports])

    return {"accuracy": accuracy, "per_class": per_class, "macro": macro,
            "weighted": weighted, "confusion": confusion.tolist()}


def format_confusion(report: dict) -> str:
    """Row-major confusion grid with class headers 0..c-1."""
    confusion = report["confusion"]
    c = len(confusion)
    width = max(5, max(len(str(v)) for row in confusion for v in row) + 1)
    header = "true\\pred" + "".join(f"{j:>{width}}" for j in range(c))
    lines = [header]
    for i, row in enumerate(confusion):
        lines.append(f"{i:>9}" + "".join(f"{v:>{width}}" for v in row))
    return "\n".join(lines)
