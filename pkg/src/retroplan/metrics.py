"""Evaluation metrics: accuracy, macro F1, per-class recall, confusion matrix."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class EvalMetrics:
    accuracy: float
    macro_f1: float
    per_class_accuracy: dict[str, float]
    confusion: list[list[int]]  # confusion[true][predicted]
    n_test: int
    excluded_classes: list[str] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "per_class_accuracy": self.per_class_accuracy,
            "confusion": self.confusion,
            "n_test": self.n_test,
            "excluded_classes": self.excluded_classes,
        }


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, n_classes: int) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


def compute_metrics(
    y_true: np.ndarray,
    y_pred: np.ndarray,
    n_classes: int,
    class_names: list[str],
) -> EvalMetrics:
    """Metrics over integer class indices.

    Macro F1 averages per-class F1 over classes that appear in the test
    labels; absent classes are excluded from the mean and reported.
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    n = y_true.shape[0]
    cm = confusion_matrix(y_true, y_pred, n_classes)
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    tp = np.diag(cm)

    accuracy = float(tp.sum() / n) if n else 0.0
    per_class_accuracy: dict[str, float] = {}
    f1s: list[float] = []
    excluded: list[str] = []
    for c in range(n_classes):
        if support[c] == 0:
            excluded.append(class_names[c])
            continue
        recall = tp[c] / support[c]
        precision = tp[c] / predicted[c] if predicted[c] > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class_accuracy[class_names[c]] = float(recall)
        f1s.append(float(f1))
    macro_f1 = float(np.mean(f1s)) if f1s else 0.0
    return EvalMetrics(
        accuracy=accuracy,
        macro_f1=macro_f1,
        per_class_accuracy=per_class_accuracy,
        confusion=cm.tolist(),
        n_test=n,
        excluded_classes=excluded,
    )


def macro_f1_score(y_true: np.ndarray, y_pred: np.ndarray, n_classes: int) -> float:
    """Macro F1 only, for early-stopping loops (cheaper than full metrics)."""
    names = [str(i) for i in range(n_classes)]
    return compute_metrics(y_true, y_pred, n_classes, names).macro_f1
