"""Multi-seed trial harness and the two benchmark table renderings.

Each trial reshuffles the source data with its seed, trains every requested
model on that same split, and evaluates on the held-out test rows. Outputs
are a macro-F1/accuracy table and a rare-class (A1, A2, A3) accuracy table,
rendered both as CSV and aligned text with fixed formatting so repeat runs
are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classifiers import (
    ModelSettings,
    evaluate,
    train_coarse_to_fine,
    train_mlp,
    train_scarf,
)
from .dataset import Dataset, split
from .encoder import fit_encoder
from .errors import LeakageError, RetroplanError
from .metrics import EvalMetrics
from .trees import fit_decision_tree, fit_gbt, fit_random_forest

MODEL_NAMES = ("decision_tree", "gbt", "random_forest", "mlp", "scarf", "c2f_mlp", "c2f_scarf")
TABLE3_CLASSES = ("A1", "A2", "A3")


@dataclass
class TrialReport:
    model: str
    seeds: list[int]
    metrics: list[EvalMetrics]

    def _values(self, key: str) -> list[float]:
        if key == "accuracy":
            return [m.accuracy for m in self.metrics]
        if key == "macro_f1":
            return [m.macro_f1 for m in self.metrics]
        raise KeyError(key)

    def mean(self, key: str) -> float:
        return float(np.mean(self._values(key)))

    def std(self, key: str) -> float:
        return float(np.std(self._values(key)))

    def class_accuracy_values(self, class_name: str) -> list[float]:
        """Per-seed recall for one class; seeds lacking the class are skipped."""
        return [
            m.per_class_accuracy[class_name]
            for m in self.metrics
            if class_name in m.per_class_accuracy
        ]

    def class_accuracy_mean(self, class_name: str) -> float | None:
        vals = self.class_accuracy_values(class_name)
        return float(np.mean(vals)) if vals else None


@dataclass
class TrialRun:
    reports: list[TrialReport]
    table2_csv: str
    table2_txt: str
    table3_csv: str
    table3_txt: str
    files: dict[str, str] = field(default_factory=dict)


def train_model(name: str, splits, settings: ModelSettings):
    """Train one named model on a split; all models share the encoding path."""
    if name == "mlp":
        return train_mlp(splits, settings)
    if name == "scarf":
        return train_scarf(splits, settings)
    if name == "c2f_mlp":
        return train_coarse_to_fine(splits, settings, base="mlp")
    if name == "c2f_scarf":
        return train_coarse_to_fine(splits, settings, base="scarf")
    enc = fit_encoder(splits.train)
    if name == "decision_tree":
        return fit_decision_tree(
            splits.train, enc, max_depth=settings.tree_depth, min_leaf=settings.tree_min_leaf
        )
    if name == "random_forest":
        return fit_random_forest(
            splits.train, enc,
            n_trees=settings.forest_trees, feature_frac=settings.forest_feature_frac,
            seed=settings.train.seed, max_depth=settings.tree_depth,
            min_leaf=settings.tree_min_leaf,
        )
    if name == "gbt":
        return fit_gbt(
            splits.train, enc,
            n_rounds=settings.gbt_rounds, depth=settings.gbt_depth,
            shrinkage=settings.gbt_shrinkage, min_leaf=settings.tree_min_leaf,
        )
    raise RetroplanError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")


def _check_no_leakage(splits) -> None:
    seen = splits.train.row_digests() | splits.validation.row_digests()
    overlap = seen & splits.test.row_digests()
    if overlap:
        raise LeakageError(f"{len(overlap)} test rows reachable by training")


def run_trials(
    data: Dataset,
    models: list[str],
    seeds: list[int],
    settings: ModelSettings | None = None,
) -> TrialRun:
    """Per seed: fresh split, train all models on it, evaluate on its test set."""
    if not models:
        raise RetroplanError("no models requested")
    for name in models:
        if name not in MODEL_NAMES:
            raise RetroplanError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")
    settings = settings or ModelSettings()

    per_model: dict[str, list[EvalMetrics]] = {name: [] for name in models}
    for seed in seeds:
        splits = split(data, seed)
        _check_no_leakage(splits)
        for name in models:
            try:
                model = train_model(name, splits, settings.with_seed(seed))
                per_model[name].append(evaluate(model, splits.test))
            except RetroplanError as exc:
                raise type(exc)(f"model {name!r}, seed {seed}: {exc}") from exc

    reports = [TrialReport(model=n, seeds=list(seeds), metrics=per_model[n]) for n in models]
    t2_csv, t2_txt = render_table2(reports)
    t3_csv, t3_txt = render_table3(reports)
    return TrialRun(
        reports=reports,
        table2_csv=t2_csv, table2_txt=t2_txt,
        table3_csv=t3_csv, table3_txt=t3_txt,
        files={
            "table2.csv": t2_csv, "table2.txt": t2_txt,
            "table3.csv": t3_csv, "table3.txt": t3_txt,
        },
    )


# --- rendering -------------------------------------------------------------------


def render_table2(reports: list[TrialReport]) -> tuple[str, str]:
    """Macro F1 and accuracy per model, averaged over seeds."""
    csv_lines = ["model,macro_f1_mean,macro_f1_std,accuracy_mean,accuracy_std,n_seeds"]
    for r in reports:
        csv_lines.append(
            f"{r.model},{r.mean('macro_f1'):.6f},{r.std('macro_f1'):.6f},"
            f"{r.mean('accuracy'):.6f},{r.std('accuracy'):.6f},{len(r.seeds)}"
        )
    width = max(len("model"), max((len(r.model) for r in reports), default=5))
    txt_lines = [f"{'model':<{width}}  {'Macro F1':>9}  {'Accuracy':>9}"]
    for r in reports:
        txt_lines.append(
            f"{r.model:<{width}}  {100 * r.mean('macro_f1'):>8.1f}%  "
            f"{100 * r.mean('accuracy'):>8.1f}%"
        )
    return "\n".join(csv_lines) + "\n", "\n".join(txt_lines) + "\n"


def render_table3(
    reports: list[TrialReport], classes: tuple[str, ...] = TABLE3_CLASSES
) -> tuple[str, str]:
    """Per-class accuracy for the hardest (rarest) classes."""
    head = ",".join(
        f"{c}_mean,{c}_std,{c}_n_seeds" for c in classes
    )
    csv_lines = [f"model,{head}"]
    for r in reports:
        cells = []
        for c in classes:
            vals = r.class_accuracy_values(c)
            if vals:
                cells.append(f"{float(np.mean(vals)):.6f},{float(np.std(vals)):.6f},{len(vals)}")
            else:
                cells.append(",,0")
        csv_lines.append(f"{r.model}," + ",".join(cells))

    width = max(len("model"), max((len(r.model) for r in reports), default=5))
    txt_lines = [f"{'model':<{width}}  " + "  ".join(f"{c:>7}" for c in classes)]
    for r in reports:
        cells = []
        for c in classes:
            m = r.class_accuracy_mean(c)
            cells.append(f"{100 * m:>6.1f}%" if m is not None else f"{'n/a':>7}")
        txt_lines.append(f"{r.model:<{width}}  " + "  ".join(cells))
    return "\n".join(csv_lines) + "\n", "\n".join(txt_lines) + "\n"
