"""Classical baselines: CART decision tree, random forest, one-vs-rest GBT.

All three consume the shared encoded feature matrix (one-hot categoricals
split as binary numerics). Split finding is exact and deterministic: best
Gini (or variance) gain wins, ties resolve to the lowest feature index and
then the lowest threshold. The decision tree also powers the impurity-based
feature importance report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .encoder import Encoder, encode_dataset
from .ratings import ALL_RATINGS

_GAIN_TOL = 1e-12


@dataclass
class TreeNode:
    n_samples: int
    impurity: float
    # split fields (None on leaves)
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    # leaf payload: class distribution (classification) or value (regression)
    distribution: np.ndarray | None = None
    value: float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


class _Builder:
    """Recursive exact splitter shared by classification and regression trees."""

    def __init__(self, X, max_depth, min_leaf, mtry=None, rng=None):
        self.X = X
        self.max_depth = max_depth
        self.min_leaf = max(1, min_leaf)
        self.mtry = mtry
        self.rng = rng
        self.n_features = X.shape[1]

    def _candidate_features(self) -> np.ndarray:
        if self.mtry is None or self.mtry >= self.n_features:
            return np.arange(self.n_features)
        chosen = self.rng.choice(self.n_features, size=self.mtry, replace=False)
        return np.sort(chosen)

    # --- classification -----------------------------------------------------

    def build_class(self, y_onehot: np.ndarray, idx: np.ndarray, depth: int) -> TreeNode:
        n = idx.size
        counts = y_onehot[idx].sum(axis=0)
        dist = counts / n
        gini = 1.0 - float((dist * dist).sum())
        node = TreeNode(n_samples=n, impurity=gini, distribution=dist)
        if depth >= self.max_depth or n < 2 * self.min_leaf or gini <= 0.0:
            return node
        found = self._best_split(idx, self._class_scorer(y_onehot, counts, gini))
        if found is None:
            return node
        feat, thr, left_idx, right_idx = found
        node.feature = feat
        node.threshold = thr
        node.left = self.build_class(y_onehot, left_idx, depth + 1)
        node.right = self.build_class(y_onehot, right_idx, depth + 1)
        return node

    def _class_scorer(self, y_onehot, parent_counts, parent_gini):
        def score(order_rows, nl, nr):
            oh = y_onehot[order_rows]
            left = np.cumsum(oh, axis=0)[:-1]
            right = parent_counts - left
            gl = 1.0 - (left * left).sum(axis=1) / (nl * nl)
            gr = 1.0 - (right * right).sum(axis=1) / (nr * nr)
            n = nl[-1] + 1  # == len(order_rows)
            return parent_gini - (nl * gl + nr * gr) / n
        return score

    # --- regression (used by gradient boosting) ------------------------------

    def build_reg(self, g: np.ndarray, h: np.ndarray, idx: np.ndarray, depth: int) -> TreeNode:
        n = idx.size
        gs = float(g[idx].sum())
        node_sse = float((g[idx] * g[idx]).sum()) - gs * gs / n
        value = gs / (float(h[idx].sum()) + 1e-9)
        node = TreeNode(n_samples=n, impurity=node_sse / n, value=value)
        if depth >= self.max_depth or n < 2 * self.min_leaf or node_sse <= _GAIN_TOL:
            return node
        found = self._best_split(idx, self._reg_scorer(g, gs, node_sse))
        if found is None:
            return node
        feat, thr, left_idx, right_idx = found
        node.feature = feat
        node.threshold = thr
        node.left = self.build_reg(g, h, left_idx, depth + 1)
        node.right = self.build_reg(g, h, right_idx, depth + 1)
        return node

    def _reg_scorer(self, g, total_sum, parent_sse):
        def score(order_rows, nl, nr):
            gsort = g[order_rows]
            left_sum = np.cumsum(gsort)[:-1]
            left_sq = np.cumsum(gsort * gsort)[:-1]
            total_sq = float((gsort * gsort).sum())
            left_sse = left_sq - left_sum * left_sum / nl
            right_sum = total_sum - left_sum
            right_sse = (total_sq - left_sq) - right_sum * right_sum / nr
            n = nl[-1] + 1
            return (parent_sse - left_sse - right_sse) / n
        return score

    # --- shared split search ---------------------------------------------------

    def _best_split(self, idx, scorer):
        """Exact best split over candidate features; deterministic tie rule."""
        n = idx.size
        nl = np.arange(1, n, dtype=np.float64)
        nr = n - nl
        size_ok = (nl >= self.min_leaf) & (nr >= self.min_leaf)
        best_gain = _GAIN_TOL
        best = None
        for feat in self._candidate_features():
            vals = self.X[idx, feat]
            order = np.argsort(vals, kind="stable")
            v = vals[order]
            valid = (v[1:] > v[:-1]) & size_ok
            if not valid.any():
                continue
            gain = scorer(idx[order], nl, nr)
            gain[~valid] = -np.inf
            pos = int(np.argmax(gain))  # first max -> lowest threshold
            if gain[pos] > best_gain:
                best_gain = gain[pos]
                thr = (v[pos] + v[pos + 1]) / 2.0
                best = (int(feat), float(thr), idx[order[: pos + 1]], idx[order[pos + 1:]])
        return best


# --- prediction -----------------------------------------------------------------


def _predict_tree(node: TreeNode, X: np.ndarray, out: np.ndarray, rows: np.ndarray) -> None:
    if rows.size == 0:
        return
    if node.is_leaf:
        out[rows] = node.distribution if node.distribution is not None else node.value
        return
    go_left = X[rows, node.feature] <= node.threshold
    _predict_tree(node.left, X, out, rows[go_left])
    _predict_tree(node.right, X, out, rows[~go_left])


def tree_distribution(root: TreeNode, X: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((X.shape[0], n_classes), dtype=np.float64)
    _predict_tree(root, X, out, np.arange(X.shape[0]))
    return out


def tree_values(root: TreeNode, X: np.ndarray) -> np.ndarray:
    out = np.zeros(X.shape[0], dtype=np.float64)
    _predict_tree(root, X, out, np.arange(X.shape[0]))
    return out


# --- model wrappers ---------------------------------------------------------------


@dataclass
class TreeModel:
    root: TreeNode
    encoder: Encoder
    n_classes: int = 15

    def predict_proba_encoded(self, X: np.ndarray) -> np.ndarray:
        return tree_distribution(self.root, X, self.n_classes)


@dataclass
class ForestModel:
    trees: list[TreeNode]
    encoder: Encoder
    n_classes: int = 15
    seed: int = 0
    mtry: int = 0

    def predict_proba_encoded(self, X: np.ndarray) -> np.ndarray:
        acc = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        for root in self.trees:
            acc += tree_distribution(root, X, self.n_classes)
        return acc / len(self.trees)


@dataclass
class GbtModel:
    class_trees: list[list[TreeNode]]  # [class][round]
    base_scores: np.ndarray  # log priors, one per class
    shrinkage: float
    encoder: Encoder
    n_classes: int = 15

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        scores = np.tile(self.base_scores, (X.shape[0], 1))
        for c, rounds in enumerate(self.class_trees):
            for root in rounds:
                scores[:, c] += self.shrinkage * tree_values(root, X)
        return scores

    def predict_proba_encoded(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision_scores(X)
        z = scores - scores.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)


# --- fitting entry points ------------------------------------------------------------


def fit_tree_array(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    max_depth: int = 12,
    min_leaf: int = 1,
    mtry: int | None = None,
    rng: np.random.Generator | None = None,
) -> TreeNode:
    onehot = np.zeros((y.shape[0], n_classes), dtype=np.float64)
    onehot[np.arange(y.shape[0]), y] = 1.0
    builder = _Builder(X, max_depth=max_depth, min_leaf=min_leaf, mtry=mtry, rng=rng)
    return builder.build_class(onehot, np.arange(X.shape[0]), 0)


def fit_decision_tree(
    train: Dataset, enc: Encoder, max_depth: int = 12, min_leaf: int = 1
) -> TreeModel:
    """Greedy CART with Gini impurity on the encoded feature matrix."""
    X, y = encode_dataset(enc, train)
    root = fit_tree_array(X, y, n_classes=len(ALL_RATINGS), max_depth=max_depth, min_leaf=min_leaf)
    return TreeModel(root=root, encoder=enc, n_classes=len(ALL_RATINGS))


def fit_random_forest(
    train: Dataset,
    enc: Encoder,
    n_trees: int = 100,
    feature_frac: float | None = None,
    seed: int = 0,
    max_depth: int = 12,
    min_leaf: int = 1,
    bootstrap: bool = True,
) -> ForestModel:
    """Bootstrap forest; feature_frac=None uses sqrt(encoded_dim) per split."""
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    X, y = encode_dataset(enc, train)
    d = X.shape[1]
    if feature_frac is None:
        mtry = max(1, int(round(np.sqrt(d))))
    else:
        mtry = max(1, min(d, int(round(feature_frac * d))))
    onehot = np.zeros((y.shape[0], len(ALL_RATINGS)), dtype=np.float64)
    onehot[np.arange(y.shape[0]), y] = 1.0

    seeds = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    n = X.shape[0]
    for t in range(n_trees):
        rng = np.random.default_rng(seeds[t])
        idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        builder = _Builder(
            X, max_depth=max_depth, min_leaf=min_leaf,
            mtry=mtry if mtry < d else None, rng=rng,
        )
        trees.append(builder.build_class(onehot, np.asarray(idx), 0))
    return ForestModel(trees=trees, encoder=enc, n_classes=len(ALL_RATINGS), seed=seed, mtry=mtry)


def fit_gbt(
    train: Dataset,
    enc: Encoder,
    n_rounds: int = 200,
    depth: int = 4,
    shrinkage: float = 0.1,
    min_leaf: int = 1,
) -> GbtModel:
    """One-vs-rest additive boosting with logistic loss on per-class scores.

    Scores start at the log class priors (so zero shrinkage predicts exactly
    the prior distribution after the softmax combination); each round fits a
    depth-limited regression tree to the logistic gradient with Newton leaf
    values.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    X, y = encode_dataset(enc, train)
    n, _ = X.shape
    n_classes = len(ALL_RATINGS)
    priors = np.bincount(y, minlength=n_classes) / n
    base = np.log(np.maximum(priors, 1e-12))

    class_trees: list[list[TreeNode]] = [[] for _ in range(n_classes)]
    if shrinkage > 0.0:
        scores = np.tile(base, (n, 1))
        targets = np.zeros((n, n_classes), dtype=np.float64)
        targets[np.arange(n), y] = 1.0
        for _ in range(n_rounds):
            for c in range(n_classes):
                p = 1.0 / (1.0 + np.exp(-scores[:, c]))
                g = targets[:, c] - p
                h = p * (1.0 - p)
                builder = _Builder(X, max_depth=depth, min_leaf=min_leaf)
                root = builder.build_reg(g, h, np.arange(n), 0)
                class_trees[c].append(root)
                scores[:, c] += shrinkage * tree_values(root, X)
    return GbtModel(
        class_trees=class_trees, base_scores=base, shrinkage=shrinkage,
        encoder=enc, n_classes=n_classes,
    )


# --- feature importance -----------------------------------------------------------


@dataclass
class ImportanceReport:
    entries: list[tuple[str, float, float]]  # (feature, total decrease, share)

    def rank_of(self, feature: str) -> int | None:
        for i, (name, _, _) in enumerate(self.entries):
            if name == feature:
                return i
        return None

    def render_text(self) -> str:
        lines = ["rank\tfeature\timpurity_decrease\tshare"]
        for i, (name, dec, share) in enumerate(self.entries, start=1):
            lines.append(f"{i}\t{name}\t{dec:.6f}\t{share:.6f}")
        return "\n".join(lines) + "\n"


def feature_importance(model: TreeModel) -> ImportanceReport:
    """Total weighted impurity decrease per source feature, normalized.

    One-hot columns are folded back onto their source categorical feature via
    the encoder's slot map.
    """
    slot_names = model.encoder.slot_feature_names
    totals: dict[str, float] = {}
    n_root = model.root.n_samples

    def walk(node: TreeNode):
        if node.is_leaf:
            return
        child_impurity = (
            node.left.n_samples * node.left.impurity
            + node.right.n_samples * node.right.impurity
        ) / node.n_samples
        decrease = (node.n_samples / n_root) * (node.impurity - child_impurity)
        name = slot_names[node.feature]
        totals[name] = totals.get(name, 0.0) + decrease
        walk(node.left)
        walk(node.right)

    walk(model.root)
    total = sum(totals.values())
    entries = [
        (name, dec, dec / total if total > 0 else 0.0)
        for name, dec in sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    return ImportanceReport(entries=entries)
