"""Training and evaluation of the rating classifiers.

Covers the flat MLP, the contrastively pre-trained variant, their
coarse-to-fine versions (one 5-class router plus five per-group specialists)
and the shared evaluation path every model funnels through.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import Dataset, SplitSet
from .encoder import Encoder, encode_profiles, fit_encoder
from .errors import EmptyFineGroup, EmptyTest
from .metrics import EvalMetrics, compute_metrics
from .nn_core import DenseNet, TrainConfig, init_net
from .ratings import (
    ALL_COARSE,
    ALL_RATINGS,
    N_RATINGS,
    CoarseRating,
    EnergyRating,
    to_coarse,
)
from .scarf import build_sampler, finetune, pretrain
from .schema import HomeProfile
from .train_loop import TrainHistory, predict_proba, train_supervised

FINE_GROUP_ARITIES = tuple(len(c.members) for c in ALL_COARSE)  # (3, 3, 2, 3, 4)


@dataclass(frozen=True)
class ModelSettings:
    """Hyperparameters for every trainable model; defaults are desk-scale."""

    train: TrainConfig = field(default_factory=TrainConfig)
    hidden_width: int = 256
    n_hidden: int = 4
    # contrastive pre-training
    pretrain_epochs: int = 15
    repr_dim: int = 64
    head_width: int = 64
    corruption_rate: float = 0.30
    temperature: float = 1.0
    freeze_encoder: bool = False
    # tree baselines
    tree_depth: int = 12
    tree_min_leaf: int = 5
    forest_trees: int = 100
    forest_feature_frac: float | None = None
    gbt_rounds: int = 200
    gbt_depth: int = 4
    gbt_shrinkage: float = 0.1

    def with_seed(self, seed: int) -> "ModelSettings":
        return replace(self, train=replace(self.train, seed=seed))


# --- model wrappers -------------------------------------------------------------


@dataclass
class NetClassifier:
    """A frozen dense net over an explicit class list, plus its encoder."""

    net: DenseNet
    encoder: Encoder
    classes: tuple
    history: TrainHistory | None = None

    def predict_proba_encoded(self, X: np.ndarray) -> np.ndarray:
        return predict_proba(self.net, X)


@dataclass
class ScarfNetClassifier(NetClassifier):
    """Same surface, but the net is encoder+head from the two-stage pipeline."""

    f_layers: int = 0
    pretrain_loss: float = float("nan")


@dataclass
class HierarchicalModel:
    """5-class router plus one specialist classifier per coarse group."""

    coarse: NetClassifier
    fine: dict[CoarseRating, NetClassifier]
    encoder: Encoder

    def __post_init__(self):
        if set(self.fine) != set(ALL_COARSE):
            raise EmptyFineGroup("hierarchical model needs one fine classifier per coarse class")
        for c in ALL_COARSE:
            if tuple(self.fine[c].classes) != c.members:
                raise EmptyFineGroup(f"fine classifier for {c} has wrong classes")

    def predict_routed_encoded(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Route rows through coarse argmax to the matching specialist.

        Returns (fine rating indices 0..14, coarse indices 0..4); the fine
        prediction is always a member of the predicted coarse group.
        """
        coarse_idx = self.coarse.predict_proba_encoded(X).argmax(axis=1)
        fine_idx = np.empty(X.shape[0], dtype=np.int64)
        for ci, coarse_cls in enumerate(ALL_COARSE):
            rows = np.nonzero(coarse_idx == ci)[0]
            if rows.size == 0:
                continue
            spec = self.fine[coarse_cls]
            within = spec.predict_proba_encoded(X[rows]).argmax(axis=1)
            members = np.array([r.index for r in coarse_cls.members], dtype=np.int64)
            fine_idx[rows] = members[within]
        return fine_idx, coarse_idx

    def predict_proba_encoded(self, X: np.ndarray) -> np.ndarray:
        """Composed 15-class distribution: P(group) * P(rating | group)."""
        coarse_p = self.coarse.predict_proba_encoded(X)
        out = np.zeros((X.shape[0], N_RATINGS), dtype=np.float64)
        for ci, coarse_cls in enumerate(ALL_COARSE):
            fine_p = self.fine[coarse_cls].predict_proba_encoded(X)
            for k, member in enumerate(coarse_cls.members):
                out[:, member.index] = coarse_p[:, ci] * fine_p[:, k]
        return out


RatingModel = NetClassifier | HierarchicalModel  # tree wrappers also satisfy this surface


def model_rating_indices(model, X: np.ndarray) -> np.ndarray:
    """Hard predictions as rating indices; hierarchical models use routing."""
    if isinstance(model, HierarchicalModel):
        return model.predict_routed_encoded(X)[0]
    return model.predict_proba_encoded(X).argmax(axis=1)


def predict(model, profile: HomeProfile) -> tuple[EnergyRating, np.ndarray]:
    """Rating and 15-class probabilities for one profile.

    For flat models the rating is the argmax of the returned probabilities
    (ties resolve toward the better rating); hierarchical models report the
    routed prediction alongside the composed distribution.
    """
    X = encode_profiles(model.encoder, [profile])
    probs = model.predict_proba_encoded(X)[0]
    idx = int(model_rating_indices(model, X)[0])
    return ALL_RATINGS[idx], probs


def predict_hierarchical(model: HierarchicalModel, profile: HomeProfile) -> tuple[EnergyRating, CoarseRating]:
    X = encode_profiles(model.encoder, [profile])
    fine_idx, coarse_idx = model.predict_routed_encoded(X)
    return ALL_RATINGS[int(fine_idx[0])], ALL_COARSE[int(coarse_idx[0])]


def predict_profiles(model, profiles: list[HomeProfile], chunk: int = 8192) -> list[EnergyRating]:
    """Batch rating prediction used by the retrofit enumerator."""
    out: list[EnergyRating] = []
    for s in range(0, len(profiles), chunk):
        X = encode_profiles(model.encoder, profiles[s:s + chunk])
        out.extend(ALL_RATINGS[int(i)] for i in model_rating_indices(model, X))
    return out


# --- training -------------------------------------------------------------------


def _encode_splits(enc: Encoder, splits: SplitSet):
    X_train = encode_profiles(enc, splits.train.profiles)
    X_val = encode_profiles(enc, splits.validation.profiles) if len(splits.validation) else None
    return X_train, X_val


def train_mlp(splits: SplitSet, settings: ModelSettings) -> NetClassifier:
    """Supervised 15-class MLP; never touches the test split."""
    enc = fit_encoder(splits.train)
    X_train, X_val = _encode_splits(enc, splits)
    y_train = splits.train.label_indices()
    y_val = splits.validation.label_indices() if X_val is not None else None
    dims = [enc.encoded_dim] + [settings.hidden_width] * settings.n_hidden + [N_RATINGS]
    net = init_net(dims, seed=settings.train.seed)
    history = train_supervised(net, X_train, y_train, X_val, y_val, settings.train)
    return NetClassifier(net=net, encoder=enc, classes=ALL_RATINGS, history=history)


def train_scarf(splits: SplitSet, settings: ModelSettings) -> ScarfNetClassifier:
    """Contrastive pre-training on the train split, then supervised fine-tuning."""
    enc = fit_encoder(splits.train)
    sampler = build_sampler(splits.train, settings.corruption_rate)
    pre_cfg = replace(settings.train, max_epochs=settings.pretrain_epochs)
    pre = pretrain(
        splits.train, enc, pre_cfg, sampler,
        hidden_width=settings.hidden_width, n_hidden=settings.n_hidden,
        repr_dim=settings.repr_dim, temperature=settings.temperature,
    )
    clf = finetune(
        pre, splits, enc, settings.train, n_classes=N_RATINGS,
        head_width=settings.head_width, freeze_encoder=settings.freeze_encoder,
    )
    return ScarfNetClassifier(
        net=clf.chained, encoder=enc, classes=ALL_RATINGS, history=clf.history,
        f_layers=len(clf.f.layers), pretrain_loss=pre.final_loss,
    )


def _subset_for_group(data: Dataset, group: CoarseRating) -> Dataset:
    idx = [i for i, r in enumerate(data.rows) if to_coarse(r.rating) is group]
    return data.subset(idx)


def train_coarse_to_fine(
    splits: SplitSet, settings: ModelSettings, base: str = "mlp"
) -> HierarchicalModel:
    """Train the 5-class router on merged labels and five per-group specialists.

    Specialists see only train rows whose true coarse label is their group
    (teacher forcing); with the contrastive base each of the six stages gets
    its own label-blind pre-training pass.
    """
    if base not in ("mlp", "scarf"):
        raise ValueError(f"unknown hierarchical base {base!r}")
    enc = fit_encoder(splits.train)

    coarse = _train_stage(
        splits, enc, settings, base,
        classes=ALL_COARSE,
        label_of=lambda row: ALL_COARSE.index(to_coarse(row.rating)),
    )

    fine: dict[CoarseRating, NetClassifier] = {}
    for group in ALL_COARSE:
        sub_train = _subset_for_group(splits.train, group)
        if len(sub_train) == 0:
            raise EmptyFineGroup(f"coarse group {group} has no train rows")
        sub_val = _subset_for_group(splits.validation, group)
        sub_splits = SplitSet(train=sub_train, validation=sub_val, test=splits.test, seed=splits.seed)
        members = group.members
        fine[group] = _train_stage(
            sub_splits, enc, settings, base,
            classes=members,
            label_of=lambda row, m=members: m.index(row.rating),
        )
    return HierarchicalModel(coarse=coarse, fine=fine, encoder=enc)


def _train_stage(splits, enc, settings, base, classes, label_of) -> NetClassifier:
    n_classes = len(classes)
    y_train = np.array([label_of(r) for r in splits.train.rows], dtype=np.int64)
    if base == "scarf":
        sampler = build_sampler(splits.train, settings.corruption_rate)
        pre_cfg = replace(settings.train, max_epochs=settings.pretrain_epochs)
        pre = pretrain(
            splits.train, enc, pre_cfg, sampler,
            hidden_width=settings.hidden_width, n_hidden=settings.n_hidden,
            repr_dim=settings.repr_dim, temperature=settings.temperature,
        )
        clf = finetune(
            pre, splits, enc, settings.train, n_classes=n_classes,
            head_width=settings.head_width, freeze_encoder=settings.freeze_encoder,
            label_of=label_of,
        )
        return ScarfNetClassifier(
            net=clf.chained, encoder=enc, classes=tuple(classes), history=clf.history,
            f_layers=len(clf.f.layers), pretrain_loss=pre.final_loss,
        )
    X_train, X_val = _encode_splits(enc, splits)
    y_val = (
        np.array([label_of(r) for r in splits.validation.rows], dtype=np.int64)
        if X_val is not None else None
    )
    dims = [enc.encoded_dim] + [settings.hidden_width] * settings.n_hidden + [n_classes]
    net = init_net(dims, seed=settings.train.seed)
    history = train_supervised(net, X_train, y_train, X_val, y_val, settings.train)
    return NetClassifier(net=net, encoder=enc, classes=tuple(classes), history=history)


# --- evaluation ------------------------------------------------------------------


def evaluate(model, test: Dataset) -> EvalMetrics:
    """Accuracy, macro F1, per-class recall and confusion over the 15 ratings."""
    if len(test) == 0:
        raise EmptyTest("cannot evaluate on an empty test set")
    X = encode_profiles(model.encoder, test.profiles)
    y_pred = model_rating_indices(model, X)
    y_true = test.label_indices()
    return compute_metrics(y_true, y_pred, N_RATINGS, [r.value for r in ALL_RATINGS])
