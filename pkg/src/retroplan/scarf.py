"""Self-supervised contrastive pre-training via random feature corruption.

Stage one corrupts a share of each row's features by resampling values from
the train split's empirical marginals, encodes both views with the same MLP
encoder, and pulls matched pairs together under the InfoNCE objective. Stage
two bolts a classification head onto the frozen-or-not encoder and fine-tunes
with cross-entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, SplitSet
from .encoder import Encoder, encode_profiles
from .errors import DegenerateBatch, NonFiniteLoss
from .nn_core import AdamState, DenseNet, TrainConfig, backward_batch, forward_batch, init_net
from .schema import HomeProfile
from .train_loop import TrainHistory, train_supervised


@dataclass(frozen=True)
class CorruptionSampler:
    """Per-feature marginal value pools drawn from the raw train split."""

    corruption_rate: float
    feature_names: tuple[str, ...]
    columns: dict[str, list] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.corruption_rate <= 1.0:
            raise ValueError("corruption_rate must be in [0, 1]")

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def n_rows(self) -> int:
        return len(self.columns[self.feature_names[0]]) if self.feature_names else 0


def build_sampler(train: Dataset, corruption_rate: float = 0.30) -> CorruptionSampler:
    names = train.schema.names
    columns = {name: [r.profile[name] for r in train.rows] for name in names}
    return CorruptionSampler(
        corruption_rate=corruption_rate, feature_names=names, columns=columns
    )


def corrupt(x: HomeProfile, sampler: CorruptionSampler, rng: np.random.Generator) -> HomeProfile:
    """Replace ceil(rate * n_features) features with resampled train values.

    Feature indices are drawn uniformly without replacement; each selected
    feature takes the value of that feature from an independently drawn train
    row. Corruption happens in raw feature space, before encoding.
    """
    n_select = math.ceil(sampler.corruption_rate * sampler.n_features)
    out = dict(x)
    if n_select == 0:
        return out
    chosen = rng.choice(sampler.n_features, size=n_select, replace=False)
    n_rows = sampler.n_rows
    for fi in chosen:
        name = sampler.feature_names[fi]
        out[name] = sampler.columns[name][int(rng.integers(0, n_rows))]
    return out


# --- InfoNCE -------------------------------------------------------------------


def _l2_normalize(Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.maximum(np.linalg.norm(Z, axis=1, keepdims=True), 1e-12)
    return Z / norms, norms


def info_nce(
    Z: np.ndarray, Z_tilde: np.ndarray, temperature: float = 1.0
) -> tuple[float, np.ndarray, np.ndarray]:
    """InfoNCE over in-batch pairs; returns (loss, dL/dZ, dL/dZ_tilde).

    Similarity is cosine (both views l2-normalized) scaled by 1/temperature;
    row i's positive is its own corrupted view, the other corrupted views in
    the batch act as negatives.
    """
    if Z.shape[0] < 2:
        raise DegenerateBatch(f"InfoNCE needs at least 2 rows, got {Z.shape[0]}")
    if Z.shape != Z_tilde.shape:
        raise DegenerateBatch(f"view shapes differ: {Z.shape} vs {Z_tilde.shape}")
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    n = Z.shape[0]
    Zh, z_norms = _l2_normalize(Z)
    Th, t_norms = _l2_normalize(Z_tilde)

    S = (Zh @ Th.T) / temperature
    S_shift = S - S.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(S_shift).sum(axis=1))
    loss = float(np.mean(log_z - S_shift[np.arange(n), np.arange(n)]))

    P = np.exp(S_shift)
    P /= P.sum(axis=1, keepdims=True)
    dS = (P - np.eye(n)) / n

    dZh = (dS @ Th) / temperature
    dTh = (dS.T @ Zh) / temperature
    dZ = (dZh - (Zh * dZh).sum(axis=1, keepdims=True) * Zh) / z_norms
    dT = (dTh - (Th * dTh).sum(axis=1, keepdims=True) * Th) / t_norms
    return loss, dZ, dT


# --- pre-training ----------------------------------------------------------------


@dataclass
class ScarfEncoder:
    """Frozen contrastively pre-trained encoder plus its pre-training metadata."""

    net: DenseNet
    corruption_rate: float
    temperature: float
    epochs: int
    final_loss: float


def batch_rng(seed: int, epoch: int, batch_index: int) -> np.random.Generator:
    """Deterministic per-batch stream so batch preparation order cannot matter."""
    return np.random.default_rng(np.random.SeedSequence([seed, 7919, epoch, batch_index]))


def pretrain(
    train: Dataset,
    enc: Encoder,
    cfg: TrainConfig,
    sampler: CorruptionSampler,
    hidden_width: int = 256,
    n_hidden: int = 4,
    repr_dim: int = 64,
    temperature: float = 1.0,
) -> ScarfEncoder:
    """Contrastive pre-training; labels are never read."""
    profiles = train.profiles
    X = encode_profiles(enc, profiles)
    n = X.shape[0]
    dims = [enc.encoded_dim] + [hidden_width] * n_hidden + [repr_dim]
    net = init_net(dims, seed=cfg.seed)
    opt = AdamState(net)

    final_loss = float("nan")
    from .train_loop import shuffle_rng

    for epoch in range(cfg.max_epochs):
        perm = shuffle_rng(cfg.seed, epoch).permutation(n)
        losses = []
        for bi, s in enumerate(range(0, n, cfg.batch_size)):
            idx = perm[s:s + cfg.batch_size]
            if idx.shape[0] < 2:
                continue  # InfoNCE is undefined on a single row
            rng = batch_rng(cfg.seed, epoch, bi)
            corrupted = [corrupt(profiles[i], sampler, rng) for i in idx]
            Xt = encode_profiles(enc, corrupted)

            Z, cache_z = forward_batch(net, X[idx])
            T, cache_t = forward_batch(net, Xt)
            loss, dZ, dT = info_nce(Z, T, temperature)
            if not np.isfinite(loss):
                raise NonFiniteLoss(f"InfoNCE loss became non-finite ({loss})")
            grads_z, _ = backward_batch(net, cache_z, dZ)
            grads_t, _ = backward_batch(net, cache_t, dT)
            grads = [
                (gz[0] + gt[0], gz[1] + gt[1]) for gz, gt in zip(grads_z, grads_t)
            ]
            opt.step(net, grads, cfg.learning_rate)
            losses.append(loss)
        if losses:
            final_loss = float(np.mean(losses))

    return ScarfEncoder(
        net=net,
        corruption_rate=sampler.corruption_rate,
        temperature=temperature,
        epochs=cfg.max_epochs,
        final_loss=final_loss,
    )


@dataclass
class ScarfClassifier:
    """Encoder plus classification head; the two share parameter storage with
    the chained view used during fine-tuning."""

    f: DenseNet
    g: DenseNet
    history: TrainHistory | None = None

    @property
    def chained(self) -> DenseNet:
        return DenseNet(self.f.layers + self.g.layers)


def finetune(
    pre: ScarfEncoder,
    splits: SplitSet,
    enc: Encoder,
    cfg: TrainConfig,
    n_classes: int,
    head_width: int = 64,
    freeze_encoder: bool = False,
    label_of=None,
) -> ScarfClassifier:
    """Supervised fine-tuning of encoder + fresh head with early stopping.

    ``label_of`` maps a Row to a class index (defaults to the fine rating
    index); the frozen-encoder ablation zeroes encoder gradients so its
    parameters stay bit-identical.
    """
    if label_of is None:
        label_of = lambda row: row.rating.index

    f_net = pre.net.copy()
    repr_dim = f_net.output_dim
    g_net = init_net([repr_dim, head_width, n_classes], seed=cfg.seed + 1)
    chained = DenseNet(f_net.layers + g_net.layers)

    X_train = encode_profiles(enc, splits.train.profiles)
    y_train = np.array([label_of(r) for r in splits.train.rows], dtype=np.int64)
    X_val = encode_profiles(enc, splits.validation.profiles) if len(splits.validation) else None
    y_val = (
        np.array([label_of(r) for r in splits.validation.rows], dtype=np.int64)
        if len(splits.validation)
        else None
    )

    history = train_supervised(
        chained,
        X_train,
        y_train,
        X_val,
        y_val,
        cfg,
        frozen_layers=len(f_net.layers) if freeze_encoder else 0,
    )
    return ScarfClassifier(f=f_net, g=g_net, history=history)
