"""Shared supervised training loop with early stopping on validation macro F1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import macro_f1_score
from .nn_core import AdamState, DenseNet, TrainConfig, forward_batch, softmax, train_step


@dataclass
class TrainHistory:
    epochs_run: int
    best_epoch: int
    best_val_f1: float
    final_train_loss: float


def predict_indices(net: DenseNet, X: np.ndarray, batch: int = 4096) -> np.ndarray:
    """Argmax class indices; ties resolve to the lowest index."""
    out = np.empty(X.shape[0], dtype=np.int64)
    for s in range(0, X.shape[0], batch):
        logits, _ = forward_batch(net, X[s:s + batch])
        out[s:s + batch] = np.argmax(logits, axis=1)
    return out


def predict_proba(net: DenseNet, X: np.ndarray, batch: int = 4096) -> np.ndarray:
    probs = np.empty((X.shape[0], net.output_dim), dtype=np.float64)
    for s in range(0, X.shape[0], batch):
        logits, _ = forward_batch(net, X[s:s + batch])
        probs[s:s + batch] = softmax(logits)
    return probs


def shuffle_rng(seed: int, epoch: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, 104729, epoch]))


def train_supervised(
    net: DenseNet,
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_val: np.ndarray | None,
    y_val: np.ndarray | None,
    cfg: TrainConfig,
    frozen_layers: int = 0,
) -> TrainHistory:
    """Train ``net`` in place with Adam and restore the best-F1 parameters.

    The first ``frozen_layers`` layers receive zero gradients, leaving their
    parameters bit-identical (used by the frozen-encoder ablation). When no
    validation split is given, stopping falls back to train macro F1.
    """
    n = X_train.shape[0]
    n_classes = net.output_dim
    opt = AdamState(net)
    use_val = X_val is not None and len(X_val) > 0

    best_f1 = -1.0
    best_epoch = 0
    best_params = net.copy()
    since_best = 0
    last_loss = float("nan")
    epochs_run = 0

    for epoch in range(cfg.max_epochs):
        perm = shuffle_rng(cfg.seed, epoch).permutation(n)
        losses = []
        for s in range(0, n, cfg.batch_size):
            idx = perm[s:s + cfg.batch_size]
            loss = _frozen_train_step(net, X_train[idx], y_train[idx], cfg, opt, frozen_layers)
            losses.append(loss)
        last_loss = float(np.mean(losses))
        epochs_run = epoch + 1

        if use_val:
            f1 = macro_f1_score(y_val, predict_indices(net, X_val), n_classes)
        else:
            f1 = macro_f1_score(y_train, predict_indices(net, X_train), n_classes)
        if f1 > best_f1:
            best_f1 = f1
            best_epoch = epoch
            best_params = net.copy()
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.early_stop_patience:
                break

    for lay, best in zip(net.layers, best_params.layers):
        lay.W[...] = best.W
        lay.b[...] = best.b
    return TrainHistory(
        epochs_run=epochs_run,
        best_epoch=best_epoch,
        best_val_f1=best_f1,
        final_train_loss=last_loss,
    )


def _frozen_train_step(net, X, y, cfg, opt, frozen_layers: int) -> float:
    if frozen_layers <= 0:
        return train_step(net, X, y, cfg, opt)
    from .nn_core import loss_and_grads
    from .errors import NonFiniteLoss

    loss, grads = loss_and_grads(net, X, y, cfg.l2_weight)
    if not np.isfinite(loss):
        raise NonFiniteLoss(f"training loss became non-finite ({loss})")
    for k in range(frozen_layers):
        grads[k] = (np.zeros_like(grads[k][0]), np.zeros_like(grads[k][1]))
    if cfg.learning_rate > 0.0:
        opt.step(net, grads, cfg.learning_rate)
    return loss
