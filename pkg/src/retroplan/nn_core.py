"""Minimal dense network engine: forward/backward, losses, Adam, grad checks.

Everything runs in float64 on the CPU. Initialization and shuffling use
numpy's PCG64 generator, so (seed, data order, config) fully determine the
trained parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadArchitecture, DimMismatch, NonFiniteLoss

ACTIVATIONS = ("relu", "identity")

# Adam defaults
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class Layer:
    W: np.ndarray  # (out, in)
    b: np.ndarray  # (out,)
    activation: str

    @property
    def in_dim(self) -> int:
        return self.W.shape[1]

    @property
    def out_dim(self) -> int:
        return self.W.shape[0]


@dataclass
class DenseNet:
    layers: list[Layer]

    @property
    def input_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def dims(self) -> list[int]:
        return [self.input_dim] + [lay.out_dim for lay in self.layers]

    @property
    def activations(self) -> list[str]:
        return [lay.activation for lay in self.layers]

    def copy(self) -> "DenseNet":
        return DenseNet([Layer(l.W.copy(), l.b.copy(), l.activation) for l in self.layers])

    def n_params(self) -> int:
        return sum(l.W.size + l.b.size for l in self.layers)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    batch_size: int = 512
    max_epochs: int = 40
    early_stop_patience: int = 10
    seed: int = 0
    l2_weight: float = 0.0

    def __post_init__(self):
        if self.learning_rate <= 0 and self.learning_rate != 0.0:
            raise ValueError("learning_rate must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")


@dataclass
class GradReport:
    max_relative_error: float
    per_tensor: list[tuple[str, float]] = field(default_factory=list)


def init_net(dims: list[int], seed: int, activations: list[str] | None = None) -> DenseNet:
    """Build a net with Glorot scaled-uniform weights and zero biases.

    ``dims`` chains input through hidden sizes to the output; hidden layers
    default to ReLU with an identity (logits) output layer.
    """
    if len(dims) < 2:
        raise BadArchitecture(f"need at least input and output dims, got {dims}")
    if any(d < 1 for d in dims):
        raise BadArchitecture(f"layer sizes must be positive, got {dims}")
    n_layers = len(dims) - 1
    if activations is None:
        activations = ["relu"] * (n_layers - 1) + ["identity"]
    if len(activations) != n_layers:
        raise BadArchitecture("one activation per layer required")
    for a in activations:
        if a not in ACTIVATIONS:
            raise BadArchitecture(f"unknown activation {a!r}")
    rng = np.random.default_rng(seed)
    layers = []
    for k in range(n_layers):
        fan_in, fan_out = dims[k], dims[k + 1]
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        W = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        b = np.zeros(fan_out, dtype=np.float64)
        layers.append(Layer(W=W, b=b, activation=activations[k]))
    return DenseNet(layers)


# --- forward / backward ------------------------------------------------------


def forward_batch(net: DenseNet, X: np.ndarray) -> tuple[np.ndarray, list]:
    """Run a (n, input_dim) batch; returns (output, cache for backward)."""
    if X.ndim != 2 or X.shape[1] != net.input_dim:
        raise DimMismatch(f"expected (n, {net.input_dim}) input, got {X.shape}")
    a = X
    cache = [X]
    for lay in net.layers:
        z = a @ lay.W.T + lay.b
        a = np.maximum(z, 0.0) if lay.activation == "relu" else z
        cache.append(z)
        cache.append(a)
    return a, cache


def forward(net: DenseNet, x: np.ndarray) -> np.ndarray:
    """Single-vector forward pass to logits."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != net.input_dim:
        raise DimMismatch(f"expected vector of length {net.input_dim}, got {x.shape}")
    out, _ = forward_batch(net, x[None, :])
    return out[0]


def backward_batch(net: DenseNet, cache: list, d_out: np.ndarray):
    """Backprop an upstream gradient; returns (per-layer (dW, db), dX)."""
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(net.layers)
    delta = d_out
    for k in range(len(net.layers) - 1, -1, -1):
        lay = net.layers[k]
        z = cache[1 + 2 * k]
        a_prev = cache[2 * k]
        if lay.activation == "relu":
            delta = delta * (z > 0.0)
        dW = delta.T @ a_prev
        db = delta.sum(axis=0)
        grads[k] = (dW, db)
        delta = delta @ lay.W
    return grads, delta


# --- losses -------------------------------------------------------------------


def softmax(logits: np.ndarray) -> np.ndarray:
    """Stable softmax along the last axis."""
    z = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(logits: np.ndarray, label: int) -> tuple[float, np.ndarray]:
    """Loss and gradient for a single logits vector and class index."""
    logits = np.asarray(logits, dtype=np.float64)
    if not 0 <= label < logits.shape[-1]:
        raise DimMismatch(f"label {label} out of range for {logits.shape[-1]} classes")
    p = softmax(logits)
    shifted = logits - np.max(logits)
    log_z = np.log(np.exp(shifted).sum())
    loss = float(log_z - shifted[label])
    grad = p.copy()
    grad[label] -= 1.0
    return loss, grad


def cross_entropy_batch(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean loss over a batch and the gradient of the mean w.r.t. logits."""
    n = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    losses = log_z - shifted[np.arange(n), labels]
    p = softmax(logits)
    grad = p
    grad[np.arange(n), labels] -= 1.0
    return float(losses.mean()), grad / n


# --- optimizer -----------------------------------------------------------------


class AdamState:
    """Per-net Adam moments; update order is fixed for determinism."""

    def __init__(self, net: DenseNet):
        self.m = [(np.zeros_like(l.W), np.zeros_like(l.b)) for l in net.layers]
        self.v = [(np.zeros_like(l.W), np.zeros_like(l.b)) for l in net.layers]
        self.t = 0

    def step(self, net: DenseNet, grads, lr: float) -> None:
        self.t += 1
        b1c = 1.0 - ADAM_BETA1 ** self.t
        b2c = 1.0 - ADAM_BETA2 ** self.t
        for k, lay in enumerate(net.layers):
            for j, (param, grad) in enumerate(((lay.W, grads[k][0]), (lay.b, grads[k][1]))):
                m = self.m[k][j]
                v = self.v[k][j]
                m *= ADAM_BETA1
                m += (1.0 - ADAM_BETA1) * grad
                v *= ADAM_BETA2
                v += (1.0 - ADAM_BETA2) * grad * grad
                param -= lr * (m / b1c) / (np.sqrt(v / b2c) + ADAM_EPS)


def loss_and_grads(net: DenseNet, X: np.ndarray, y: np.ndarray, l2_weight: float = 0.0):
    """Objective (mean CE + l2 penalty on weights) and its parameter grads."""
    logits, cache = forward_batch(net, X)
    loss, d_logits = cross_entropy_batch(logits, y)
    grads, _ = backward_batch(net, cache, d_logits)
    if l2_weight > 0.0:
        for k, lay in enumerate(net.layers):
            loss += l2_weight * float((lay.W * lay.W).sum())
            grads[k] = (grads[k][0] + 2.0 * l2_weight * lay.W, grads[k][1])
    return loss, grads


def train_step(
    net: DenseNet,
    X: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig,
    opt: AdamState,
) -> float:
    """One Adam update on the mean batch objective; returns pre-update loss."""
    if X.shape[0] == 0:
        raise DimMismatch("empty batch")
    loss, grads = loss_and_grads(net, X, y, cfg.l2_weight)
    if not np.isfinite(loss):
        raise NonFiniteLoss(f"training loss became non-finite ({loss})")
    if cfg.learning_rate > 0.0:
        opt.step(net, grads, cfg.learning_rate)
    return loss


# --- gradient verification -----------------------------------------------------


def grad_check(net: DenseNet, x: np.ndarray, label: int, eps: float = 1e-6) -> GradReport:
    """Central finite differences over every parameter vs analytic gradients."""
    if not 0.0 < eps <= 1e-3:
        raise ValueError("eps must be in (0, 1e-3]")
    X = np.asarray(x, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    y = np.array([label] * X.shape[0], dtype=np.int64)

    _, grads = loss_and_grads(net, X, y)

    def loss_at() -> float:
        logits, _ = forward_batch(net, X)
        loss, _ = cross_entropy_batch(logits, y)
        return loss

    per_tensor: list[tuple[str, float]] = []
    worst = 0.0
    for k, lay in enumerate(net.layers):
        for name, param, analytic in ((f"layer{k}.W", lay.W, grads[k][0]),
                                      (f"layer{k}.b", lay.b, grads[k][1])):
            flat = param.reshape(-1)
            a_flat = analytic.reshape(-1)
            tensor_worst = 0.0
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + eps
                lp = loss_at()
                flat[i] = orig - eps
                lm = loss_at()
                flat[i] = orig
                fd = (lp - lm) / (2.0 * eps)
                denom = max(abs(a_flat[i]), abs(fd))
                # components below 1e-4 compare absolutely: finite-difference
                # roundoff (~1e-16/eps) would otherwise swamp the ratio
                rel = abs(a_flat[i] - fd) if denom < 1e-4 else abs(a_flat[i] - fd) / denom
                tensor_worst = max(tensor_worst, rel)
            per_tensor.append((name, tensor_worst))
            worst = max(worst, tensor_worst)
    return GradReport(max_relative_error=worst, per_tensor=per_tensor)
