"""Save and load trained models in the LLEM1 container."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .classifiers import HierarchicalModel, NetClassifier, ScarfNetClassifier
from .encoder import Encoder, Slot
from .errors import BadCheckpoint
from .nn_core import DenseNet, Layer
from .ratings import ALL_COARSE, CoarseRating, EnergyRating
from .schema import FeatureSchema
from .trees import ForestModel, GbtModel, TreeModel, TreeNode


# --- encoder ---------------------------------------------------------------


def encoder_meta(enc: Encoder) -> dict:
    return {
        "schema_name": enc.schema.name,
        "encoded_dim": enc.encoded_dim,
        "means": enc.means,
        "stds": enc.stds,
    }


def encoder_from_meta(meta: dict, schema: FeatureSchema) -> Encoder:
    slots: list[Slot] = []
    start = 0
    for spec in schema.features:
        width = 1 if spec.kind == "continuous" else len(spec.codes)
        slots.append(Slot(feature=spec.name, start=start, width=width))
        start += width
    if meta.get("encoded_dim") != start:
        raise BadCheckpoint(
            f"encoder dim {meta.get('encoded_dim')} does not match schema layout {start}"
        )
    return Encoder(
        schema=schema,
        means={k: float(v) for k, v in meta["means"].items()},
        stds={k: float(v) for k, v in meta["stds"].items()},
        slots=tuple(slots),
        encoded_dim=start,
    )


# --- dense nets --------------------------------------------------------------


def _net_arrays(net: DenseNet, prefix: str = "") -> dict[str, np.ndarray]:
    arrays = {}
    for k, lay in enumerate(net.layers):
        arrays[f"{prefix}layer{k}.W"] = lay.W
        arrays[f"{prefix}layer{k}.b"] = lay.b
    return arrays


def _net_meta(net: DenseNet) -> dict:
    return {"dims": net.dims, "activations": net.activations}


def _net_from(meta: dict, arrays: dict[str, np.ndarray], prefix: str = "") -> DenseNet:
    dims = meta["dims"]
    layers = []
    for k in range(len(dims) - 1):
        layers.append(
            Layer(
                W=arrays[f"{prefix}layer{k}.W"],
                b=arrays[f"{prefix}layer{k}.b"],
                activation=meta["activations"][k],
            )
        )
    return DenseNet(layers)


def _classes_to_meta(classes: tuple) -> list[str]:
    return [c.value for c in classes]


def _classes_from_meta(values: list[str]) -> tuple:
    if set(values) <= {c.value for c in ALL_COARSE} and len(values) == 5:
        return tuple(CoarseRating(v) for v in values)
    return tuple(EnergyRating(v) for v in values)


def _stage_meta(model: NetClassifier) -> dict:
    meta = _net_meta(model.net)
    meta["classes"] = _classes_to_meta(model.classes)
    if isinstance(model, ScarfNetClassifier):
        meta["f_layers"] = model.f_layers
        meta["pretrain_loss"] = model.pretrain_loss
    return meta


def _stage_from(meta: dict, arrays: dict, enc: Encoder, prefix: str = "") -> NetClassifier:
    net = _net_from(meta, arrays, prefix)
    classes = _classes_from_meta(meta["classes"])
    if "f_layers" in meta:
        return ScarfNetClassifier(
            net=net, encoder=enc, classes=classes,
            f_layers=int(meta["f_layers"]),
            pretrain_loss=float(meta.get("pretrain_loss", float("nan"))),
        )
    return NetClassifier(net=net, encoder=enc, classes=classes)


# --- trees ---------------------------------------------------------------------


def _tree_to_dict(node: TreeNode) -> dict:
    d: dict = {"n": node.n_samples, "i": node.impurity}
    if node.is_leaf:
        if node.distribution is not None:
            d["d"] = [float(x) for x in node.distribution]
        else:
            d["v"] = float(node.value)
        return d
    d["f"] = node.feature
    d["t"] = node.threshold
    d["l"] = _tree_to_dict(node.left)
    d["r"] = _tree_to_dict(node.right)
    return d


def _tree_from_dict(d: dict) -> TreeNode:
    node = TreeNode(n_samples=int(d["n"]), impurity=float(d["i"]))
    if "f" in d:
        node.feature = int(d["f"])
        node.threshold = float(d["t"])
        node.left = _tree_from_dict(d["l"])
        node.right = _tree_from_dict(d["r"])
    elif "d" in d:
        node.distribution = np.array(d["d"], dtype=np.float64)
    else:
        node.value = float(d["v"])
    return node


# --- top-level save/load ----------------------------------------------------------


def save_model(path: str | Path, model, extra_meta: dict | None = None) -> None:
    enc = model.encoder
    schema_hash = enc.schema.schema_hash
    meta_extra = extra_meta or {}

    if isinstance(model, HierarchicalModel):
        arrays: dict[str, np.ndarray] = {}
        arrays.update(_net_arrays(model.coarse.net, "coarse/"))
        fine_meta = {}
        for group in ALL_COARSE:
            stage = model.fine[group]
            arrays.update(_net_arrays(stage.net, f"fine/{group.value}/"))
            fine_meta[group.value] = _stage_meta(stage)
        model_meta = {
            "kind": "hierarchical",
            "coarse": _stage_meta(model.coarse),
            "fine": fine_meta,
            **meta_extra,
        }
        save_checkpoint(path, "hierarchical_classifier", schema_hash,
                        encoder_meta(enc), model_meta, arrays)
    elif isinstance(model, ScarfNetClassifier):
        model_meta = {"kind": "scarf", **_stage_meta(model), **meta_extra}
        save_checkpoint(path, "scarf_classifier", schema_hash,
                        encoder_meta(enc), model_meta, _net_arrays(model.net))
    elif isinstance(model, NetClassifier):
        model_meta = {"kind": "mlp", **_stage_meta(model), **meta_extra}
        save_checkpoint(path, "mlp_classifier", schema_hash,
                        encoder_meta(enc), model_meta, _net_arrays(model.net))
    elif isinstance(model, TreeModel):
        model_meta = {"kind": "decision_tree", "tree": _tree_to_dict(model.root),
                      "n_classes": model.n_classes, **meta_extra}
        save_checkpoint(path, "decision_tree", schema_hash,
                        encoder_meta(enc), model_meta)
    elif isinstance(model, ForestModel):
        model_meta = {
            "kind": "random_forest",
            "trees": [_tree_to_dict(t) for t in model.trees],
            "n_classes": model.n_classes, "seed": model.seed, "mtry": model.mtry,
            **meta_extra,
        }
        save_checkpoint(path, "random_forest", schema_hash,
                        encoder_meta(enc), model_meta)
    elif isinstance(model, GbtModel):
        model_meta = {
            "kind": "gbt",
            "class_trees": [[_tree_to_dict(t) for t in rounds] for rounds in model.class_trees],
            "base_scores": [float(x) for x in model.base_scores],
            "shrinkage": model.shrinkage, "n_classes": model.n_classes,
            **meta_extra,
        }
        save_checkpoint(path, "gbt", schema_hash, encoder_meta(enc), model_meta)
    else:
        raise BadCheckpoint(f"cannot persist model of type {type(model).__name__}")


def load_model(path: str | Path, schema: FeatureSchema):
    """Load any persisted model; rejects checkpoints built on another schema."""
    ckpt = load_checkpoint(path, expect_schema_hash=schema.schema_hash)
    return model_from_checkpoint(ckpt, schema)


def model_from_checkpoint(ckpt: Checkpoint, schema: FeatureSchema):
    enc = encoder_from_meta(ckpt.encoder_meta, schema)
    meta = ckpt.model_meta
    if ckpt.section in ("mlp_classifier", "scarf_classifier"):
        return _stage_from(meta, ckpt.arrays, enc)
    if ckpt.section == "hierarchical_classifier":
        coarse = _stage_from(meta["coarse"], ckpt.arrays, enc, "coarse/")
        fine = {}
        for group in ALL_COARSE:
            fine[group] = _stage_from(
                meta["fine"][group.value], ckpt.arrays, enc, f"fine/{group.value}/"
            )
        return HierarchicalModel(coarse=coarse, fine=fine, encoder=enc)
    if ckpt.section == "decision_tree":
        return TreeModel(root=_tree_from_dict(meta["tree"]), encoder=enc,
                         n_classes=int(meta["n_classes"]))
    if ckpt.section == "random_forest":
        return ForestModel(
            trees=[_tree_from_dict(t) for t in meta["trees"]], encoder=enc,
            n_classes=int(meta["n_classes"]), seed=int(meta.get("seed", 0)),
            mtry=int(meta.get("mtry", 0)),
        )
    if ckpt.section == "gbt":
        return GbtModel(
            class_trees=[[_tree_from_dict(t) for t in rounds] for rounds in meta["class_trees"]],
            base_scores=np.array(meta["base_scores"], dtype=np.float64),
            shrinkage=float(meta["shrinkage"]), encoder=enc,
            n_classes=int(meta["n_classes"]),
        )
    raise BadCheckpoint(f"unknown checkpoint section {ckpt.section!r}")


def save_scarf_encoder(path: str | Path, pre, enc: Encoder, extra_meta: dict | None = None) -> None:
    """Persist a pre-trained encoder on its own (no classification head)."""
    model_meta = {
        "kind": "scarf_encoder",
        **_net_meta(pre.net),
        "corruption_rate": pre.corruption_rate,
        "temperature": pre.temperature,
        "epochs": pre.epochs,
        "final_loss": pre.final_loss,
        **(extra_meta or {}),
    }
    save_checkpoint(path, "scarf_encoder", enc.schema.schema_hash,
                    encoder_meta(enc), model_meta, _net_arrays(pre.net))


def load_scarf_encoder(path: str | Path, schema: FeatureSchema):
    from .scarf import ScarfEncoder

    ckpt = load_checkpoint(path, expect_schema_hash=schema.schema_hash)
    if ckpt.section != "scarf_encoder":
        raise BadCheckpoint(f"{path}: expected an encoder-only artifact, got {ckpt.section!r}")
    meta = ckpt.model_meta
    return ScarfEncoder(
        net=_net_from(meta, ckpt.arrays),
        corruption_rate=float(meta["corruption_rate"]),
        temperature=float(meta["temperature"]),
        epochs=int(meta["epochs"]),
        final_loss=float(meta["final_loss"]),
    )


def file_digest(path: str | Path, length: int = 12) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()[:length]
