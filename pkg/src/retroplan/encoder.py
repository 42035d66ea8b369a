"""Feature encoding: z-scored continuous values plus one-hot categoricals.

Statistics are fit on the train split only. Slots follow schema order, each
feature occupying one slot (continuous) or one slot per code (categorical),
so encoded columns map back to their source feature for importance reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import Dataset
from .errors import BadValue
from .schema import FeatureSchema, HomeProfile


@dataclass(frozen=True)
class Slot:
    feature: str
    start: int
    width: int


@dataclass(frozen=True)
class Encoder:
    schema: FeatureSchema
    means: dict[str, float]
    stds: dict[str, float]
    slots: tuple[Slot, ...]
    encoded_dim: int

    @property
    def slot_feature_names(self) -> tuple[str, ...]:
        """Source feature name of every encoded column."""
        names = []
        for slot in self.slots:
            names.extend([slot.feature] * slot.width)
        return tuple(names)


def fit_encoder(train: Dataset) -> Encoder:
    """Fit per-feature statistics on the train split.

    Continuous features get population mean/std (constant columns store
    std 1 so their z-scores are exactly zero); categorical layouts come from
    the schema's code lists, not from the data.
    """
    if len(train) == 0:
        raise BadValue("cannot fit an encoder on an empty dataset")
    schema = train.schema
    means: dict[str, float] = {}
    stds: dict[str, float] = {}
    slots: list[Slot] = []
    start = 0
    for spec in schema.features:
        if spec.kind == "continuous":
            col = np.array([r.profile[spec.name] for r in train.rows], dtype=np.float64)
            mean = float(col.mean())
            std = float(col.std())  # population std (ddof=0)
            means[spec.name] = mean
            stds[spec.name] = std if std > 0.0 else 1.0
            width = 1
        else:
            width = len(spec.codes)
        slots.append(Slot(feature=spec.name, start=start, width=width))
        start += width
    return Encoder(schema=schema, means=means, stds=stds, slots=tuple(slots), encoded_dim=start)


def encode(enc: Encoder, profile: HomeProfile) -> np.ndarray:
    """Encode one profile to a vector of length ``encoded_dim``."""
    return encode_profiles(enc, [profile])[0]


def encode_profiles(enc: Encoder, profiles: Sequence[HomeProfile]) -> np.ndarray:
    """Encode many profiles into an (n, encoded_dim) float64 matrix."""
    n = len(profiles)
    out = np.zeros((n, enc.encoded_dim), dtype=np.float64)
    for slot in enc.slots:
        spec = enc.schema.feature(slot.feature)
        if spec.kind == "continuous":
            mean = enc.means[spec.name]
            std = enc.stds[spec.name]
            col = np.fromiter(
                (float(p[spec.name]) for p in profiles), dtype=np.float64, count=n
            )
            out[:, slot.start] = (col - mean) / std
        else:
            code_index = {c: k for k, c in enumerate(spec.codes)}
            for i, p in enumerate(profiles):
                out[i, slot.start + code_index[p[spec.name]]] = 1.0
    return out


def encode_dataset(enc: Encoder, data: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Encode a dataset into (X, y) with y as rating indices."""
    X = encode_profiles(enc, data.profiles)
    y = data.label_indices()
    return X, y
