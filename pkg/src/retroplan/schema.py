"""Feature schema: the canonical data dictionary all models and tools share.

A schema is an ordered list of feature descriptors. The canonical 41-feature
BER-style schema ships as a packaged asset; smaller ad-hoc schemas are allowed
for tests and fixtures. A home profile is a plain dict mapping feature name to
value (floats for continuous features, code strings for categoricals).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import BadValue, SchemaError, UnknownFeature

GROUPS = ("envelope", "fabric", "heating", "hot-water", "spatial")

#: features every canonical schema must carry, with their expected kind
MANDATORY_FEATURES = {
    "wall_area": "continuous",
    "roof_area": "continuous",
    "floor_area": "continuous",
    "window_area": "continuous",
    "door_area": "continuous",
    "wall_u": "continuous",
    "roof_u": "continuous",
    "floor_u": "continuous",
    "window_u": "continuous",
    "door_u": "continuous",
    "main_heating_efficiency": "continuous",
    "water_storage_volume": "continuous",
    "county_code": "categorical",
}

HomeProfile = dict  # feature name -> float | str; validated against a schema


@dataclass(frozen=True)
class FeatureSpec:
    """One feature of the data dictionary."""

    name: str
    kind: str  # "continuous" | "categorical"
    unit: str = ""
    group: str = "envelope"
    min_value: float | None = None
    max_value: float | None = None
    codes: tuple[str, ...] | None = None
    zero_anomalous: bool = False

    def __post_init__(self):
        if self.kind not in ("continuous", "categorical"):
            raise SchemaError(f"feature {self.name!r}: unknown kind {self.kind!r}")
        if self.group not in GROUPS:
            raise SchemaError(f"feature {self.name!r}: unknown group {self.group!r}")
        if self.kind == "categorical":
            if not self.codes:
                raise SchemaError(f"categorical feature {self.name!r} needs codes")
            if len(set(self.codes)) != len(self.codes):
                raise SchemaError(f"feature {self.name!r}: duplicate codes")
        else:
            if self.min_value is None or self.max_value is None:
                raise SchemaError(f"continuous feature {self.name!r} needs min/max")
            if self.min_value > self.max_value:
                raise SchemaError(f"feature {self.name!r}: min > max")


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered, immutable collection of feature descriptors."""

    features: tuple[FeatureSpec, ...]
    name: str = "adhoc"
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate feature names in schema")
        object.__setattr__(self, "_index", {f.name: i for i, f in enumerate(self.features)})

    def __len__(self) -> int:
        return len(self.features)

    def __iter__(self):
        return iter(self.features)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def continuous(self) -> tuple[FeatureSpec, ...]:
        return tuple(f for f in self.features if f.kind == "continuous")

    @property
    def categorical(self) -> tuple[FeatureSpec, ...]:
        return tuple(f for f in self.features if f.kind == "categorical")

    def feature(self, name: str) -> FeatureSpec:
        try:
            return self.features[self._index[name]]
        except KeyError:
            raise UnknownFeature(f"feature {name!r} not in schema") from None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownFeature(f"feature {name!r} not in schema") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    # --- validation -----------------------------------------------------

    def validate_value(self, spec: FeatureSpec, value, check_range: bool = False) -> float | str:
        """Coerce and check a single value; returns the canonical form."""
        if spec.kind == "categorical":
            if not isinstance(value, str) or value not in spec.codes:
                raise BadValue(f"feature {spec.name!r}: unknown code {value!r}")
            return value
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise BadValue(f"feature {spec.name!r}: expected a number, got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            raise BadValue(f"feature {spec.name!r}: non-finite value {value!r}")
        if check_range and not (spec.min_value <= v <= spec.max_value):
            raise BadValue(
                f"feature {spec.name!r}: value {v} outside range "
                f"[{spec.min_value}, {spec.max_value}]"
            )
        return v

    def validate_profile(self, profile: Mapping, check_range: bool = False) -> HomeProfile:
        """Check a profile dict against the schema; returns a clean copy.

        Range checks are off by default: raw data legitimately carries
        out-of-range anomalies (zeros) that the cleaning stage fixes.
        """
        extra = set(profile) - set(self._index)
        if extra:
            raise UnknownFeature(f"unknown feature {sorted(extra)[0]!r} in profile")
        out: HomeProfile = {}
        for spec in self.features:
            if spec.name not in profile:
                raise BadValue(f"feature {spec.name!r} missing from profile")
            out[spec.name] = self.validate_value(spec, profile[spec.name], check_range)
        return out

    # --- serialization ---------------------------------------------------

    def to_jsonable(self) -> dict:
        feats = []
        for f in self.features:
            d: dict = {"name": f.name, "kind": f.kind, "unit": f.unit, "group": f.group}
            if f.kind == "continuous":
                d["min"] = f.min_value
                d["max"] = f.max_value
                d["zero_anomalous"] = f.zero_anomalous
            else:
                d["codes"] = list(f.codes)
            feats.append(d)
        return {"name": self.name, "features": feats}

    def canonical_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True, separators=(",", ":"))

    @property
    def schema_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def schema_from_jsonable(doc: Mapping) -> FeatureSchema:
    feats = []
    for d in doc["features"]:
        feats.append(
            FeatureSpec(
                name=d["name"],
                kind=d["kind"],
                unit=d.get("unit", ""),
                group=d.get("group", "envelope"),
                min_value=d.get("min"),
                max_value=d.get("max"),
                codes=tuple(d["codes"]) if d.get("codes") else None,
                zero_anomalous=bool(d.get("zero_anomalous", False)),
            )
        )
    return FeatureSchema(features=tuple(feats), name=doc.get("name", "adhoc"))


def load_schema(path: str | Path) -> FeatureSchema:
    """Load a schema from its JSON file form."""
    with open(path, "r", encoding="utf-8") as fh:
        return schema_from_jsonable(json.load(fh))


def validate_canonical(schema: FeatureSchema) -> None:
    """Enforce the invariants of the shipped 41-feature data dictionary."""
    if len(schema) != 41:
        raise SchemaError(f"canonical schema must have 41 features, got {len(schema)}")
    for name, kind in MANDATORY_FEATURES.items():
        if name not in schema:
            raise SchemaError(f"canonical schema missing mandatory feature {name!r}")
        if schema.feature(name).kind != kind:
            raise SchemaError(f"mandatory feature {name!r} must be {kind}")
    if len(schema.feature("county_code").codes) != 26:
        raise SchemaError("county_code must carry 26 codes")


@lru_cache(maxsize=1)
def default_schema() -> FeatureSchema:
    """The packaged 41-feature BER-style schema."""
    text = resources.files("retroplan.assets").joinpath("feature_schema.json").read_text("utf-8")
    schema = schema_from_jsonable(json.loads(text))
    validate_canonical(schema)
    return schema


def profile_digest(profile: Mapping, rating: str | None = None) -> str:
    """Stable content hash of a row, used for leakage checks and plan ids."""
    body = json.dumps([sorted(profile.items()), rating], sort_keys=True, default=str)
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


def iter_feature_names(schema: FeatureSchema) -> Iterable[str]:
    return schema.names
