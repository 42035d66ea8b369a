import json

import pytest

from retroplan.errors import BadValue, SchemaError, UnknownFeature
from retroplan.schema import (
    FeatureSchema,
    FeatureSpec,
    default_schema,
    load_schema,
    schema_from_jsonable,
    validate_canonical,
)

MINI = FeatureSchema(
    features=(
        FeatureSpec(name="a", kind="continuous", unit="m", group="envelope",
                    min_value=0, max_value=10),
        FeatureSpec(name="b", kind="continuous", unit="", group="fabric",
                    min_value=-5, max_value=5),
        FeatureSpec(name="c", kind="categorical", group="spatial", codes=("x", "y")),
    ),
    name="mini",
)


def test_default_schema_has_41_unique_features(schema):
    assert len(schema) == 41
    assert len(set(schema.names)) == 41
    validate_canonical(schema)


def test_default_schema_mandatory_features(schema):
    for name in ("wall_area", "roof_area", "floor_area", "window_area", "door_area",
                 "wall_u", "roof_u", "floor_u", "window_u", "door_u",
                 "main_heating_efficiency", "water_storage_volume"):
        assert schema.feature(name).kind == "continuous"
    county = schema.feature("county_code")
    assert county.kind == "categorical"
    assert len(county.codes) == 26


def test_group_labels_valid(schema):
    assert {f.group for f in schema} <= {"envelope", "fabric", "heating", "hot-water", "spatial"}


def test_validate_profile_happy_path():
    p = MINI.validate_profile({"a": 1.5, "b": -1, "c": "x"})
    assert p == {"a": 1.5, "b": -1.0, "c": "x"}


def test_validate_profile_unknown_feature():
    with pytest.raises(UnknownFeature):
        MINI.validate_profile({"a": 1, "b": 0, "c": "x", "zz": 3})


def test_validate_profile_missing_feature():
    with pytest.raises(BadValue):
        MINI.validate_profile({"a": 1, "b": 0})


def test_validate_profile_bad_code():
    with pytest.raises(BadValue):
        MINI.validate_profile({"a": 1, "b": 0, "c": "nope"})


def test_validate_profile_non_finite():
    with pytest.raises(BadValue):
        MINI.validate_profile({"a": float("nan"), "b": 0, "c": "x"})


def test_validate_range_only_when_asked():
    MINI.validate_profile({"a": 99.0, "b": 0, "c": "x"})  # out of range but allowed
    with pytest.raises(BadValue):
        MINI.validate_profile({"a": 99.0, "b": 0, "c": "x"}, check_range=True)


def test_duplicate_names_rejected():
    with pytest.raises(SchemaError):
        FeatureSchema(features=(
            FeatureSpec(name="a", kind="continuous", min_value=0, max_value=1),
            FeatureSpec(name="a", kind="continuous", min_value=0, max_value=1),
        ))


def test_schema_hash_stable_and_sensitive(schema):
    again = schema_from_jsonable(schema.to_jsonable())
    assert again.schema_hash == schema.schema_hash
    assert MINI.schema_hash != schema.schema_hash


def test_load_schema_file_round_trip(tmp_path, schema):
    path = tmp_path / "schema.json"
    path.write_text(json.dumps(schema.to_jsonable()), encoding="utf-8")
    loaded = load_schema(path)
    assert loaded.names == schema.names
    assert loaded.schema_hash == schema.schema_hash


def test_validate_canonical_rejects_small_schema():
    with pytest.raises(SchemaError):
        validate_canonical(MINI)
