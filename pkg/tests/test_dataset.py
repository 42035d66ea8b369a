import pytest

from retroplan.dataset import (
    Dataset,
    Row,
    clean,
    load_dataset,
    save_dataset,
    split,
)
from retroplan.errors import AllValuesAnomalous, BadValue, MissingColumn, TooFewRows
from retroplan.ratings import EnergyRating
from retroplan.synthetic import generate_synthetic


def _rows_with_floor_u(schema, values):
    base = generate_synthetic(1, seed=0, schema=schema).rows[0].profile
    rows = []
    for v in values:
        p = dict(base)
        p["floor_u"] = v
        rows.append(Row(p, EnergyRating.C1))
    return Dataset(schema=schema, rows=tuple(rows), provenance="synthetic")


# --- loading ------------------------------------------------------------------


def test_load_well_formed_file(tmp_path, schema):
    data = generate_synthetic(3, seed=5, schema=schema)
    path = tmp_path / "d.csv"
    save_dataset(data, path)
    loaded = load_dataset(path, schema)
    assert len(loaded) == 3
    assert [r.rating for r in loaded.rows] == [r.rating for r in data.rows]
    # numeric values survive the text round trip exactly
    for a, b in zip(loaded.rows, data.rows):
        assert a.profile == b.profile


def test_load_missing_column(tmp_path, schema):
    data = generate_synthetic(2, seed=5, schema=schema)
    path = tmp_path / "d.csv"
    save_dataset(data, path)
    text = path.read_text("utf-8").replace("wall_u", "wall_u_runs")
    path.write_text(text, encoding="utf-8")
    with pytest.raises(MissingColumn, match="wall_u"):
        load_dataset(path, schema)


def test_load_unknown_county_code_reports_row(tmp_path, schema):
    data = generate_synthetic(3, seed=5, schema=schema)
    path = tmp_path / "d.csv"
    save_dataset(data, path)
    lines = path.read_text("utf-8").splitlines()
    county_col = lines[0].split(",").index("county_code")
    cells = lines[2].split(",")
    cells[county_col] = "XX"
    lines[2] = ",".join(cells)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(BadValue, match=r"row 1.*county_code"):
        load_dataset(path, schema)


def test_load_non_numeric_continuous(tmp_path, schema):
    data = generate_synthetic(2, seed=5, schema=schema)
    path = tmp_path / "d.csv"
    save_dataset(data, path)
    lines = path.read_text("utf-8").splitlines()
    col = lines[0].split(",").index("wall_area")
    cells = lines[1].split(",")
    cells[col] = "abc"
    lines[1] = ",".join(cells)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(BadValue, match="wall_area"):
        load_dataset(path, schema)


def test_load_empty_file(tmp_path, schema):
    path = tmp_path / "d.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(BadValue, match="header"):
        load_dataset(path, schema)


# --- cleaning ------------------------------------------------------------------


def test_impute_median_hand_fixture(schema):
    # non-zero floor_u values {0.4, 0.6, 0.8} -> median 0.6 fills the zero
    data = _rows_with_floor_u(schema, [0.0, 0.4, 0.6, 0.8])
    cleaned, report = clean(data, "impute_median")
    assert cleaned.rows[0].profile["floor_u"] == pytest.approx(0.6)
    fc = report.per_feature["floor_u"]
    assert fc.zeros_detected == 1 and fc.imputed == 1
    assert fc.imputation_value == pytest.approx(0.6)


def test_clean_no_zeros_is_identity(small_data):
    cleaned, report = clean(small_data, "impute_median")
    assert report.total_zeros == 0
    assert cleaned.rows == small_data.rows


def test_drop_row_policy(schema):
    data = _rows_with_floor_u(schema, [0.0, 0.5, 0.0, 0.7, 0.9, 1.1, 0.8, 0.6, 1.0, 0.4])
    cleaned, report = clean(data, "drop_row")
    assert len(cleaned) == 8
    assert report.rows_dropped == 2
    assert report.per_feature["floor_u"].rows_dropped == 2


def test_clean_idempotent(schema):
    data = _rows_with_floor_u(schema, [0.0, 0.4, 0.6, 0.8, 0.0])
    once, first = clean(data, "impute_median")
    twice, second = clean(once, "impute_median")
    assert first.total_zeros == 2
    assert second.total_zeros == 0
    assert twice.rows == once.rows


def test_all_values_anomalous(schema):
    data = _rows_with_floor_u(schema, [0.0, 0.0, 0.0])
    with pytest.raises(AllValuesAnomalous, match="floor_u"):
        clean(data, "impute_median")


def test_clean_counts_every_flagged_feature(schema):
    base = generate_synthetic(1, seed=0, schema=schema).rows[0].profile
    p0 = dict(base); p0["floor_u"] = 0.0; p0["wall_u"] = 0.0
    p1 = dict(base)
    data = Dataset(schema=schema, rows=(Row(p0, EnergyRating.D1), Row(p1, EnergyRating.D1)))
    cleaned, report = clean(data, "impute_median")
    assert report.per_feature["floor_u"].imputed == 1
    assert report.per_feature["wall_u"].imputed == 1
    assert cleaned.rows[0].profile["wall_u"] == base["wall_u"]


# --- splitting -------------------------------------------------------------------


def test_split_sizes_1000(small_data):
    data = generate_synthetic(1000, seed=7)
    s = split(data, seed=7)
    assert (len(s.train), len(s.validation), len(s.test)) == (800, 100, 100)


def test_split_sizes_within_one_row():
    for n in (10, 57, 101, 999):
        data = generate_synthetic(n, seed=3)
        s = split(data, seed=1)
        assert abs(len(s.train) - 0.8 * n) <= 1
        assert abs(len(s.validation) - 0.1 * n) <= 1
        assert abs(len(s.test) - 0.1 * n) <= 1
        assert len(s.train) + len(s.validation) + len(s.test) == n


def test_split_deterministic(small_data):
    a = split(small_data, seed=4)
    b = split(small_data, seed=4)
    assert a.train.rows == b.train.rows
    assert a.validation.rows == b.validation.rows
    assert a.test.rows == b.test.rows


def test_split_differs_across_seeds(small_data):
    a = split(small_data, seed=1)
    b = split(small_data, seed=2)
    assert a.train.row_digests() != b.train.row_digests()


def test_split_partitions_disjoint_and_exhaustive(small_data):
    s = split(small_data, seed=9)
    d_train = s.train.row_digests()
    d_val = s.validation.row_digests()
    d_test = s.test.row_digests()
    assert not (d_train & d_val) and not (d_train & d_test) and not (d_val & d_test)
    assert len(s.train) + len(s.validation) + len(s.test) == len(small_data)


def test_split_too_few_rows(schema):
    data = _rows_with_floor_u(schema, [0.5] * 9)
    with pytest.raises(TooFewRows):
        split(data, seed=1)


def test_saved_file_round_trips_exactly(tmp_path, schema):
    data = generate_synthetic(50, seed=12, schema=schema)
    path = tmp_path / "round.csv"
    save_dataset(data, path)
    loaded = load_dataset(path, schema)
    for a, b in zip(loaded.rows, data.rows):
        for name in schema.names:
            va, vb = a.profile[name], b.profile[name]
            assert va == vb
        assert a.rating is b.rating
