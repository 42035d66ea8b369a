"""Dataset container plus loading, cleaning and splitting operations."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .errors import AllValuesAnomalous, BadValue, MissingColumn, TooFewRows
from .ratings import EnergyRating
from .schema import FeatureSchema, HomeProfile, profile_digest

RATING_COLUMN = "rating"


class Row(NamedTuple):
    profile: HomeProfile
    rating: EnergyRating


@dataclass(frozen=True)
class Dataset:
    """Immutable collection of (profile, rating) rows over one schema."""

    schema: FeatureSchema
    rows: tuple[Row, ...]
    provenance: str = "real"  # "real" | "synthetic"

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.rows)

    @property
    def profiles(self) -> list[HomeProfile]:
        return [r.profile for r in self.rows]

    @property
    def ratings(self) -> list[EnergyRating]:
        return [r.rating for r in self.rows]

    def label_indices(self) -> np.ndarray:
        return np.array([r.rating.index for r in self.rows], dtype=np.int64)

    def column(self, name: str) -> list:
        self.schema.feature(name)
        return [r.profile[name] for r in self.rows]

    def subset(self, indices) -> "Dataset":
        return Dataset(
            schema=self.schema,
            rows=tuple(self.rows[i] for i in indices),
            provenance=self.provenance,
        )

    def row_digests(self) -> set[str]:
        return {profile_digest(r.profile, r.rating.value) for r in self.rows}


@dataclass(frozen=True)
class SplitSet:
    train: Dataset
    validation: Dataset
    test: Dataset
    seed: int


@dataclass
class FeatureCleaning:
    zeros_detected: int = 0
    imputed: int = 0
    rows_dropped: int = 0
    imputation_value: float | None = None


@dataclass
class CleaningReport:
    policy: str
    per_feature: dict[str, FeatureCleaning] = field(default_factory=dict)
    rows_dropped: int = 0

    @property
    def total_imputed(self) -> int:
        return sum(c.imputed for c in self.per_feature.values())

    @property
    def total_zeros(self) -> int:
        return sum(c.zeros_detected for c in self.per_feature.values())

    def is_clean(self) -> bool:
        return self.total_zeros == 0


# --- loading ---------------------------------------------------------------


def load_dataset(path: str | Path, schema: FeatureSchema) -> Dataset:
    """Load a delimited-text dataset (header row, comma separator).

    The header must name every schema feature plus a final ``rating`` column.
    Unparseable rows are collected and reported together in a single BadValue
    error rather than silently skipped.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise BadValue(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        col_of = {name: i for i, name in enumerate(header)}
        for name in schema.names:
            if name not in col_of:
                raise MissingColumn(f"{path}: header lacks feature column {name!r}")
        if RATING_COLUMN not in col_of:
            raise MissingColumn(f"{path}: header lacks {RATING_COLUMN!r} column")

        rows: list[Row] = []
        problems: list[str] = []
        for row_idx, record in enumerate(reader):
            if not record or all(not c.strip() for c in record):
                continue
            try:
                rows.append(_parse_record(record, row_idx, col_of, schema))
            except BadValue as exc:
                problems.append(str(exc))

    if problems:
        shown = "; ".join(problems[:5])
        more = f" (+{len(problems) - 5} more)" if len(problems) > 5 else ""
        raise BadValue(f"{path}: {len(problems)} bad row(s): {shown}{more}")
    return Dataset(schema=schema, rows=tuple(rows), provenance="real")


def _parse_record(record, row_idx, col_of, schema) -> Row:
    profile: HomeProfile = {}
    for spec in schema.features:
        raw = record[col_of[spec.name]].strip()
        if spec.kind == "continuous":
            try:
                value = float(raw)
            except ValueError:
                raise BadValue(
                    f"row {row_idx}: feature {spec.name!r}: non-numeric value {raw!r}"
                ) from None
            profile[spec.name] = schema.validate_value(spec, value)
        else:
            if raw not in spec.codes:
                raise BadValue(f"row {row_idx}: feature {spec.name!r}: unknown code {raw!r}")
            profile[spec.name] = raw
    raw_rating = record[col_of[RATING_COLUMN]].strip()
    try:
        rating = EnergyRating.from_str(raw_rating)
    except ValueError:
        raise BadValue(f"row {row_idx}: unknown rating {raw_rating!r}") from None
    return Row(profile=profile, rating=rating)


def save_dataset(data: Dataset, path: str | Path) -> None:
    """Write a dataset in the same delimited-text form load_dataset reads."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = data.schema.names
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + [RATING_COLUMN])
        for profile, rating in data.rows:
            writer.writerow([_format_cell(profile[n]) for n in names] + [rating.value])


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    # repr round-trips doubles exactly and keeps files compact
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


# --- cleaning ----------------------------------------------------------------


def clean(data: Dataset, policy: str = "impute_median") -> tuple[Dataset, CleaningReport]:
    """Remove zero anomalies from flagged features (U-values and areas).

    Under ``impute_median`` each zero is replaced by the median of the
    feature's non-zero values; under ``drop_row`` any row carrying a zero in a
    flagged feature is dropped. Every change is tallied in the report.
    """
    if policy not in ("impute_median", "drop_row"):
        raise ValueError(f"unknown cleaning policy {policy!r}")
    if len(data) == 0:
        raise BadValue("cannot clean an empty dataset")

    flagged = [f for f in data.schema.continuous if f.zero_anomalous]
    report = CleaningReport(policy=policy)
    for spec in flagged:
        report.per_feature[spec.name] = FeatureCleaning()

    medians: dict[str, float] = {}
    if policy == "impute_median":
        for spec in flagged:
            col = np.array([r.profile[spec.name] for r in data.rows], dtype=np.float64)
            zero_mask = col == 0.0
            if not zero_mask.any():
                continue
            non_zero = col[~zero_mask]
            if non_zero.size == 0:
                raise AllValuesAnomalous(
                    f"feature {spec.name!r} is zero in every row; median undefined"
                )
            medians[spec.name] = float(np.median(non_zero))
            report.per_feature[spec.name].imputation_value = medians[spec.name]

    new_rows: list[Row] = []
    for profile, rating in data.rows:
        zero_feats = [s.name for s in flagged if profile[s.name] == 0.0]
        for name in zero_feats:
            report.per_feature[name].zeros_detected += 1
        if not zero_feats:
            new_rows.append(Row(profile, rating))
            continue
        if policy == "drop_row":
            for name in zero_feats:
                report.per_feature[name].rows_dropped += 1
            report.rows_dropped += 1
            continue
        fixed = dict(profile)
        for name in zero_feats:
            fixed[name] = medians[name]
            report.per_feature[name].imputed += 1
        new_rows.append(Row(fixed, rating))

    return (
        Dataset(schema=data.schema, rows=tuple(new_rows), provenance=data.provenance),
        report,
    )


# --- splitting ---------------------------------------------------------------


def split(data: Dataset, seed: int) -> SplitSet:
    """Seeded 80/10/10 shuffle split; identical (data, seed) reproduces it."""
    n = len(data)
    if n < 10:
        raise TooFewRows(f"need at least 10 rows to split, got {n}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_val = int(round(n * 0.1))
    n_test = int(round(n * 0.1))
    n_train = n - n_val - n_test
    train_idx = perm[:n_train]
    val_idx = perm[n_train:n_train + n_val]
    test_idx = perm[n_train + n_val:]
    return SplitSet(
        train=data.subset(train_idx),
        validation=data.subset(val_idx),
        test=data.subset(test_idx),
        seed=seed,
    )
