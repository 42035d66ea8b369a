"""Calibrated synthetic EPC-style dataset generator.

Stands in for the restricted national certificate data at desk scale. Feature
values are drawn with a shared latent quality factor so fabric, heating and
solar attributes correlate the way real housing stock does. Labels come from
a documented additive oracle: an energy score built from area-weighted
U-values, a heating-efficiency term and a solar credit, plus Gaussian noise,
binned into the 15 ratings by fixed thresholds. The thresholds were frozen
from a 200k-row draw so class frequencies are imbalanced with A1 rarest.

The oracle is a test fixture, not a physical model of building energy use.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, Row
from .errors import SchemaError
from .ratings import EnergyRating
from .schema import FeatureSchema, HomeProfile, default_schema

# --- oracle constants (committed; tests depend on these exact values) -------

W_WALL = 1.0
W_ROOF = 0.4
W_FLOOR = 1.6
W_WINDOW = 0.55
W_DOOR = 0.4
HEATING_CONSTANT = 140.0
SOLAR_WEIGHT = 12.0
MIN_EFFICIENCY = 0.05  # guards the 1/efficiency term
NOISE_SIGMA = 5.0

#: score boundaries between consecutive ratings, best to worst; a score at or
#: below RATING_THRESHOLDS[i] (and above the previous boundary) maps to the
#: rating with index i. Frozen from the calibration draw; see tests.
RATING_THRESHOLDS: tuple[float, ...] = (
    230.8, 278.1, 321.9, 360.2, 399.3, 441.2, 486.3, 533.9,
    582.2, 632.7, 684.3, 741.5, 805.2, 894.1,
)


def _score(wall_area, wall_u, roof_area, roof_u, floor_area, floor_u,
           window_area, window_u, door_area, door_u, efficiency, solar_kw):
    """Oracle energy score; higher is worse. Works on scalars and arrays."""
    e = W_WALL * wall_area * wall_u
    e = e + W_ROOF * roof_area * roof_u
    e = e + W_FLOOR * floor_area * floor_u
    e = e + W_WINDOW * window_area * window_u
    e = e + W_DOOR * door_area * door_u
    e = e + HEATING_CONSTANT / np.maximum(efficiency, MIN_EFFICIENCY)
    e = e - SOLAR_WEIGHT * solar_kw
    return e


def oracle_score(profile: HomeProfile) -> float:
    """Noise-free oracle score of a single profile."""
    return float(
        _score(
            profile["wall_area"], profile["wall_u"],
            profile["roof_area"], profile["roof_u"],
            profile["floor_area"], profile["floor_u"],
            profile["window_area"], profile["window_u"],
            profile["door_area"], profile["door_u"],
            profile["main_heating_efficiency"], profile["solar_pv_capacity_kw"],
        )
    )


def score_to_rating(score: float) -> EnergyRating:
    """Bin a score into a rating; boundary values go to the better class."""
    idx = int(np.searchsorted(RATING_THRESHOLDS, score, side="left"))
    return EnergyRating.from_index(idx)


def oracle_label(profile: HomeProfile) -> EnergyRating:
    """Rating the zero-noise oracle assigns to a profile."""
    return score_to_rating(oracle_score(profile))


def generate_synthetic(
    n: int,
    seed: int,
    schema: FeatureSchema | None = None,
    noise_sigma: float | None = None,
) -> Dataset:
    """Draw ``n`` correlated synthetic homes with oracle-assigned ratings.

    ``noise_sigma`` overrides the default label noise; 0 makes labels a
    deterministic function of the features. Same (n, seed) reproduces the
    dataset exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    schema = schema or default_schema()
    for name in ("wall_area", "wall_u", "main_heating_efficiency", "solar_pv_capacity_kw"):
        if name not in schema:
            raise SchemaError(f"synthetic generator requires feature {name!r}")
    sigma = NOISE_SIGMA if noise_sigma is None else float(noise_sigma)
    rng = np.random.default_rng(seed)

    cols = _draw_columns(n, rng, schema)

    e = _score(
        cols["wall_area"], cols["wall_u"],
        cols["roof_area"], cols["roof_u"],
        cols["floor_area"], cols["floor_u"],
        cols["window_area"], cols["window_u"],
        cols["door_area"], cols["door_u"],
        cols["main_heating_efficiency"], cols["solar_pv_capacity_kw"],
    )
    if sigma > 0.0:
        e = e + rng.normal(0.0, sigma, n)
    label_idx = np.searchsorted(RATING_THRESHOLDS, e, side="left")

    names = schema.names
    rows = []
    for i in range(n):
        profile: HomeProfile = {}
        for name in names:
            v = cols[name][i]
            profile[name] = v if isinstance(v, str) else float(v)
        rows.append(Row(profile, EnergyRating.from_index(int(label_idx[i]))))
    return Dataset(schema=schema, rows=tuple(rows), provenance="synthetic")


def _draw_columns(n: int, rng: np.random.Generator, schema: FeatureSchema) -> dict:
    """Correlated feature draws, clipped to schema ranges."""
    q = rng.beta(1.9, 2.5, n)  # latent quality: 0 poor stock, 1 modern stock

    storeys = rng.choice([1.0, 2.0, 3.0], size=n, p=[0.38, 0.54, 0.08])
    floor_area = np.clip(np.exp(rng.normal(np.log(90.0), 0.28, n)), 35, 380)
    total_floor_area = np.clip(
        floor_area * (1 + 0.75 * (storeys - 1)) * rng.uniform(0.9, 1.1, n), 40, 590
    )
    cols: dict[str, np.ndarray] = {
        "wall_area": np.clip(
            10.2 * np.sqrt(total_floor_area) * rng.uniform(0.85, 1.15, n)
            + 12.0 * (storeys - 1),
            20, 490,
        ),
        "roof_area": np.clip(floor_area * rng.uniform(0.95, 1.3, n), 15, 395),
        "floor_area": floor_area,
        "window_area": np.clip(total_floor_area * rng.uniform(0.12, 0.20, n), 2, 118),
        "door_area": np.clip(rng.normal(3.8, 0.9, n), 1.2, 18),
        "total_floor_area": total_floor_area,
        "building_volume": np.clip(total_floor_area * rng.uniform(2.4, 2.8, n), 60, 1990),
        "no_of_storeys": storeys,
        "dwelling_type": rng.choice(
            ["detached", "semi_detached", "mid_terrace", "end_terrace", "apartment", "bungalow"],
            size=n,
            p=[0.28, 0.27, 0.16, 0.10, 0.12, 0.07],
        ),
        "wall_u": np.clip(2.05 - 1.5 * q + rng.normal(0, 0.42, n), 0.12, 3.45),
        "roof_u": np.clip(1.35 - 1.0 * q + rng.normal(0, 0.30, n), 0.06, 2.95),
        "floor_u": np.clip(1.45 - 1.0 * q + rng.normal(0, 0.38, n), 0.12, 2.45),
        "window_u": np.clip(3.5 - 2.1 * q + rng.normal(0, 0.50, n), 0.65, 5.75),
        "door_u": np.clip(3.2 - 1.7 * q + rng.normal(0, 0.55, n), 0.65, 5.95),
        "attic_insulation_mm": np.clip(320 * q + rng.normal(0, 70, n), 0, 400),
        "thermal_bridging_factor": np.clip(0.16 - 0.08 * q + rng.normal(0, 0.03, n), 0.005, 0.3),
        "air_change_rate": np.clip(1.7 - 1.1 * q + rng.normal(0, 0.28, n), 0.12, 3.0),
        "draught_stripped_fraction": np.clip(0.15 + 0.75 * q + rng.normal(0, 0.18, n), 0, 1),
        "double_glazed_fraction": np.clip(0.25 + 0.75 * q + rng.normal(0, 0.18, n), 0, 1),
        "year_built": np.clip(1730 + 280 * (0.2 + 0.8 * q) + rng.normal(0, 18, n), 1700, 2025),
        "wall_type": rng.choice(
            ["cavity", "solid_masonry", "hollow_block", "timber_frame", "stone"],
            size=n,
            p=[0.45, 0.25, 0.15, 0.10, 0.05],
        ),
        "main_heating_efficiency": np.clip(0.52 + 0.5 * q + rng.normal(0, 0.07, n), 0.30, 1.08),
        "main_fuel_type": rng.choice(
            ["mains_gas", "heating_oil", "electricity", "solid_fuel", "lpg", "heat_pump"],
            size=n,
            p=[0.42, 0.27, 0.12, 0.08, 0.07, 0.04],
        ),
        "heating_controls": rng.choice(
            ["none", "basic_timer", "trv_zoned", "smart_zoned"],
            size=n,
            p=[0.18, 0.34, 0.33, 0.15],
        ),
        "secondary_heating_fraction": np.clip(0.28 * (1 - q) + rng.normal(0, 0.07, n), 0, 0.5),
        "secondary_heating_efficiency": np.clip(0.45 + 0.35 * q + rng.normal(0, 0.10, n), 0.12, 0.98),
        "boiler_age_years": np.clip(30 * (1 - q) + rng.normal(0, 5, n), 0, 40),
        "central_heating_pumps": rng.choice([0.0, 1.0, 2.0, 3.0], size=n, p=[0.15, 0.60, 0.20, 0.05]),
        "open_fireplaces": rng.choice([0.0, 1.0, 2.0, 3.0], size=n, p=[0.45, 0.38, 0.13, 0.04]),
        "low_energy_lighting_fraction": np.clip(0.2 + 0.7 * q + rng.normal(0, 0.18, n), 0, 1),
        "water_storage_volume": np.clip(rng.normal(160, 60, n), 0, 500),
        "hw_cylinder_insulation_mm": np.clip(20 + 85 * q + rng.normal(0, 22, n), 0, 120),
        "water_heating_efficiency": np.clip(0.5 + 0.42 * q + rng.normal(0, 0.08, n), 0.25, 1.08),
        "hot_water_usage_lpd": np.clip(rng.normal(125, 38, n), 22, 298),
        "immersion_heater": rng.choice(
            ["none", "summer_only", "all_year"], size=n, p=[0.50, 0.35, 0.15]
        ),
        "urban_rural": rng.choice(["urban", "rural"], size=n, p=[0.62, 0.38]),
        "heating_degree_days": np.clip(rng.normal(2150, 170, n), 1805, 2995),
    }

    vent_draw = rng.random(n)
    p_mvhr = 0.02 + 0.25 * q * q
    cols["ventilation_method"] = np.where(
        vent_draw < p_mvhr, "mvhr", np.where(vent_draw < p_mvhr + 0.20, "mech_extract", "natural")
    )

    has_pv = rng.random(n) < (0.04 + 0.38 * q * q)
    cols["solar_pv_capacity_kw"] = np.where(has_pv, rng.uniform(1.0, 6.5, n), 0.0)

    has_shw = rng.random(n) < (0.04 + 0.18 * q)
    cols["solar_hw_area"] = np.where(has_shw, rng.uniform(2.0, 6.0, n), 0.0)

    county_weights = np.array([
        0.020, 0.020, 0.030, 0.085, 0.035, 0.240, 0.055, 0.035, 0.045, 0.025,
        0.020, 0.010, 0.040, 0.012, 0.030, 0.030, 0.045, 0.015, 0.018, 0.015,
        0.015, 0.040, 0.028, 0.022, 0.035, 0.035,
    ])
    county_codes = list(schema.feature("county_code").codes)
    cols["county_code"] = rng.choice(
        county_codes, size=n, p=county_weights / county_weights.sum()
    )
    return cols
