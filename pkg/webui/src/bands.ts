// Multiple-choice bands for the home profile form. Every feature the service
// schema carries appears here; banded numeric choices map deterministically to
// concrete values inside the schema's valid range. Mandatory fields must be
// answered; the rest are pre-filled with a typical default.

import type { FeatureValue } from "./types.js";

export interface Choice {
  label: string;
  value: FeatureValue;
}

export interface FieldSpec {
  feature: string;
  question: string;
  unit: string;
  group: "envelope" | "fabric" | "heating" | "hot-water" | "spatial";
  mandatory: boolean;
  choices: Choice[];
  /** index into choices used to pre-fill non-mandatory fields */
  defaultChoice?: number;
}

const num = (label: string, value: number): Choice => ({ label, value });
const code = (value: string, label?: string): Choice => ({ label: label ?? value, value });

export const FORM_FIELDS: FieldSpec[] = [
  {
    feature: "wall_area", question: "How much external wall does the home have?",
    unit: "m2", group: "envelope", mandatory: true,
    choices: [
      num("Small home (~80 m2 of wall)", 80),
      num("Typical semi-D (~130 m2)", 130),
      num("Large house (~200 m2)", 200),
      num("Very large (~300 m2)", 300),
    ],
  },
  {
    feature: "roof_area", question: "Roof area exposed to the outside?",
    unit: "m2", group: "envelope", mandatory: true,
    choices: [
      num("Apartment / tiny roof (~40 m2)", 40),
      num("Typical (~100 m2)", 100),
      num("Large (~170 m2)", 170),
    ],
  },
  {
    feature: "floor_area", question: "Ground floor area?",
    unit: "m2", group: "envelope", mandatory: true,
    choices: [
      num("Compact (~55 m2)", 55),
      num("Typical (~90 m2)", 90),
      num("Large (~140 m2)", 140),
      num("Very large (~220 m2)", 220),
    ],
  },
  {
    feature: "window_area", question: "Total window area?",
    unit: "m2", group: "envelope", mandatory: true,
    choices: [
      num("Few windows (~12 m2)", 12),
      num("Typical (~22 m2)", 22),
      num("Lots of glazing (~40 m2)", 40),
    ],
  },
  {
    feature: "door_area", question: "External door area?",
    unit: "m2", group: "envelope", mandatory: true,
    choices: [
      num("One door (~2 m2)", 2),
      num("Two doors (~4 m2)", 4),
      num("Several (~7 m2)", 7),
    ],
  },
  {
    feature: "total_floor_area", question: "Total heated floor area (all storeys)?",
    unit: "m2", group: "envelope", mandatory: false, defaultChoice: 1,
    choices: [num("~90 m2", 90), num("~150 m2", 150), num("~240 m2", 240)],
  },
  {
    feature: "building_volume", question: "Heated volume?",
    unit: "m3", group: "envelope", mandatory: false, defaultChoice: 1,
    choices: [num("~240 m3", 240), num("~400 m3", 400), num("~650 m3", 650)],
  },
  {
    feature: "no_of_storeys", question: "How many storeys?",
    unit: "", group: "envelope", mandatory: false, defaultChoice: 1,
    choices: [num("1", 1), num("2", 2), num("3", 3)],
  },
  {
    feature: "dwelling_type", question: "What kind of dwelling?",
    unit: "", group: "envelope", mandatory: false, defaultChoice: 1,
    choices: [
      code("detached", "Detached"), code("semi_detached", "Semi-detached"),
      code("mid_terrace", "Mid-terrace"), code("end_terrace", "End-terrace"),
      code("apartment", "Apartment"), code("bungalow", "Bungalow"),
    ],
  },
  {
    feature: "wall_u", question: "How well insulated are the walls?",
    unit: "W/m2K", group: "fabric", mandatory: true,
    choices: [
      num("Uninsulated solid wall (2.1)", 2.1),
      num("Partial / older insulation (1.1)", 1.1),
      num("Insulated cavity (0.55)", 0.55),
      num("Modern high spec (0.25)", 0.25),
    ],
  },
  {
    feature: "roof_u", question: "How well insulated is the roof?",
    unit: "W/m2K", group: "fabric", mandatory: true,
    choices: [
      num("No attic insulation (2.0)", 2.0),
      num("Thin layer (0.8)", 0.8),
      num("Good insulation (0.35)", 0.35),
      num("Excellent (0.15)", 0.15),
    ],
  },
  {
    feature: "floor_u", question: "How well insulated is the ground floor?",
    unit: "W/m2K", group: "fabric", mandatory: true,
    choices: [
      num("Uninsulated (1.2)", 1.2),
      num("Some insulation (0.6)", 0.6),
      num("Well insulated (0.3)", 0.3),
    ],
  },
  {
    feature: "window_u", question: "What glazing do the windows have?",
    unit: "W/m2K", group: "fabric", mandatory: true,
    choices: [
      num("Single glazed (4.8)", 4.8),
      num("Old double glazing (2.8)", 2.8),
      num("Modern double (1.4)", 1.4),
      num("Triple glazed (0.9)", 0.9),
    ],
  },
  {
    feature: "door_u", question: "How insulated are the external doors?",
    unit: "W/m2K", group: "fabric", mandatory: true,
    choices: [
      num("Old timber/metal door (3.0)", 3.0),
      num("Standard door (1.7)", 1.7),
      num("Insulated composite (1.2)", 1.2),
    ],
  },
  {
    feature: "attic_insulation_mm", question: "Attic insulation depth?",
    unit: "mm", group: "fabric", mandatory: false, defaultChoice: 1,
    choices: [num("None (0)", 0), num("~150 mm", 150), num("~300 mm", 300)],
  },
  {
    feature: "thermal_bridging_factor", question: "Junction heat-loss estimate?",
    unit: "W/m2K", group: "fabric", mandatory: false, defaultChoice: 1,
    choices: [num("High (0.22)", 0.22), num("Typical (0.15)", 0.15), num("Low (0.06)", 0.06)],
  },
  {
    feature: "air_change_rate", question: "How draughty is the home?",
    unit: "ach", group: "fabric", mandatory: false, defaultChoice: 1,
    choices: [num("Very draughty (2.2)", 2.2), num("Average (1.2)", 1.2), num("Airtight (0.5)", 0.5)],
  },
  {
    feature: "draught_stripped_fraction", question: "Share of openings draught-stripped?",
    unit: "", group: "fabric", mandatory: false, defaultChoice: 1,
    choices: [num("Few (0.2)", 0.2), num("Half (0.5)", 0.5), num("Most (0.9)", 0.9)],
  },
  {
    feature: "double_glazed_fraction", question: "Share of glazing at least double glazed?",
    unit: "", group: "fabric", mandatory: false, defaultChoice: 1,
    choices: [num("Little (0.2)", 0.2), num("Most (0.8)", 0.8), num("All (1.0)", 1.0)],
  },
  {
    feature: "year_built", question: "Roughly when was the home built?",
    unit: "", group: "fabric", mandatory: false, defaultChoice: 1,
    choices: [
      num("Before 1950", 1935), num("1950-1990", 1972), num("1990-2010", 2001),
      num("After 2010", 2016),
    ],
  },
  {
    feature: "wall_type", question: "Primary wall construction?",
    unit: "", group: "fabric", mandatory: false, defaultChoice: 0,
    choices: [
      code("cavity", "Cavity"), code("solid_masonry", "Solid masonry"),
      code("hollow_block", "Hollow block"), code("timber_frame", "Timber frame"),
      code("stone", "Stone"),
    ],
  },
  {
    feature: "main_heating_efficiency", question: "How efficient is the main heating system?",
    unit: "", group: "heating", mandatory: true,
    choices: [
      num("Old boiler (~55%)", 0.55),
      num("Standard boiler (~75%)", 0.75),
      num("Condensing boiler (~90%)", 0.9),
      num("Best in class (~100%)", 1.0),
    ],
  },
  {
    feature: "main_fuel_type", question: "Main heating fuel?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 0,
    choices: [
      code("mains_gas", "Mains gas"), code("heating_oil", "Heating oil"),
      code("electricity", "Electricity"), code("solid_fuel", "Solid fuel"),
      code("lpg", "LPG"), code("heat_pump", "Heat pump"),
    ],
  },
  {
    feature: "heating_controls", question: "What heating controls are installed?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 1,
    choices: [
      code("none", "None"), code("basic_timer", "Basic timer"),
      code("trv_zoned", "Zoned TRVs"), code("smart_zoned", "Smart zoned"),
    ],
  },
  {
    feature: "secondary_heating_fraction", question: "Share of heat from secondary heaters?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 0,
    choices: [num("None (0)", 0), num("Some (0.15)", 0.15), num("A lot (0.35)", 0.35)],
  },
  {
    feature: "secondary_heating_efficiency", question: "Secondary heater efficiency?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 1,
    choices: [num("Open fire (~30%)", 0.3), num("Stove (~65%)", 0.65), num("Electric (~95%)", 0.95)],
  },
  {
    feature: "boiler_age_years", question: "Age of the main boiler / heat source?",
    unit: "years", group: "heating", mandatory: false, defaultChoice: 1,
    choices: [num("New (2y)", 2), num("Middling (12y)", 12), num("Old (25y)", 25)],
  },
  {
    feature: "central_heating_pumps", question: "Central heating pumps?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 1,
    choices: [num("0", 0), num("1", 1), num("2", 2)],
  },
  {
    feature: "open_fireplaces", question: "Open fireplaces?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 0,
    choices: [num("None", 0), num("One", 1), num("Two", 2)],
  },
  {
    feature: "low_energy_lighting_fraction", question: "Share of low-energy lighting?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 1,
    choices: [num("Little (0.2)", 0.2), num("Most (0.7)", 0.7), num("All (1.0)", 1.0)],
  },
  {
    feature: "ventilation_method", question: "How is the home ventilated?",
    unit: "", group: "heating", mandatory: false, defaultChoice: 0,
    choices: [
      code("natural", "Natural"), code("mech_extract", "Mechanical extract"),
      code("mvhr", "Heat-recovery (MVHR)"),
    ],
  },
  {
    feature: "solar_pv_capacity_kw", question: "Installed solar PV capacity?",
    unit: "kW", group: "heating", mandatory: false, defaultChoice: 0,
    choices: [num("None (0)", 0), num("2 kW", 2), num("4 kW", 4), num("6 kW", 6)],
  },
  {
    feature: "water_storage_volume", question: "Hot water cylinder volume?",
    unit: "litres", group: "hot-water", mandatory: true,
    choices: [
      num("No cylinder (0 L)", 0),
      num("Small (~110 L)", 110),
      num("Typical (~160 L)", 160),
      num("Large (~300 L)", 300),
    ],
  },
  {
    feature: "hw_cylinder_insulation_mm", question: "Cylinder insulation?",
    unit: "mm", group: "hot-water", mandatory: false, defaultChoice: 1,
    choices: [num("Bare (0)", 0), num("Jacket (~40 mm)", 40), num("Factory foam (~80 mm)", 80)],
  },
  {
    feature: "water_heating_efficiency", question: "Water heating efficiency?",
    unit: "", group: "hot-water", mandatory: false, defaultChoice: 1,
    choices: [num("Poor (~55%)", 0.55), num("Typical (~75%)", 0.75), num("Great (~95%)", 0.95)],
  },
  {
    feature: "solar_hw_area", question: "Solar thermal collectors?",
    unit: "m2", group: "hot-water", mandatory: false, defaultChoice: 0,
    choices: [num("None (0)", 0), num("Small (3 m2)", 3), num("Large (5 m2)", 5)],
  },
  {
    feature: "hot_water_usage_lpd", question: "Daily hot water use?",
    unit: "L/day", group: "hot-water", mandatory: false, defaultChoice: 1,
    choices: [num("Low (~80 L)", 80), num("Typical (~125 L)", 125), num("High (~200 L)", 200)],
  },
  {
    feature: "immersion_heater", question: "Electric immersion heater?",
    unit: "", group: "hot-water", mandatory: false, defaultChoice: 0,
    choices: [code("none", "None"), code("summer_only", "Summer only"), code("all_year", "All year")],
  },
  {
    feature: "county_code", question: "Which county is the home in?",
    unit: "", group: "spatial", mandatory: true,
    choices: [
      code("CW", "Carlow"), code("CN", "Cavan"), code("CE", "Clare"), code("C", "Cork"),
      code("DL", "Donegal"), code("D", "Dublin"), code("G", "Galway"), code("KY", "Kerry"),
      code("KE", "Kildare"), code("KK", "Kilkenny"), code("LS", "Laois"), code("LM", "Leitrim"),
      code("LK", "Limerick"), code("LD", "Longford"), code("LH", "Louth"), code("MO", "Mayo"),
      code("MH", "Meath"), code("MN", "Monaghan"), code("OY", "Offaly"), code("RN", "Roscommon"),
      code("SO", "Sligo"), code("T", "Tipperary"), code("W", "Waterford"), code("WH", "Westmeath"),
      code("WX", "Wexford"), code("WW", "Wicklow"),
    ],
  },
  {
    feature: "urban_rural", question: "Urban or rural setting?",
    unit: "", group: "spatial", mandatory: false, defaultChoice: 0,
    choices: [code("urban", "Urban"), code("rural", "Rural")],
  },
  {
    feature: "heating_degree_days", question: "Local climate?",
    unit: "Kd", group: "spatial", mandatory: false, defaultChoice: 1,
    choices: [num("Mild coast (~1950)", 1950), num("Typical (~2150)", 2150), num("Cold inland (~2450)", 2450)],
  },
];

export const MANDATORY_FEATURES = FORM_FIELDS.filter((f) => f.mandatory).map((f) => f.feature);
