import { describe, expect, it } from "vitest";

import { FORM_FIELDS, MANDATORY_FEATURES } from "../src/bands.js";
import { FormState } from "../src/form.js";

function completeForm(): FormState {
  const form = new FormState();
  for (const feature of MANDATORY_FEATURES) form.choose(feature, 1);
  return form;
}

describe("form bands", () => {
  it("cover all 41 schema features with unique names", () => {
    expect(FORM_FIELDS.length).toBe(41);
    expect(new Set(FORM_FIELDS.map((f) => f.feature)).size).toBe(41);
  });

  it("pre-fill every non-mandatory field with a valid default", () => {
    for (const spec of FORM_FIELDS) {
      if (spec.mandatory) continue;
      const idx = spec.defaultChoice ?? 0;
      expect(spec.choices[idx]).toBeDefined();
    }
  });

  it("county list has the 26 codes", () => {
    const county = FORM_FIELDS.find((f) => f.feature === "county_code")!;
    expect(county.choices.length).toBe(26);
    expect(new Set(county.choices.map((c) => c.value)).size).toBe(26);
  });
});

describe("FormState", () => {
  it("blocks submission until every mandatory field is answered", () => {
    const form = new FormState();
    expect(form.complete).toBe(false);
    expect(form.missingMandatory()).toContain("wall_u");
    expect(() => form.toProfile()).toThrow(/incomplete/);

    for (const feature of MANDATORY_FEATURES) form.choose(feature, 0);
    expect(form.complete).toBe(true);
  });

  it("maps banded choices to deterministic schema values", () => {
    const form = completeForm();
    form.choose("wall_u", 2); // "Insulated cavity (0.55)"
    expect(form.value("wall_u")).toBe(0.55);
    const profile = form.toProfile();
    expect(profile.wall_u).toBe(0.55);
    expect(profile).toEqual(completeFormWith("wall_u", 2).toProfile());
  });

  it("fills non-mandatory features from their defaults", () => {
    const profile = completeForm().toProfile();
    expect(Object.keys(profile).length).toBe(41);
    expect(profile.urban_rural).toBe("urban");
    expect(profile.solar_pv_capacity_kw).toBe(0);
  });

  it("rejects out-of-range choice indices without clearing state", () => {
    const form = completeForm();
    form.choose("wall_u", 99);
    expect(form.field("wall_u").error).toMatch(/options/);
    expect(form.value("wall_u")).not.toBeNull();
  });

  it("routes service field errors onto the offending field", () => {
    const form = completeForm();
    const hit = form.applyServiceError("profile.county_code", "unknown code");
    expect(hit).toBe("county_code");
    expect(form.field("county_code").error).toBe("unknown code");
    expect(form.applyServiceError("budget_eur", "nope")).toBeNull();
    expect(form.applyServiceError(undefined, "nope")).toBeNull();
  });
});

function completeFormWith(feature: string, choice: number): FormState {
  const form = new FormState();
  for (const f of MANDATORY_FEATURES) form.choose(f, 1);
  form.choose(feature, choice);
  return form;
}
