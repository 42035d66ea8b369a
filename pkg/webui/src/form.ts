// Multiple-choice form state: tracks per-field selection and validity, maps
// banded choices to schema values deterministically, and gates submission on
// the mandatory fields.

import { FORM_FIELDS, type FieldSpec } from "./bands.js";
import type { FeatureValue, Profile } from "./types.js";

export interface FieldState {
  spec: FieldSpec;
  /** index into spec.choices or null while unanswered */
  selected: number | null;
  error: string | null;
}

export class FormState {
  readonly fields: Map<string, FieldState> = new Map();

  constructor(specs: FieldSpec[] = FORM_FIELDS) {
    for (const spec of specs) {
      this.fields.set(spec.feature, {
        spec,
        selected: spec.mandatory ? null : (spec.defaultChoice ?? 0),
        error: null,
      });
    }
  }

  field(feature: string): FieldState {
    const state = this.fields.get(feature);
    if (!state) throw new Error(`unknown form field ${feature}`);
    return state;
  }

  choose(feature: string, choiceIndex: number): void {
    const state = this.field(feature);
    if (choiceIndex < 0 || choiceIndex >= state.spec.choices.length) {
      state.error = "pick one of the listed options";
      return;
    }
    state.selected = choiceIndex;
    state.error = null;
  }

  /** Value a field currently maps to, or null while unanswered. */
  value(feature: string): FeatureValue | null {
    const state = this.field(feature);
    if (state.selected === null) return null;
    return state.spec.choices[state.selected]!.value;
  }

  missingMandatory(): string[] {
    const missing: string[] = [];
    for (const [feature, state] of this.fields) {
      if (state.spec.mandatory && state.selected === null) missing.push(feature);
    }
    return missing;
  }

  get complete(): boolean {
    return this.missingMandatory().length === 0;
  }

  /** Attach a service-side validation message to the offending field. */
  applyServiceError(field: string | undefined, message: string): string | null {
    if (!field || !field.startsWith("profile.")) return null;
    const feature = field.slice("profile.".length);
    const state = this.fields.get(feature);
    if (!state) return null;
    state.error = message;
    return feature;
  }

  /** Deterministic profile payload; only legal when the form is complete. */
  toProfile(): Profile {
    const missing = this.missingMandatory();
    if (missing.length > 0) {
      throw new Error(`form incomplete: ${missing.join(", ")}`);
    }
    const profile: Profile = {};
    for (const [feature, state] of this.fields) {
      const idx = state.selected ?? state.spec.defaultChoice ?? 0;
      profile[feature] = state.spec.choices[idx]!.value;
    }
    return profile;
  }
}
