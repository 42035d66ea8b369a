// HTML builders for every panel. Pure string functions so the view layer is
// testable without a DOM; main.ts wires them to the document and events.

import type { FieldSpec } from "./bands.js";
import { FORM_FIELDS } from "./bands.js";
import type { FormState } from "./form.js";
import type { ExplorationSnapshot } from "./explore.js";
import { costBreakdownBars, frontierChartModel, frontierSvg } from "./chart.js";
import { COMPONENT_CATEGORIES } from "./types.js";

export const BUDGET_STOPS: (number | null)[] = [
  0, 2000, 5000, 10000, 15000, 25000, 40000, null,
];

export function budgetLabel(budget: number | null): string {
  return budget === null ? "unlimited" : `${budget.toLocaleString("en-IE")} EUR`;
}

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function renderField(spec: FieldSpec, form: FormState): string {
  const state = form.field(spec.feature);
  const options = spec.choices
    .map((c, i) => {
      const sel = state.selected === i ? " selected" : "";
      return `<option value="${i}"${sel}>${esc(c.label)}</option>`;
    })
    .join("");
  const placeholder = state.selected === null ? `<option value="" selected>choose...</option>` : "";
  const err = state.error ? `<p class="field-error">${esc(state.error)}</p>` : "";
  const mark = spec.mandatory ? `<span class="mand">*</span>` : "";
  return (
    `<label class="field" data-feature="${spec.feature}">` +
    `<span class="q">${esc(spec.question)}${mark}</span>` +
    `<select data-feature="${spec.feature}">${placeholder}${options}</select>` +
    err +
    `</label>`
  );
}

export function renderForm(form: FormState): string {
  const groups = new Map<string, string[]>();
  for (const spec of FORM_FIELDS) {
    const bucket = groups.get(spec.group) ?? [];
    bucket.push(renderField(spec, form));
    groups.set(spec.group, bucket);
  }
  let html = "";
  for (const [group, fields] of groups) {
    html += `<fieldset><legend>${esc(group)}</legend>${fields.join("")}</fieldset>`;
  }
  const missing = form.missingMandatory();
  const disabled = missing.length > 0 ? " disabled" : "";
  const hint = missing.length
    ? `<p class="hint">answer the ${missing.length} required question(s) to continue</p>`
    : "";
  html += `<button id="submit-profile"${disabled}>Get my rating</button>${hint}`;
  return html;
}

export function renderBaseRating(rating: string | null): string {
  if (!rating) return `<p class="muted">submit the form to see the current rating</p>`;
  return `<div class="badge rating-${rating}" id="base-rating" data-rating="${rating}">${rating}</div>`;
}

export function renderCategoryToggles(selected: string[]): string {
  return COMPONENT_CATEGORIES.map((cat) => {
    const on = selected.includes(cat) ? " checked" : "";
    return (
      `<label class="toggle"><input type="checkbox" data-category="${cat}"${on}/>` +
      `${esc(cat.replace(/_/g, " "))}</label>`
    );
  }).join("");
}

export function renderBudget(budget: number | null): string {
  const idx = BUDGET_STOPS.findIndex((b) => b === budget);
  const pos = idx >= 0 ? idx : BUDGET_STOPS.length - 1;
  return (
    `<input type="range" id="budget" min="0" max="${BUDGET_STOPS.length - 1}" ` +
    `step="1" value="${pos}"/><span id="budget-label">${budgetLabel(budget)}</span>`
  );
}

export function renderFrontier(snap: ExplorationSnapshot): string {
  if (snap.requestInFlight) {
    return `<p class="muted" id="frontier-loading">computing plans...</p>`;
  }
  if (snap.lastError) {
    return `<p class="error">${esc(snap.lastError)} <button id="retry">retry</button></p>`;
  }
  if (!snap.frontier) return `<p class="muted">no plans yet</p>`;
  const model = frontierChartModel(snap.frontier);
  if (model.points.length === 1 && snap.frontierQuery?.categories.length === 0) {
    return (
      frontierSvg(model) +
      `<p class="muted" id="empty-state">no components selected: only the current ` +
      `rating ${esc(model.baseRating)} is shown. Toggle a component to explore upgrades.</p>`
    );
  }
  const rows = model.points
    .map((p) => {
      const items = p.itemIds.length ? p.itemIds.join(", ") : "keep existing";
      return (
        `<tr data-plan="${p.planId}"><td>${p.rating}</td>` +
        `<td class="num" data-field="net_cost_eur">${p.netCostEur.toFixed(2)}</td>` +
        `<td>${p.improvementSteps}</td><td>${esc(items)}</td>` +
        `<td><button class="view-plan" data-plan="${p.planId}">report</button></td></tr>`
      );
    })
    .join("");
  const bars = costBreakdownBars(snap.frontier)
    .map(
      (b) =>
        `<div class="bar" data-plan="${b.planId}" data-gross="${b.grossEur}" ` +
        `data-grant="${b.grantEur}" data-net="${b.netEur}" ` +
        `title="${b.rating}: ${b.grossEur.toFixed(0)} gross - ${b.grantEur.toFixed(0)} grant = ${b.netEur.toFixed(0)} net"></div>`,
    )
    .join("");
  return (
    frontierSvg(model) +
    `<div class="cost-bars">${bars}</div>` +
    `<table id="frontier-table"><thead><tr><th>rating</th><th>net EUR</th>` +
    `<th>steps</th><th>items</th><th></th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderPlanReport(snap: ExplorationSnapshot): string {
  if (!snap.planReport) return "";
  return `<pre id="plan-report">${esc(snap.planReport)}</pre>`;
}

export function renderFollowups(suggestions: { text: string; score: number }[], lowConfidence: boolean): string {
  if (!suggestions.length) return "";
  const chips = suggestions
    .map((s) => `<button class="chip" data-question="${esc(s.text)}">${esc(s.text)}</button>`)
    .join("");
  const warn = lowConfidence ? `<span class="muted">(low confidence)</span>` : "";
  return `<div id="followups">${chips}${warn}</div>`;
}

export function renderChatBanner(): string {
  return (
    `<div class="banner" id="chat-banner">chat runs against a stubbed demo ` +
    `client: canned replies, real follow-up suggestions, no external calls</div>`
  );
}

export function renderPlaceholders(): string {
  return (
    `<button class="placeholder" disabled title="under development">My City in 3D</button>` +
    `<button class="placeholder" disabled title="under development">Useful Resources</button>`
  );
}
