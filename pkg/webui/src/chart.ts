// Pure view models for the frontier chart and cost breakdown. Nothing here
// computes ratings or costs: every number is lifted verbatim from a service
// response, which keeps the rendering layer auditable.

import type { FrontierEntry, PlansResponse } from "./types.js";
import { ratingIndex, RATING_SCALE } from "./types.js";

export interface FrontierPoint {
  rating: string;
  ratingIndex: number;
  netCostEur: number;
  itemIds: string[];
  planId: string;
  isBase: boolean;
  improvementSteps: number;
}

export interface FrontierChartModel {
  points: FrontierPoint[];
  baseRating: string;
  maxNetCost: number;
  bestRating: string | null;
}

export function frontierChartModel(response: PlansResponse): FrontierChartModel {
  const baseIdx = ratingIndex(response.base_rating);
  const points = response.frontier.map((entry: FrontierEntry, i: number) => ({
    rating: entry.rating,
    ratingIndex: ratingIndex(entry.rating),
    netCostEur: entry.net_cost_eur,
    itemIds: entry.item_ids,
    planId: response.plan_ids[i]!,
    isBase: entry.rating === response.base_rating && entry.item_ids.length === 0,
    improvementSteps: baseIdx - ratingIndex(entry.rating),
  }));
  points.sort((a, b) => a.ratingIndex - b.ratingIndex);
  return {
    points,
    baseRating: response.base_rating,
    maxNetCost: points.reduce((m, p) => Math.max(m, p.netCostEur), 0),
    bestRating: points.length ? points[0]!.rating : null,
  };
}

export interface CostBar {
  planId: string;
  rating: string;
  grossEur: number;
  grantEur: number;
  netEur: number;
}

export function costBreakdownBars(response: PlansResponse): CostBar[] {
  return response.frontier.map((entry, i) => ({
    planId: response.plan_ids[i]!,
    rating: entry.rating,
    grossEur: entry.total_cost_eur,
    grantEur: entry.grant_eur,
    netEur: entry.net_cost_eur,
  }));
}

/** SVG scatter of rating (x, best left) vs net cost (y); framework-free. */
export function frontierSvg(model: FrontierChartModel, width = 560, height = 240): string {
  const pad = 36;
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const maxCost = Math.max(model.maxNetCost, 1);
  const x = (idx: number) => pad + (idx / (RATING_SCALE.length - 1)) * innerW;
  const y = (cost: number) => height - pad - (cost / maxCost) * innerH;

  const axis = RATING_SCALE.map(
    (r, i) =>
      `<text x="${x(i).toFixed(1)}" y="${height - pad + 16}" class="tick">${r}</text>`,
  ).join("");
  const dots = model.points
    .map((p) => {
      const cls = p.isBase ? "dot base" : "dot";
      return (
        `<circle cx="${x(p.ratingIndex).toFixed(1)}" cy="${y(p.netCostEur).toFixed(1)}" ` +
        `r="6" class="${cls}" data-plan="${p.planId}" data-rating="${p.rating}" ` +
        `data-net="${p.netCostEur}"><title>${p.rating}: ${p.netCostEur.toFixed(0)} EUR net` +
        `</title></circle>`
      );
    })
    .join("");
  return (
    `<svg viewBox="0 0 ${width} ${height}" role="img" aria-label="rating versus net cost">` +
    `<line x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}" class="axis"/>` +
    `<line x1="${pad}" y1="${pad}" x2="${pad}" y2="${height - pad}" class="axis"/>` +
    axis +
    dots +
    `</svg>`
  );
}
