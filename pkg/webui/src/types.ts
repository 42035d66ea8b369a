// Wire types mirroring the planning service's HTTP contract.

export type FeatureValue = number | string;
export type Profile = Record<string, FeatureValue>;

export interface HealthResponse {
  model_version: string;
  catalog_version: string;
}

export interface CatalogItem {
  id: string;
  category: string;
  name: string;
  mutations: Record<string, FeatureValue>;
  price_eur: number;
  grant_eur: number;
}

export interface CatalogResponse {
  items: CatalogItem[];
}

export interface PredictResponse {
  rating: string;
  coarse: string;
  probabilities: Record<string, number>;
}

export interface FrontierEntry {
  rating: string;
  item_ids: string[];
  total_cost_eur: number;
  grant_eur: number;
  net_cost_eur: number;
}

export interface PlansResponse {
  base_rating: string;
  frontier: FrontierEntry[];
  plan_ids: string[];
}

export interface FollowupSuggestion {
  text: string;
  score: number;
}

export interface FollowupsResponse {
  suggestions: FollowupSuggestion[];
  low_confidence: boolean;
}

export interface ChatResponse {
  reply: string;
  category: string;
  suggestions: FollowupSuggestion[];
  low_confidence: boolean;
  stub: boolean;
}

export interface ServiceErrorBody {
  error?: string;
  message?: string;
  field?: string;
  detail?: unknown;
}

/** Ratings ordered best to worst; index doubles as a chart coordinate. */
export const RATING_SCALE = [
  "A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3",
  "D1", "D2", "E1", "E2", "F", "G",
] as const;

export type Rating = (typeof RATING_SCALE)[number];

export function ratingIndex(rating: string): number {
  const idx = RATING_SCALE.indexOf(rating as Rating);
  if (idx < 0) throw new Error(`unknown rating ${rating}`);
  return idx;
}

export const COMPONENT_CATEGORIES = [
  "wall_insulation", "roof_insulation", "floor_insulation", "window", "door",
  "attic_insulation", "heating_controls", "mvhr", "solar_panels",
] as const;

export type ComponentCategory = (typeof COMPONENT_CATEGORIES)[number];
