// Exploration state: the budget/category what-if loop over the plans API.
// Every refresh gets a sequence number; only the newest response may land, so
// an early request resolving late can never overwrite fresher state. The
// displayed frontier therefore always corresponds to the most recent
// (profile, categories, budget) triple.

import type { ApiClient } from "./api.js";
import { isAbortError, ServiceError } from "./api.js";
import { COMPONENT_CATEGORIES, type PlansResponse, type Profile } from "./types.js";

export interface ExplorationSnapshot {
  profile: Profile | null;
  baseRating: string | null;
  categories: string[];
  budgetEur: number | null;
  frontier: PlansResponse | null;
  /** the query triple the frontier answers, for traceability checks */
  frontierQuery: { categories: string[]; budgetEur: number | null } | null;
  selectedPlanId: string | null;
  planReport: string | null;
  requestInFlight: boolean;
  lastError: string | null;
}

export class ExplorationState {
  private profile: Profile | null = null;
  private baseRating: string | null = null;
  private categories: Set<string> = new Set(COMPONENT_CATEGORIES);
  private budgetEur: number | null = null;
  private frontier: PlansResponse | null = null;
  private frontierQuery: ExplorationSnapshot["frontierQuery"] = null;
  private selectedPlanId: string | null = null;
  private planReport: string | null = null;
  private seq = 0;
  private applied = 0;
  private inFlight = 0;
  private lastError: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (snap: ExplorationSnapshot) => void = () => {},
  ) {}

  snapshot(): ExplorationSnapshot {
    return {
      profile: this.profile,
      baseRating: this.baseRating,
      categories: [...this.categories],
      budgetEur: this.budgetEur,
      frontier: this.frontier,
      frontierQuery: this.frontierQuery,
      selectedPlanId: this.selectedPlanId,
      planReport: this.planReport,
      requestInFlight: this.inFlight > 0,
      lastError: this.lastError,
    };
  }

  private emit(): void {
    this.onChange(this.snapshot());
  }

  /** Submit the completed profile: predicts the base rating, unlocks exploration. */
  async submitProfile(profile: Profile): Promise<void> {
    const prediction = await this.api.predict(profile);
    this.profile = profile;
    this.baseRating = prediction.rating;
    this.frontier = null;
    this.frontierQuery = null;
    this.selectedPlanId = null;
    this.planReport = null;
    this.emit();
    await this.refresh();
  }

  setBudget(budgetEur: number | null): Promise<void> {
    this.budgetEur = budgetEur;
    return this.refresh();
  }

  toggleCategory(category: string): Promise<void> {
    if (this.categories.has(category)) {
      this.categories.delete(category);
    } else {
      this.categories.add(category);
    }
    return this.refresh();
  }

  setCategories(categories: string[]): Promise<void> {
    this.categories = new Set(categories);
    return this.refresh();
  }

  /** Re-query the frontier for the current triple; stale responses are dropped. */
  async refresh(): Promise<void> {
    if (!this.profile) return;
    const mySeq = ++this.seq;
    const categories = [...this.categories];
    const budget = this.budgetEur;
    this.inFlight += 1;
    this.emit();
    try {
      const frontier = await this.api.plans(this.profile, categories, budget);
      if (mySeq > this.applied) {
        this.applied = mySeq;
        this.frontier = frontier;
        this.frontierQuery = { categories, budgetEur: budget };
        this.baseRating = frontier.base_rating;
        this.selectedPlanId = null;
        this.planReport = null;
        this.lastError = null;
      }
    } catch (err) {
      if (!isAbortError(err)) {
        this.lastError = err instanceof ServiceError ? err.message : String(err);
      }
    } finally {
      this.inFlight -= 1;
      this.emit();
    }
  }

  async selectPlan(planId: string): Promise<void> {
    if (!this.frontier || !this.frontier.plan_ids.includes(planId)) {
      throw new Error(`plan ${planId} is not part of the displayed frontier`);
    }
    const text = await this.api.planReport(planId);
    this.selectedPlanId = planId;
    this.planReport = text;
    this.emit();
  }
}
