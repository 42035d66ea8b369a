// Browser entry point: wires the form, exploration panel and chat pane to the
// service. Every displayed number comes from a service response; this file
// only routes events and re-renders.

import { ApiClient, ServiceError } from "./api.js";
import { FormState } from "./form.js";
import { ExplorationState } from "./explore.js";
import {
  BUDGET_STOPS,
  budgetLabel,
  renderBaseRating,
  renderBudget,
  renderCategoryToggles,
  renderChatBanner,
  renderFollowups,
  renderForm,
  renderFrontier,
  renderPlaceholders,
  renderPlanReport,
} from "./render.js";
import { COMPONENT_CATEGORIES } from "./types.js";

const baseUrl = (window as { RETROPLAN_API?: string }).RETROPLAN_API ?? "";
const api = new ApiClient(baseUrl);
const form = new FormState();

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

const explore = new ExplorationState(api, (snap) => {
  el("base-rating-slot").innerHTML = renderBaseRating(snap.baseRating);
  el("frontier-slot").innerHTML = renderFrontier(snap);
  el("report-slot").innerHTML = renderPlanReport(snap);
  for (const btn of document.querySelectorAll<HTMLButtonElement>(".view-plan")) {
    btn.addEventListener("click", () => void explore.selectPlan(btn.dataset.plan!));
  }
  document.getElementById("retry")?.addEventListener("click", () => void explore.refresh());
});

function redrawForm(): void {
  el("form-slot").innerHTML = renderForm(form);
  for (const select of document.querySelectorAll<HTMLSelectElement>("#form-slot select")) {
    select.addEventListener("change", () => {
      form.choose(select.dataset.feature!, Number(select.value));
      redrawForm();
    });
  }
  document.getElementById("submit-profile")?.addEventListener("click", () => {
    void submitProfile();
  });
}

async function submitProfile(): Promise<void> {
  try {
    await explore.submitProfile(form.toProfile());
    el("explore-panel").classList.remove("locked");
  } catch (err) {
    if (err instanceof ServiceError) {
      const feature = form.applyServiceError(err.field, err.message);
      if (feature) redrawForm();
      return;
    }
    throw err;
  }
}

function wireExploreControls(): void {
  el("categories-slot").innerHTML = renderCategoryToggles([...COMPONENT_CATEGORIES]);
  for (const box of document.querySelectorAll<HTMLInputElement>("#categories-slot input")) {
    box.addEventListener("change", () => void explore.toggleCategory(box.dataset.category!));
  }
  el("budget-slot").innerHTML = renderBudget(null);
  const slider = el("budget") as HTMLInputElement;
  slider.addEventListener("input", () => {
    const budget = BUDGET_STOPS[Number(slider.value)] ?? null;
    el("budget-label").textContent = budgetLabel(budget);
    void explore.setBudget(budget);
  });
}

function wireChat(): void {
  el("chat-slot").innerHTML =
    renderChatBanner() +
    `<div id="chat-log"></div>` +
    `<input id="chat-input" placeholder="ask about grants, costs, ratings..."/>` +
    `<button id="chat-send">send</button>`;
  const log = el("chat-log");
  const input = el("chat-input") as HTMLInputElement;

  const ask = async (question: string): Promise<void> => {
    log.insertAdjacentHTML("beforeend", `<p class="me"></p>`);
    (log.lastElementChild as HTMLElement).textContent = question;
    const reply = await api.chat(question);
    log.insertAdjacentHTML("beforeend", `<p class="bot"></p>`);
    (log.lastElementChild as HTMLElement).textContent = reply.reply;
    el("followups-slot").innerHTML = renderFollowups(reply.suggestions, reply.low_confidence);
    for (const chip of document.querySelectorAll<HTMLButtonElement>("#followups-slot .chip")) {
      chip.addEventListener("click", () => void ask(chip.dataset.question!));
    }
  };

  el("chat-send").addEventListener("click", () => {
    if (input.value.trim()) {
      void ask(input.value.trim());
      input.value = "";
    }
  });
}

async function boot(): Promise<void> {
  const health = await api.health();
  el("version-slot").textContent =
    `model ${health.model_version} / catalog ${health.catalog_version}`;
  el("placeholders-slot").innerHTML = renderPlaceholders();
  redrawForm();
  wireExploreControls();
  wireChat();
}

void boot();
