"""HTTP service over a frozen model snapshot, catalog and question database.

All endpoints are read-only: shared state is one immutable snapshot object,
swapped atomically on reload, so every request observes a coherent
(model, catalog) pair and identical requests get identical responses.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .classifiers import predict, predict_profiles
from .errors import RetroplanError
from .persistence import file_digest, load_model
from .ratings import ALL_RATINGS, to_coarse
from .report import QuestionDb, load_question_db, plan_to_text, suggest_followups
from .retrofit import (
    ALL_CATEGORIES,
    Catalog,
    ComponentCategory,
    PlanRequest,
    default_catalog,
    enumerate_plans,
    frontier_report,
    load_catalog,
)
from .schema import FeatureSchema, default_schema


@dataclass
class ChatClientStub:
    """Deterministic stand-in for an external conversational client.

    Keyed canned replies by request category; records every call. Never
    performs network traffic — it marks the boundary where a live language
    model client would plug in.
    """

    canned: dict[str, str] = field(default_factory=lambda: dict(_CANNED_REPLIES))
    call_log: list[str] = field(default_factory=list)

    def classify(self, message: str) -> str:
        text = message.lower()
        for category, words in _CATEGORY_KEYWORDS:
            if any(w in text for w in words):
                return category
        return "general"

    def respond(self, message: str) -> tuple[str, str]:
        self.call_log.append(message)
        category = self.classify(message)
        return category, self.canned[category]


_CATEGORY_KEYWORDS = (
    ("grants", ("grant", "subsidy", "funding")),
    ("cost", ("cost", "price", "budget", "euro", "cheap")),
    ("rating", ("rating", "ber", "grade", "energy class")),
)

_CANNED_REPLIES = {
    "grants": "Grant amounts vary by measure; the plan report lists the grant "
              "deducted for every selected item.",
    "cost": "Each plan shows gross cost, grant support and the net cost you "
            "would pay; use the budget control to cap the net spend.",
    "rating": "Ratings run from A1 (best) to G (worst); the planner predicts "
              "the post-retrofit rating for every combination it prices.",
    "general": "This chat is a stubbed demo client. Ask about grants, costs or "
               "ratings, or use the suggested follow-up questions below.",
}


@dataclass(frozen=True)
class ServiceState:
    """One coherent snapshot of everything the endpoints read."""

    model: object
    schema: FeatureSchema
    catalog: Catalog
    question_db: QuestionDb
    model_version: str
    catalog_version: str
    chat: ChatClientStub
    default_combination_cap: int = 1_000_000


class _PlanStore:
    """Per-process content-addressed plan document store."""

    def __init__(self):
        self._docs: dict[str, str] = {}
        self._lock = threading.Lock()

    def put(self, plan_id: str, text: str) -> None:
        with self._lock:
            self._docs[plan_id] = text

    def get(self, plan_id: str) -> str | None:
        with self._lock:
            return self._docs.get(plan_id)


def build_state(
    checkpoint_path: str | Path,
    catalog_path: str | Path | None = None,
    question_db_path: str | Path | None = None,
    schema: FeatureSchema | None = None,
) -> ServiceState:
    schema = schema or default_schema()
    model = load_model(checkpoint_path, schema)
    catalog = load_catalog(catalog_path, schema) if catalog_path else default_catalog(schema)
    qdb = load_question_db(question_db_path)
    return ServiceState(
        model=model,
        schema=schema,
        catalog=catalog,
        question_db=qdb,
        model_version=file_digest(checkpoint_path),
        catalog_version=catalog.version,
        chat=ChatClientStub(),
    )


# --- request bodies ---------------------------------------------------------------


class PredictBody(BaseModel):
    profile: dict


class PlansBody(BaseModel):
    profile: dict
    categories: list[str] | None = None
    budget_eur: float | None = None


class FollowupsBody(BaseModel):
    question: str


class ChatBody(BaseModel):
    message: str


def _bad_request(status: int, message: str, field_name: str | None = None) -> JSONResponse:
    body: dict = {"error": "bad_request", "message": message}
    if field_name:
        body["field"] = field_name
    return JSONResponse(status_code=status, content=body)


def _validated_profile(state: ServiceState, profile: dict):
    """Validate the profile payload, naming the offending field on failure."""
    if not isinstance(profile, dict):
        raise _FieldError("profile", "profile must be an object of feature values")
    for name in state.schema.names:
        if name not in profile:
            raise _FieldError(f"profile.{name}", f"missing feature {name!r}")
    extra = set(profile) - set(state.schema.names)
    if extra:
        name = sorted(extra)[0]
        raise _FieldError(f"profile.{name}", f"unknown feature {name!r}")
    clean = {}
    for spec in state.schema.features:
        try:
            clean[spec.name] = state.schema.validate_value(spec, profile[spec.name])
        except RetroplanError as exc:
            raise _FieldError(f"profile.{spec.name}", str(exc)) from None
    return clean


class _FieldError(Exception):
    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        self.message = message
        super().__init__(message)


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="retroplan", docs_url=None, redoc_url=None)
    app.state.snapshot = state
    app.state.plans = _PlanStore()

    @app.exception_handler(_FieldError)
    async def field_error_handler(request: Request, exc: _FieldError):
        return _bad_request(422, exc.message, exc.field_name)

    @app.exception_handler(RetroplanError)
    async def domain_error_handler(request: Request, exc: RetroplanError):
        return JSONResponse(status_code=400, content=exc.payload())

    @app.get("/health")
    def health():
        snap: ServiceState = app.state.snapshot
        return {"model_version": snap.model_version, "catalog_version": snap.catalog_version}

    @app.get("/catalog")
    def catalog():
        snap: ServiceState = app.state.snapshot
        return {
            "items": [
                {
                    "id": i.id,
                    "category": i.category.value,
                    "name": i.name,
                    "mutations": i.mutation_dict,
                    "price_eur": i.price_eur,
                    "grant_eur": i.grant_eur,
                }
                for i in snap.catalog.items
            ]
        }

    @app.post("/predict")
    def predict_endpoint(body: PredictBody):
        snap: ServiceState = app.state.snapshot
        profile = _validated_profile(snap, body.profile)
        rating, probs = predict(snap.model, profile)
        return {
            "rating": rating.value,
            "coarse": to_coarse(rating).value,
            "probabilities": {r.value: float(p) for r, p in zip(ALL_RATINGS, probs)},
        }

    @app.post("/plans")
    def plans_endpoint(body: PlansBody):
        snap: ServiceState = app.state.snapshot
        profile = _validated_profile(snap, body.profile)
        if body.categories is None:
            categories = ALL_CATEGORIES
        else:
            cats = []
            for c in body.categories:
                try:
                    cats.append(ComponentCategory(c))
                except ValueError:
                    raise _FieldError("categories", f"unknown category {c!r}") from None
            categories = tuple(cats)
        if body.budget_eur is not None and body.budget_eur < 0:
            raise _FieldError("budget_eur", "budget must be >= 0")

        req = PlanRequest(
            home=profile,
            selected_categories=categories,
            budget_eur=body.budget_eur,
            combination_cap=snap.default_combination_cap,
        )
        frontier = enumerate_plans(req, snap.catalog, _BatchPredictor(snap.model))
        rows = frontier_report(frontier)

        frontier_out = []
        plan_ids = []
        for row in rows:
            doc = plan_to_text(row.plan, snap.schema, base_rating=frontier.base_rating)
            app.state.plans.put(doc.plan_id, doc.text)
            plan_ids.append(doc.plan_id)
            frontier_out.append(
                {
                    "rating": row.rating.value,
                    "item_ids": list(row.plan.item_ids),
                    "total_cost_eur": row.plan.total_cost,
                    "grant_eur": row.plan.total_grant,
                    "net_cost_eur": row.plan.net_cost,
                }
            )
        return {
            "base_rating": frontier.base_rating.value,
            "frontier": frontier_out,
            "plan_ids": plan_ids,
        }

    @app.get("/plans/{plan_id}/report")
    def plan_report(plan_id: str):
        text = app.state.plans.get(plan_id)
        if text is None:
            return _bad_request(404, f"no plan document with id {plan_id!r}", "plan_id")
        return PlainTextResponse(text)

    @app.post("/followups")
    def followups_endpoint(body: FollowupsBody):
        snap: ServiceState = app.state.snapshot
        result = suggest_followups(body.question, snap.question_db, k=3)
        return {
            "suggestions": [{"text": t, "score": s} for t, s in result.suggestions],
            "low_confidence": result.low_confidence,
        }

    @app.post("/chat")
    def chat_endpoint(body: ChatBody):
        snap: ServiceState = app.state.snapshot
        category, reply = snap.chat.respond(body.message)
        followups = suggest_followups(body.message, snap.question_db, k=3)
        return {
            "reply": reply,
            "category": category,
            "suggestions": [{"text": t, "score": s} for t, s in followups.suggestions],
            "low_confidence": followups.low_confidence,
            "stub": True,
        }

    return app


class _BatchPredictor:
    """Adapter giving the enumerator batch profile predictions."""

    def __init__(self, model):
        self.model = model

    def predict_profiles(self, profiles):
        return predict_profiles(self.model, profiles)


def serve(state: ServiceState, host: str = "127.0.0.1", port: int = 8349) -> None:
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(state), host=host, port=port, log_level="warning")
