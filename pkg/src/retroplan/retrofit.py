"""Retrofit planning: priced catalog, feature mutation, frontier enumeration.

Plans are combinations of at most one item per component category (an
implicit zero-cost keep-existing option is always available unless strict
mode forces a choice). Every combination's mutated profile is scored by the
frozen classifier; per distinct predicted rating the cheapest plan within
budget survives. Ties break on fewer items, then lexicographic item ids, so
enumeration order never affects the result.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    BadValue,
    CatalogError,
    CombinationLimitExceeded,
    ConflictingMutations,
    DuplicateId,
    EmptyCategory,
    GrantExceedsPrice,
    UnknownFeature,
)
from .ratings import EnergyRating
from .schema import FeatureSchema, HomeProfile


class ComponentCategory(enum.Enum):
    WALL_INSULATION = "wall_insulation"
    ROOF_INSULATION = "roof_insulation"
    FLOOR_INSULATION = "floor_insulation"
    WINDOW = "window"
    DOOR = "door"
    ATTIC_INSULATION = "attic_insulation"
    HEATING_CONTROLS = "heating_controls"
    MVHR = "mvhr"
    SOLAR_PANELS = "solar_panels"

    def __str__(self) -> str:
        return self.value


ALL_CATEGORIES: tuple[ComponentCategory, ...] = tuple(ComponentCategory)


@dataclass(frozen=True)
class RetrofitItem:
    id: str
    category: ComponentCategory
    name: str
    mutations: tuple[tuple[str, float | str], ...]  # (feature, new value)
    price_eur: float
    grant_eur: float = 0.0

    @property
    def net_eur(self) -> float:
        return self.price_eur - self.grant_eur

    @property
    def mutation_dict(self) -> dict:
        return dict(self.mutations)

    def validate(self, schema: FeatureSchema) -> None:
        if not self.mutations:
            raise CatalogError(f"item {self.id!r} mutates no features")
        if self.price_eur < 0 or self.grant_eur < 0:
            raise CatalogError(f"item {self.id!r} has a negative price or grant")
        if self.grant_eur > self.price_eur:
            raise GrantExceedsPrice(
                f"item {self.id!r}: grant {self.grant_eur} exceeds price {self.price_eur}"
            )
        seen = set()
        for feature, value in self.mutations:
            if feature in seen:
                raise CatalogError(f"item {self.id!r} mutates {feature!r} twice")
            seen.add(feature)
            spec = schema.feature(feature)  # raises UnknownFeature
            schema.validate_value(spec, value, check_range=True)


@dataclass(frozen=True)
class Catalog:
    items: tuple[RetrofitItem, ...]
    version: str = "0"

    def by_category(self, category: ComponentCategory) -> tuple[RetrofitItem, ...]:
        return tuple(i for i in self.items if i.category is category)

    def item(self, item_id: str) -> RetrofitItem:
        for i in self.items:
            if i.id == item_id:
                return i
        raise CatalogError(f"no item with id {item_id!r}")

    @property
    def categories(self) -> tuple[ComponentCategory, ...]:
        present = {i.category for i in self.items}
        return tuple(c for c in ALL_CATEGORIES if c in present)


def load_catalog(path: str | Path, schema: FeatureSchema) -> Catalog:
    """Parse and validate a catalog file (JSON with a versioned header)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}") from None
    return catalog_from_jsonable(doc, schema)


def catalog_from_jsonable(doc: dict, schema: FeatureSchema) -> Catalog:
    items: list[RetrofitItem] = []
    seen_ids: set[str] = set()
    for raw in doc.get("items", []):
        try:
            category = ComponentCategory(raw["category"])
        except ValueError:
            raise CatalogError(f"item {raw.get('id')!r}: unknown category {raw.get('category')!r}")
        item = RetrofitItem(
            id=str(raw["id"]),
            category=category,
            name=str(raw.get("name", raw["id"])),
            mutations=tuple((k, v) for k, v in raw["mutations"].items()),
            price_eur=float(raw["price_eur"]),
            grant_eur=float(raw.get("grant_eur", 0.0)),
        )
        if item.id in seen_ids:
            raise DuplicateId(f"duplicate item id {item.id!r}")
        seen_ids.add(item.id)
        item.validate(schema)
        items.append(item)
    return Catalog(items=tuple(items), version=str(doc.get("version", "0")))


def default_catalog(schema: FeatureSchema) -> Catalog:
    from importlib import resources

    text = resources.files("retroplan.assets").joinpath("retrofit_catalog.json").read_text("utf-8")
    return catalog_from_jsonable(json.loads(text), schema)


# --- mutation ---------------------------------------------------------------------


def apply_items(home: HomeProfile, items: list[RetrofitItem]) -> HomeProfile:
    """Return a copy of the profile with each item's mutations applied.

    Two items touching the same feature conflict; the input profile is never
    modified, and non-conflicting items commute.
    """
    cats = [i.category for i in items]
    if len(set(cats)) != len(cats):
        raise ConflictingMutations("more than one item from the same category")
    out = dict(home)
    owner: dict[str, str] = {}
    for item in items:
        for feature, value in item.mutations:
            if feature in owner:
                raise ConflictingMutations(
                    f"items {owner[feature]!r} and {item.id!r} both mutate {feature!r}"
                )
            owner[feature] = item.id
            out[feature] = value
    return out


# --- planning ----------------------------------------------------------------------


@dataclass(frozen=True)
class PlanRequest:
    home: HomeProfile
    selected_categories: tuple[ComponentCategory, ...] = ALL_CATEGORIES
    budget_eur: float | None = None  # None = unlimited
    combination_cap: int = 1_000_000
    budget_basis: str = "net"  # "net" | "gross"
    strict: bool = False  # True forces one item per selected category

    def __post_init__(self):
        if self.budget_eur is not None and self.budget_eur < 0:
            raise BadValue("budget must be >= 0")
        if self.combination_cap < 1:
            raise BadValue("combination_cap must be >= 1")
        if self.budget_basis not in ("net", "gross"):
            raise BadValue(f"unknown budget basis {self.budget_basis!r}")


@dataclass(frozen=True)
class RetrofitPlan:
    items: tuple[RetrofitItem, ...]
    predicted_rating: EnergyRating
    total_cost: float
    total_grant: float

    @property
    def net_cost(self) -> float:
        return self.total_cost - self.total_grant

    @property
    def item_ids(self) -> tuple[str, ...]:
        return tuple(i.id for i in self.items)


@dataclass(frozen=True)
class PlanFrontier:
    entries: dict[EnergyRating, RetrofitPlan]
    base_rating: EnergyRating

    def ratings(self) -> list[EnergyRating]:
        return sorted(self.entries, key=lambda r: r.index)

    def best_rating(self) -> EnergyRating | None:
        ratings = self.ratings()
        return ratings[0] if ratings else None


def _plan_sort_key(plan: RetrofitPlan) -> tuple:
    return (plan.net_cost, len(plan.items), tuple(sorted(plan.item_ids)))


def enumerate_plans(req: PlanRequest, catalog: Catalog, model) -> PlanFrontier:
    """Exhaustive enumeration of per-category item choices under a budget.

    ``model`` must expose ``predict_profiles(list[HomeProfile]) ->
    list[EnergyRating]``. The frontier maps each achievable rating to its
    cheapest plan (net of grants by default).
    """
    options: list[tuple[RetrofitItem | None, ...]] = []
    for category in req.selected_categories:
        items = tuple(sorted(catalog.by_category(category), key=lambda i: i.id))
        if not items:
            raise EmptyCategory(f"catalog has no items for category {category.value!r}")
        options.append(items if req.strict else (None,) + items)

    size = math.prod(len(o) for o in options) if options else 1
    if size > req.combination_cap:
        raise CombinationLimitExceeded(
            f"{size} combinations exceed the cap of {req.combination_cap}"
        )

    base_rating = model.predict_profiles([dict(req.home)])[0]

    combos: list[tuple[RetrofitItem, ...]] = []
    profiles: list[HomeProfile] = []
    for picks in itertools.product(*options) if options else [()]:
        items = tuple(i for i in picks if i is not None)
        total = sum(i.price_eur for i in items)
        grant = sum(i.grant_eur for i in items)
        if req.budget_eur is not None:
            spend = total - grant if req.budget_basis == "net" else total
            if spend > req.budget_eur:
                continue
        combos.append(items)
        profiles.append(apply_items(req.home, list(items)))

    ratings = model.predict_profiles(profiles)

    entries: dict[EnergyRating, RetrofitPlan] = {}
    for items, rating in zip(combos, ratings):
        plan = RetrofitPlan(
            items=items,
            predicted_rating=rating,
            total_cost=sum(i.price_eur for i in items),
            total_grant=sum(i.grant_eur for i in items),
        )
        cur = entries.get(rating)
        if cur is None or _plan_sort_key(plan) < _plan_sort_key(cur):
            entries[rating] = plan
    return PlanFrontier(entries=entries, base_rating=base_rating)


# --- reporting --------------------------------------------------------------------


@dataclass(frozen=True)
class FrontierRow:
    rating: EnergyRating
    plan: RetrofitPlan
    improvement_steps: int  # positive = better than the base rating


def frontier_report(frontier: PlanFrontier) -> list[FrontierRow]:
    """Frontier rows ordered best rating first, with improvement vs base."""
    rows = []
    for rating in frontier.ratings():
        plan = frontier.entries[rating]
        rows.append(
            FrontierRow(
                rating=rating,
                plan=plan,
                improvement_steps=frontier.base_rating.index - rating.index,
            )
        )
    return rows


def render_frontier_text(frontier: PlanFrontier) -> str:
    lines = [
        f"base rating: {frontier.base_rating}",
        f"{'rating':>6}  {'net_eur':>10}  {'cost_eur':>10}  {'grant_eur':>10}  "
        f"{'steps':>5}  items",
    ]
    for row in frontier_report(frontier):
        ids = ", ".join(row.plan.item_ids) if row.plan.items else "(keep existing)"
        lines.append(
            f"{row.rating.value:>6}  {row.plan.net_cost:>10.2f}  {row.plan.total_cost:>10.2f}  "
            f"{row.plan.total_grant:>10.2f}  {row.improvement_steps:>5}  {ids}"
        )
    return "\n".join(lines) + "\n"
