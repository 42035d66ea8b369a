"""Plan documents and follow-up question suggestion.

A plan document renders a retrofit plan into line-oriented annotated text
(grammar: ``key: value [unit] — context``) whose machine-readable prefixes
round-trip every numeric value exactly. Follow-up suggestion ranks a small
question database by tf-idf cosine similarity against the user's question and
returns the best match's curated follow-ups.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import BadValue, MissingTemplate
from .ratings import EnergyRating
from .retrofit import ALL_CATEGORIES, RetrofitPlan
from .schema import FeatureSchema, profile_digest

SEPARATOR = " — "  # divides the machine-readable prefix from the context prose


@dataclass(frozen=True)
class PlanDocument:
    plan_id: str
    structured: dict
    lines: tuple[str, ...]

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


@lru_cache(maxsize=1)
def default_templates() -> dict:
    text = resources.files("retroplan.assets").joinpath("feature_templates.json").read_text("utf-8")
    return json.loads(text)


def format_value(value) -> str:
    """Compact, exactly round-trippable rendering of a value."""
    if isinstance(value, str):
        return value
    v = float(value)
    if v.is_integer():
        return str(int(v))
    return repr(v)


def _line(key: str, value, context: str, unit: str = "") -> str:
    prefix = f"{key}: {format_value(value)}"
    if unit:
        prefix += f" {unit}"
    return prefix + SEPARATOR + context


def plan_to_text(
    plan: RetrofitPlan,
    schema: FeatureSchema,
    templates: dict | None = None,
    base_rating: EnergyRating | None = None,
    plan_id: str | None = None,
) -> PlanDocument:
    """Render a plan into annotated text, one line per component and feature.

    Line order is fixed: identity and ratings, costs, selected items in
    category order, then mutated features in schema order. Every feature line
    needs a context template; the shipped template table covers the full
    canonical schema.
    """
    templates = templates or default_templates()
    key_ctx = templates["keys"]
    cat_ctx = templates["categories"]
    feat_ctx = templates["features"]

    structured: dict = {}
    structured["predicted_rating"] = plan.predicted_rating.value
    if base_rating is not None:
        structured["base_rating"] = base_rating.value
        structured["rating_improvement"] = base_rating.index - plan.predicted_rating.index
    structured["total_cost_eur"] = float(plan.total_cost)
    structured["total_grant_eur"] = float(plan.total_grant)
    structured["net_cost_eur"] = float(plan.net_cost)

    if plan_id is None:
        plan_id = profile_digest(structured, ",".join(plan.item_ids))[:16]
    structured = {"plan_id": plan_id, **structured}

    lines = [_line(k, structured[k], key_ctx[k]) for k in structured]

    items = sorted(plan.items, key=lambda i: ALL_CATEGORIES.index(i.category))
    for item in items:
        key = f"item.{item.category.value}"
        context = (
            f"{cat_ctx[item.category.value]}: {item.name}, "
            f"{format_value(item.price_eur)} EUR gross, "
            f"{format_value(item.grant_eur)} EUR grant"
        )
        structured[key] = item.id
        lines.append(_line(key, item.id, context))

    mutated: dict[str, object] = {}
    for item in items:
        mutated.update(item.mutation_dict)
    for spec in schema.features:
        if spec.name not in mutated:
            continue
        if spec.name not in feat_ctx:
            raise MissingTemplate(f"no context template for feature {spec.name!r}")
        key = f"feature.{spec.name}"
        structured[key] = mutated[spec.name]
        lines.append(_line(key, mutated[spec.name], feat_ctx[spec.name], unit=spec.unit))

    return PlanDocument(plan_id=plan_id, structured=structured, lines=tuple(lines))


def parse_plan_text(text: str) -> dict:
    """Recover the structured key/value pairs from a rendered document."""
    out: dict = {}
    for raw in text.splitlines():
        if not raw.strip():
            continue
        head = raw.split(SEPARATOR, 1)[0]
        if ": " not in head:
            raise BadValue(f"unparseable plan line: {raw!r}")
        key, rest = head.split(": ", 1)
        value = rest.split(" ", 1)[0]
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


# --- follow-up suggestion -----------------------------------------------------


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric word split; the only tokenizer in the db."""
    return re.findall(r"[a-z0-9]+", text.lower())


@dataclass(frozen=True)
class QuestionDb:
    entries: tuple[tuple[str, tuple[str, ...]], ...]
    vocabulary: dict
    idf: np.ndarray
    vectors: np.ndarray  # (n_entries, vocab), rows l2-normalized

    def __len__(self) -> int:
        return len(self.entries)


def build_question_db(entries: list[tuple[str, list[str]]]) -> QuestionDb:
    """Build tf-idf vectors: tf = term count, idf = ln((1+N)/(1+df)) + 1."""
    if not entries:
        raise BadValue("question db must not be empty")
    docs = [tokenize(q) for q, _ in entries]
    vocab: dict[str, int] = {}
    for doc in docs:
        for tok in doc:
            if tok not in vocab:
                vocab[tok] = len(vocab)
    n_docs = len(docs)
    df = np.zeros(len(vocab))
    for doc in docs:
        for tok in set(doc):
            df[vocab[tok]] += 1
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0

    vectors = np.zeros((n_docs, len(vocab)))
    for i, doc in enumerate(docs):
        for tok in doc:
            vectors[i, vocab[tok]] += 1.0
    vectors *= idf
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    vectors /= norms
    return QuestionDb(
        entries=tuple((q, tuple(f)) for q, f in entries),
        vocabulary=vocab,
        idf=idf,
        vectors=vectors,
    )


def load_question_db(path: str | Path | None = None) -> QuestionDb:
    if path is None:
        text = resources.files("retroplan.assets").joinpath("question_db.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    doc = json.loads(text)
    return build_question_db([(e["question"], list(e["follow_ups"])) for e in doc["entries"]])


@dataclass(frozen=True)
class FollowupResult:
    suggestions: tuple[tuple[str, float], ...]  # (question text, similarity score)
    low_confidence: bool
    matched_question: str


def embed_query(db: QuestionDb, question: str) -> np.ndarray:
    vec = np.zeros(len(db.vocabulary))
    for tok in tokenize(question):
        idx = db.vocabulary.get(tok)
        if idx is not None:
            vec[idx] += 1.0
    vec *= db.idf
    norm = np.linalg.norm(vec)
    if norm > 0.0:
        vec /= norm
    return vec


def suggest_followups(question: str, db: QuestionDb, k: int = 3) -> FollowupResult:
    """Return the best-matching question's follow-ups, up to ``k``.

    Ranking is cosine similarity between tf-idf vectors; ties keep db order.
    A zero top score (disjoint vocabulary) is flagged low-confidence rather
    than treated as an error.
    """
    if k < 1:
        raise BadValue("k must be >= 1")
    if len(db) == 0:
        raise BadValue("question db must not be empty")
    scores = db.vectors @ embed_query(db, question)
    best = int(np.argmax(scores))  # first max -> db order breaks ties
    best_score = float(scores[best])
    matched, followups = db.entries[best]
    return FollowupResult(
        suggestions=tuple((f, best_score) for f in followups[:k]),
        low_confidence=best_score <= 0.0,
        matched_question=matched,
    )
