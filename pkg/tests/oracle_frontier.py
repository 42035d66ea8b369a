"""Independent brute-force frontier oracle, kept deliberately separate from
the production enumerator: plain loops, no shared combination machinery."""

import itertools


def brute_force_frontier(req, catalog, model):
    """Exhaustive reference enumeration; returns {rating: (net, n_items, ids)}."""
    per_category = []
    for category in req.selected_categories:
        items = sorted(
            (i for i in catalog.items if i.category is category), key=lambda i: i.id
        )
        per_category.append(list(items) if req.strict else [None] + list(items))

    best = {}
    pools = per_category if per_category else [[None]]
    for picks in itertools.product(*pools):
        items = [i for i in picks if i is not None]
        total = 0.0
        grant = 0.0
        for i in items:
            total += i.price_eur
            grant += i.grant_eur
        net = total - grant
        if req.budget_eur is not None:
            spend = net if req.budget_basis == "net" else total
            if spend > req.budget_eur:
                continue
        profile = dict(req.home)
        for i in items:
            for feature, value in i.mutations:
                profile[feature] = value
        rating = model.predict_profiles([profile])[0]
        key = (net, len(items), tuple(sorted(i.id for i in items)))
        if rating not in best or key < best[rating]:
            best[rating] = key
    return best
