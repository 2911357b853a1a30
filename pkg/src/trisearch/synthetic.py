"""Seeded generators for synthetic contexts and concept sets.

The two shaped generators mimic the proportions of the benchmark datasets
(a tall context with few conditions, and a sparse retail-style context with
month-granularity conditions) without shipping any third-party data. All
output is a pure function of the seed.
"""

from __future__ import annotations

import random

from .context import ElementDictionary, TriadicContext
from .miner import ConceptSet


def _dictionaries(
    object_labels: list[str], attribute_labels: list[str], condition_labels: list[str]
) -> tuple[ElementDictionary, ElementDictionary, ElementDictionary]:
    dicts = (ElementDictionary(1), ElementDictionary(2), ElementDictionary(3))
    for d, labels in zip(dicts, (object_labels, attribute_labels, condition_labels)):
        for label in labels:
            d.add(label)
    return dicts


def random_context(
    n_objects: int, n_attributes: int, n_conditions: int, density: float, seed: int = 0
) -> TriadicContext:
    """Uniform Bernoulli incidence over every cell."""
    rng = random.Random(seed)
    triples = {
        (o, a, c)
        for o in range(n_objects)
        for a in range(n_attributes)
        for c in range(n_conditions)
        if rng.random() < density
    }
    dicts = _dictionaries(
        [f"o{i}" for i in range(n_objects)],
        [f"a{i}" for i in range(n_attributes)],
        [f"c{i}" for i in range(n_conditions)],
    )
    return TriadicContext(dicts, frozenset(triples))


def profile_context(
    n_objects: int,
    n_attributes: int,
    n_conditions: int,
    n_profiles: int,
    cell_density: float,
    seed: int = 0,
) -> TriadicContext:
    """Tall context whose rows repeat a limited pool of incidence profiles.

    Real categorical datasets have far fewer distinct rows than objects;
    drawing each object's attribute/condition cells from a profile pool
    reproduces that, which keeps the concept count in a realistic band while
    the object dimension stays large.
    """
    rng = random.Random(seed)
    profiles: list[list[tuple[int, int]]] = []
    for _ in range(n_profiles):
        cells = [
            (a, c)
            for a in range(n_attributes)
            for c in range(n_conditions)
            if rng.random() < cell_density
        ]
        profiles.append(cells)
    triples = set()
    for o in range(n_objects):
        for a, c in profiles[rng.randrange(n_profiles)]:
            triples.add((o, a, c))
    dicts = _dictionaries(
        [f"o{i}" for i in range(n_objects)],
        [f"a{i}" for i in range(n_attributes)],
        [f"c{i}" for i in range(n_conditions)],
    )
    return TriadicContext(dicts, frozenset(triples))


def mushroom_shaped(
    seed: int = 0,
    n_objects: int = 8416,
    n_attributes: int = 32,
    n_conditions: int = 4,
    n_profiles: int = 80,
    cell_density: float = 0.13,
) -> TriadicContext:
    """8416 x 32 x 4 profile context (the tall benchmark shape).

    The default profile pool and density land in the low thousands of
    concepts, mirroring the categorical dataset this shape imitates.
    """
    return profile_context(n_objects, n_attributes, n_conditions, n_profiles, cell_density, seed)


def groceries_shaped(
    seed: int = 0,
    n_customers: int = 3898,
    n_items: int = 167,
    n_months: int = 24,
    max_baskets: int = 4,
    max_items: int = 8,
) -> TriadicContext:
    """3898 x 167 x 24 sparse basket context.

    Conditions are calendar buckets labelled year-month (2014-01 through
    2015-12 for the default span): a triple says the customer bought the item
    at some point during that month.
    """
    rng = random.Random(seed)
    months = [f"{2014 + m // 12}-{m % 12 + 1:02d}" for m in range(n_months)]
    triples = set()
    for customer in range(n_customers):
        for _ in range(rng.randint(1, max_baskets)):
            month = rng.randrange(n_months)
            for _ in range(rng.randint(1, max_items)):
                triples.add((customer, rng.randrange(n_items), month))
    dicts = _dictionaries(
        [f"u{i}" for i in range(n_customers)],
        [f"i{i}" for i in range(n_items)],
        months,
    )
    return TriadicContext(dicts, frozenset(triples))


def synthetic_concepts(
    n_concepts: int,
    sizes: tuple[int, int, int] = (500, 64, 12),
    seed: int = 0,
    max_extent: int = 12,
) -> ConceptSet:
    """A concept set with random components, for index round-trip fixtures.

    The tri-sets are not closed against any context; the inverted index only
    sees element memberships, so closedness is irrelevant here.
    """
    rng = random.Random(seed)
    n1, n2, n3 = sizes
    keys = set()
    while len(keys) < n_concepts:
        extent = tuple(sorted(rng.sample(range(n1), rng.randint(1, min(max_extent, n1)))))
        intent = tuple(sorted(rng.sample(range(n2), rng.randint(1, min(6, n2)))))
        modus = tuple(sorted(rng.sample(range(n3), rng.randint(1, min(4, n3)))))
        keys.add((extent, intent, modus))
    dicts = _dictionaries(
        [f"o{i}" for i in range(n1)],
        [f"a{i}" for i in range(n2)],
        [f"c{i}" for i in range(n3)],
    )
    return ConceptSet.build(keys, dicts)
