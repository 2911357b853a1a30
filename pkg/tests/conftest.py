"""Shared fixtures: the 6x6x4 purchases grid used across the test suite."""

import random

import pytest

from trisearch.context import build_context, parse_table_text
from trisearch.miner import mine_concepts

PURCHASES_TABLE = """\
# customers x suppliers, cells hold product letters
  P    N    R    K    S    T
1 abd  abd  ac   ab   a    a
2 ad   abcd abd  ad   ad   a
3 abd  ad   ab   ab   a    a
4 abd  abd  ab   ab   ad   a
5 ad   ad   abd  abc  a    ab
6 abcd abcd abcd abcd abcd abcd
"""


@pytest.fixture(scope="session")
def purchases():
    return parse_table_text(PURCHASES_TABLE)


@pytest.fixture(scope="session")
def purchase_concepts(purchases):
    return mine_concepts(purchases)


def random_label_context(rng: random.Random, n1: int, n2: int, n3: int, density: float):
    """A small random context with labelled elements, for property runs."""
    triples = []
    for i in range(n1):
        for j in range(n2):
            for k in range(n3):
                if rng.random() < density:
                    triples.append((f"o{i}", f"a{j}", f"c{k}"))
    labels = (
        [f"o{i}" for i in range(n1)],
        [f"a{j}" for j in range(n2)],
        [f"c{k}" for k in range(n3)],
    )
    return build_context(triples, labels=labels)


def ids_of(ctx, dimension: int, labels) -> frozenset:
    d = ctx.dictionary(dimension)
    return frozenset(d.id_of(lab) for lab in labels)


def concept_key_labels(concepts, concept) -> tuple[tuple[str, ...], ...]:
    extent, intent, modus = concepts.label_parts(concept)
    return (tuple(extent), tuple(intent), tuple(modus))
