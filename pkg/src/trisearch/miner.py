"""Enumeration of all closed tri-sets of a context.

The miner flattens the context along the object dimension, enumerates the
dyadic concepts of that view with an iterative Close-by-One pass, factorizes
each dyadic intent (a set of attribute/condition pairs) into maximal
rectangles, and restores extent maximality by closing each rectangle back
through the incidence. A subset-seed brute-force enumerator doubles as the
correctness oracle, and the concept store file format lives here too.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .bitsets import full_mask, mask_from_ids, mask_to_ids
from .context import ElementDictionary, TriadicContext, other_dimensions
from .errors import BruteForceCapError, DataFormatError

DEFAULT_CELL_CAP = 1 << 18
_SEED_CAP = 1 << 20
_CAP_ENV_VAR = "TRISEARCH_BRUTEFORCE_CAP"

# characters that would collide with the store file's field separators
_FORBIDDEN_IN_LABELS = ("|", ",", "\n", "\r")


@dataclass(frozen=True)
class TriadicConcept:
    """A closed tri-set; components are sorted tuples of element ids."""

    id: int
    extent: tuple[int, ...]
    intent: tuple[int, ...]
    modus: tuple[int, ...]

    @property
    def parts(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return (self.extent, self.intent, self.modus)

    def part(self, dimension: int) -> tuple[int, ...]:
        return self.parts[dimension - 1]

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.parts

    def element_count(self) -> int:
        return len(self.extent) + len(self.intent) + len(self.modus)


class ConceptSet:
    """Ordered, duplicate-free collection of concepts with id lookup."""

    def __init__(
        self,
        concepts: list[TriadicConcept],
        dictionaries: tuple[ElementDictionary, ElementDictionary, ElementDictionary],
    ):
        self.concepts = concepts
        self.dictionaries = dictionaries
        self._by_key = {c.key: c.id for c in concepts}
        if len(self._by_key) != len(concepts):
            raise ValueError("duplicate concept in concept set")
        for i, c in enumerate(concepts):
            if c.id != i:
                raise ValueError("concept ids must match list positions")

    @classmethod
    def build(
        cls,
        parts: Iterable[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]],
        dictionaries: tuple[ElementDictionary, ElementDictionary, ElementDictionary],
        sort: bool = True,
    ) -> "ConceptSet":
        """Assemble a set from (extent, intent, modus) id tuples.

        With ``sort`` (the default) concepts are ordered lexicographically by
        extent, then intent, then modus, which fixes the id assignment.
        """
        items = list(parts)
        if sort:
            items.sort()
        concepts = [TriadicConcept(i, e, a, m) for i, (e, a, m) in enumerate(items)]
        return cls(concepts, dictionaries)

    def __len__(self) -> int:
        return len(self.concepts)

    def __iter__(self) -> Iterator[TriadicConcept]:
        return iter(self.concepts)

    def __getitem__(self, concept_id: int) -> TriadicConcept:
        return self.concepts[concept_id]

    def find(
        self, extent: Iterable[int], intent: Iterable[int], modus: Iterable[int]
    ) -> TriadicConcept | None:
        key = (tuple(sorted(extent)), tuple(sorted(intent)), tuple(sorted(modus)))
        concept_id = self._by_key.get(key)
        return None if concept_id is None else self.concepts[concept_id]

    def keys(self) -> set[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
        return set(self._by_key)

    def label_parts(self, concept: TriadicConcept) -> tuple[list[str], list[str], list[str]]:
        """The concept's components as label lists, each sorted as strings."""
        d1, d2, d3 = self.dictionaries
        return (
            d1.labels_of(concept.extent),
            d2.labels_of(concept.intent),
            d3.labels_of(concept.modus),
        )

    def find_labelled(
        self, extent: Iterable[str], intent: Iterable[str], modus: Iterable[str]
    ) -> TriadicConcept | None:
        d1, d2, d3 = self.dictionaries
        try:
            return self.find(
                (d1.id_of(x) for x in extent),
                (d2.id_of(x) for x in intent),
                (d3.id_of(x) for x in modus),
            )
        except DataFormatError:
            return None

    def total_occurrences(self) -> int:
        return sum(c.element_count() for c in self.concepts)


# -- dyadic enumeration -------------------------------------------------------


def dyadic_concepts(col_masks: Sequence[int], universe: int) -> Iterator[tuple[int, int]]:
    """All formal concepts of a binary relation, as (extent, intent) masks.

    ``col_masks[c]`` is the row mask of column ``c``; ``universe`` is the
    mask of all rows. Iterative Close-by-One: each concept is produced
    exactly once, in a deterministic order. Extents are masks over rows,
    intents over column indices.
    """
    n_cols = len(col_masks)
    root_intent = 0
    for c in range(n_cols):
        if universe & col_masks[c] == universe:
            root_intent |= 1 << c
    stack: list[tuple[int, int, int]] = [(universe, root_intent, 0)]
    while stack:
        extent, intent, start = stack.pop()
        yield extent, intent
        children: list[tuple[int, int, int]] = []
        for j in range(start, n_cols):
            if intent >> j & 1:
                continue
            child_extent = extent & col_masks[j]
            child_intent = 0
            canonical = True
            for c in range(n_cols):
                if child_extent & col_masks[c] == child_extent:
                    if c < j and not intent >> c & 1:
                        canonical = False
                        break
                    child_intent |= 1 << c
            if canonical:
                children.append((child_extent, child_intent, j + 1))
        stack.extend(reversed(children))


def factorize(
    pairs: Iterable[tuple[int, int]], row_count: int, col_count: int
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All maximal rectangles of a pair set within the given universes.

    Returns (rows, cols) id tuples sorted lexicographically. Rectangles with
    an empty side are included whenever they are maximal, e.g. the empty pair
    set factorizes into (all rows, no columns) and (no rows, all columns).
    """
    pair_set = set(pairs)
    for r, c in pair_set:
        if not (0 <= r < row_count and 0 <= c < col_count):
            raise ValueError(f"pair ({r}, {c}) outside {row_count}x{col_count} universe")
    if col_count <= row_count:
        masks = [0] * col_count
        for r, c in pair_set:
            masks[c] |= 1 << r
        rectangles = [
            (tuple(mask_to_ids(extent)), tuple(mask_to_ids(intent)))
            for extent, intent in dyadic_concepts(masks, full_mask(row_count))
        ]
    else:
        # enumerate over the row side instead, then swap back
        masks = [0] * row_count
        for r, c in pair_set:
            masks[r] |= 1 << c
        rectangles = [
            (tuple(mask_to_ids(intent)), tuple(mask_to_ids(extent)))
            for extent, intent in dyadic_concepts(masks, full_mask(col_count))
        ]
    rectangles.sort()
    return rectangles


# -- mining -------------------------------------------------------------------


def mine_concepts(ctx: TriadicContext) -> ConceptSet:
    """Enumerate every closed tri-set of the context.

    Ids are assigned after sorting by (extent, intent, modus), so mining the
    same context twice yields the same numbering.
    """
    n1, n2, n3 = ctx.sizes
    n_pairs = n2 * n3
    col_masks = [0] * n_pairs
    for a1, a2, a3 in ctx.triples:
        col_masks[a2 * n3 + a3] |= 1 << a1
    universe = full_mask(n1)

    # run Close-by-One over the non-empty pair columns only; a concept whose
    # extent is empty has every column (incident or not) in its true intent
    nonempty = [p for p in range(n_pairs) if col_masks[p]]
    sub_masks = [col_masks[p] for p in nonempty]
    full_pair_set = [(p // n3, p % n3) for p in range(n_pairs)]

    dyadic: list[tuple[int, list[tuple[int, int]]]] = []
    saw_empty_extent = False
    for extent_mask, intent_mask in dyadic_concepts(sub_masks, universe):
        if extent_mask == 0:
            saw_empty_extent = True
            dyadic.append((0, full_pair_set))
        else:
            pair_ids = [nonempty[c] for c in mask_to_ids(intent_mask)]
            dyadic.append((extent_mask, [(p // n3, p % n3) for p in pair_ids]))
    if not saw_empty_extent and len(nonempty) < n_pairs:
        # the all-columns concept exists but is invisible to the reduced pass
        dyadic.append((0, full_pair_set))

    seen: set[tuple[int, tuple[int, ...], tuple[int, ...]]] = set()
    parts = []
    for _, pair_list in dyadic:
        for rows, cols in factorize(pair_list, n2, n3):
            extent_mask = universe
            for a2 in rows:
                base = a2 * n3
                for a3 in cols:
                    extent_mask &= col_masks[base + a3]
            key = (extent_mask, rows, cols)
            if key not in seen:
                seen.add(key)
                parts.append((tuple(mask_to_ids(extent_mask)), rows, cols))
    return ConceptSet.build(parts, ctx.dictionaries)


def _bruteforce_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(_CAP_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise BruteForceCapError(f"{_CAP_ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_CELL_CAP


def mine_concepts_bruteforce(ctx: TriadicContext, cap: int | None = None) -> ConceptSet:
    """Oracle enumeration: close every subset of the smallest dimension.

    For each seed subset the common pairs of the other two dimensions are
    factorized into maximal rectangles, each rectangle is closed back, and
    candidates are kept only if they pass the closedness test. Intended for
    validation; refuses contexts beyond the cell cap (default 2**18 cells,
    overridable via ``TRISEARCH_BRUTEFORCE_CAP``).
    """
    cap_value = _bruteforce_cap(cap)
    cells = ctx.cell_count()
    if cells > cap_value:
        raise BruteForceCapError(f"context has {cells} cells, brute-force cap is {cap_value}")
    sizes = ctx.sizes
    seed_dim = min(range(1, 4), key=lambda d: sizes[d - 1])
    n_seed = sizes[seed_dim - 1]
    if 1 << n_seed > _SEED_CAP:
        raise BruteForceCapError(
            f"smallest dimension has {n_seed} elements, too many subset seeds"
        )
    j, k = other_dimensions(seed_dim)
    nj, nk = sizes[j - 1], sizes[k - 1]

    found = set()
    for seed_mask in range(1 << n_seed):
        seed = mask_to_ids(seed_mask)
        pairs = ctx.derive_outer(seed_dim, seed)
        for rows, cols in factorize(pairs, nj, nk):
            closed_seed = tuple(sorted(ctx.derive_inner(seed_dim, rows, cols)))
            triple: list[tuple[int, ...]] = [(), (), ()]
            triple[seed_dim - 1] = closed_seed
            triple[j - 1] = rows
            triple[k - 1] = cols
            if ctx.is_closed_triset(*triple):
                found.add((triple[0], triple[1], triple[2]))
    return ConceptSet.build(found, ctx.dictionaries)


# -- concept store file format ------------------------------------------------


def write_store(path, concepts: ConceptSet) -> None:
    """Write one concept per line: ``extent|intent|modus``, each field a
    comma-separated label list sorted as strings; line number = concept id."""
    for d in concepts.dictionaries:
        for label in d.labels:
            for ch in _FORBIDDEN_IN_LABELS:
                if ch in label:
                    raise DataFormatError(
                        f"label {label!r} contains {ch!r}, not storable in a concept store"
                    )
            if label != label.strip():
                raise DataFormatError(f"label {label!r} has surrounding whitespace")
    with open(path, "w", encoding="utf-8") as fh:
        for concept in concepts:
            extent, intent, modus = concepts.label_parts(concept)
            fh.write(f"{','.join(extent)}|{','.join(intent)}|{','.join(modus)}\n")


def read_store(path) -> ConceptSet:
    """Load a concept store; element ids are assigned in first-seen order
    scanning the file, concept ids follow line order."""
    dicts = (ElementDictionary(1), ElementDictionary(2), ElementDictionary(3))
    parts = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            fields = line.split("|")
            if len(fields) != 3:
                raise DataFormatError(f"{path}:{lineno}: expected 3 '|'-separated fields")
            ids = []
            for d, field in zip(dicts, fields):
                labels = field.split(",") if field else []
                if any(not lab for lab in labels):
                    raise DataFormatError(f"{path}:{lineno}: empty label")
                ids.append(tuple(sorted(d.add(lab) for lab in labels)))
            parts.append((ids[0], ids[1], ids[2]))
    concepts = ConceptSet.build(parts, dicts, sort=False)
    return concepts


def context_from_concepts(concepts: ConceptSet) -> TriadicContext:
    """Rebuild the incidence a concept set was mined from.

    Every incidence triple lies inside at least one maximal tri-set and every
    tri-set lies inside the incidence, so the union of all concept blocks
    recovers the original relation exactly (the baseline engine uses this
    when only a store is at hand).
    """
    triples = set()
    for c in concepts:
        for a1 in c.extent:
            for a2 in c.intent:
                for a3 in c.modus:
                    triples.add((a1, a2, a3))
    return TriadicContext(concepts.dictionaries, frozenset(triples))
