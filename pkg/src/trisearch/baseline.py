"""Approximation engine answering queries through context derivations.

This is the prior approach the indexed engine is compared against: it keeps
the three dyadic views of the context and answers queries by deriving and
factorizing inside them, returning an unranked handful of concepts. Building
the views is expensive (each column table is a full Cartesian product of two
dimensions) and that cost, together with per-query derivation time, is what
the benchmark measures.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Mapping

from .bitsets import mask_from_ids, mask_to_ids
from .context import DyadicContext, TriadicContext, other_dimensions
from .miner import ConceptSet, TriadicConcept, factorize
from .query import Query


@dataclass(frozen=True)
class BaselineBuildMetrics:
    """Wall-clock cost of materializing the three dyadic views."""

    projection_seconds: tuple[float, float, float]
    total_seconds: float
    cell_counts: tuple[int, int, int]


class BaselineEngine:
    """The three dyadic views plus the concept set for answer lookup."""

    def __init__(
        self,
        projections: tuple[DyadicContext, DyadicContext, DyadicContext],
        concepts: ConceptSet,
        metrics: BaselineBuildMetrics,
    ):
        self.projections = projections
        self.concepts = concepts
        self.metrics = metrics

    def view(self, dimension: int) -> DyadicContext:
        return self.projections[dimension - 1]

    def _derive(self, dimension: int, known: Mapping[int, frozenset[int]]) -> frozenset[int]:
        """Elements of ``dimension`` covering the block of the two known sets."""
        j, k = other_dimensions(dimension)
        view = self.view(dimension)
        left, right = known[j], known[k]
        if not left or not right:
            return frozenset(range(view.row_count))
        nk = view.col_counts[1]
        block = mask_from_ids(aj * nk + ak for aj in left for ak in right)
        return frozenset(view.rows_with_block(block))

    def is_closed(
        self, extent: frozenset[int], intent: frozenset[int], modus: frozenset[int]
    ) -> bool:
        parts = {1: extent, 2: intent, 3: modus}
        return all(self._derive(dim, parts) == parts[dim] for dim in (1, 2, 3))


def build_baseline(ctx: TriadicContext, concepts: ConceptSet) -> BaselineEngine:
    """Materialize all three dyadic views eagerly, recording the cost."""
    projections = []
    seconds = []
    started = time.perf_counter()
    for dimension in (1, 2, 3):
        t0 = time.perf_counter()
        projections.append(ctx.project_dyadic(dimension))
        seconds.append(time.perf_counter() - t0)
    total = time.perf_counter() - started
    metrics = BaselineBuildMetrics(
        (seconds[0], seconds[1], seconds[2]),
        total,
        (projections[0].column_count, projections[1].column_count, projections[2].column_count),
    )
    return BaselineEngine((projections[0], projections[1], projections[2]), concepts, metrics)


def _resolve(engine: BaselineEngine, triple: tuple[tuple, tuple, tuple]) -> TriadicConcept:
    concept = engine.concepts.find(*triple)
    if concept is None:
        raise ValueError(
            f"closure produced a tri-set missing from the concept store: {triple}"
        )
    return concept


def _ordered(concepts: Iterable[TriadicConcept]) -> list[TriadicConcept]:
    return sorted(set(concepts), key=lambda c: c.key)


def baseline_query_1d(
    engine: BaselineEngine, dimension: int, elements: Iterable[int]
) -> list[TriadicConcept]:
    """Concepts whose component ``dimension`` minimally contains the elements.

    The derivation of the element set is factorized into maximal rectangles;
    closing each rectangle yields every concept containing the elements whose
    component could possibly be minimal, and non-minimal components are then
    dropped. The result keeps all concepts tied on a minimal component.
    """
    elements = frozenset(elements)
    if not elements:
        raise ValueError("one-dimensional query needs a non-empty element set")
    view = engine.view(dimension)
    pair_mask = view.common_pairs_mask(elements)
    nj, nk = view.col_counts
    pairs = [(c // nk, c % nk) for c in mask_to_ids(pair_mask)]
    j, k = other_dimensions(dimension)
    candidates: list[TriadicConcept] = []
    for rows, cols in factorize(pairs, nj, nk):
        block = mask_from_ids(aj * nk + ak for aj in rows for ak in cols)
        closed = tuple(view.rows_with_block(block))
        triple: list[tuple[int, ...]] = [(), (), ()]
        triple[dimension - 1] = closed
        triple[j - 1] = rows
        triple[k - 1] = cols
        candidates.append(_resolve(engine, (triple[0], triple[1], triple[2])))
    kept = []
    for concept in candidates:
        component = set(concept.part(dimension))
        if not any(
            set(other.part(dimension)) < component
            for other in candidates
            if other.id != concept.id
        ):
            kept.append(concept)
    return _ordered(kept)


def _close_two(
    engine: BaselineEngine,
    known: dict[int, frozenset[int]],
    secondary: bool,
) -> tuple[tuple, tuple, tuple]:
    """Close a two-dimensional query into a full tri-set.

    The missing component is derived first. Then one given component is
    re-derived against it and the remaining one is re-derived last; the
    primary order starts from the lower-numbered given dimension, the
    secondary from the higher-numbered one.
    """
    p, q = sorted(known)
    (missing,) = set((1, 2, 3)) - {p, q}
    derived = dict(known)
    derived[missing] = engine._derive(missing, known)
    first, second = (q, p) if secondary else (p, q)
    derived[first] = engine._derive(first, {d: derived[d] for d in (1, 2, 3) if d != first})
    derived[second] = engine._derive(second, {d: derived[d] for d in (1, 2, 3) if d != second})
    return (
        tuple(sorted(derived[1])),
        tuple(sorted(derived[2])),
        tuple(sorted(derived[3])),
    )


def baseline_query_2d(
    engine: BaselineEngine,
    extent: Iterable[int] | None,
    intent: Iterable[int] | None,
    modus: Iterable[int] | None,
    both_orders: bool = True,
) -> list[TriadicConcept]:
    """Close a query giving two dimensions; one or two concepts come back.

    The two closure orders may land on different concepts; duplicates
    collapse. Passing ``both_orders=False`` keeps only the primary order.
    """
    given = {
        dim: frozenset(values)
        for dim, values in zip((1, 2, 3), (extent, intent, modus))
        if values is not None
    }
    if len(given) != 2 or not all(given.values()):
        raise ValueError("two-dimensional query needs exactly two non-empty components")
    triples = {_close_two(engine, given, secondary=False)}
    if both_orders:
        triples.add(_close_two(engine, given, secondary=True))
    return _ordered(_resolve(engine, t) for t in triples)


def baseline_query_3d(
    engine: BaselineEngine,
    extent: Iterable[int],
    intent: Iterable[int],
    modus: Iterable[int],
) -> list[TriadicConcept]:
    """Exact lookup when the triple is closed; otherwise the union of the
    three two-dimensional sub-queries (primary closure order)."""
    parts = (frozenset(extent), frozenset(intent), frozenset(modus))
    if not all(parts):
        raise ValueError("three-dimensional query needs three non-empty components")
    if engine.is_closed(*parts):
        triple = tuple(tuple(sorted(p)) for p in parts)
        return [_resolve(engine, triple)]
    found = set()
    for drop in (3, 2, 1):
        given = {dim: parts[dim - 1] for dim in (1, 2, 3) if dim != drop}
        found.add(_close_two(engine, given, secondary=False))
    return _ordered(_resolve(engine, t) for t in found)


def baseline_query(engine: BaselineEngine, query: Query) -> list[TriadicConcept]:
    """Dispatch a parsed query to the matching shape.

    Tolerance, mode and cutoff have no effect here: this engine has no
    notion of partial matching or ranking.
    """
    filled = [dim for dim in (1, 2, 3) if query.part(dim)]
    if len(filled) == 1:
        return baseline_query_1d(engine, filled[0], query.part(filled[0]))
    if len(filled) == 2:
        parts = [query.part(d) if query.part(d) else None for d in (1, 2, 3)]
        return baseline_query_2d(engine, parts[0], parts[1], parts[2])
    return baseline_query_3d(engine, *query.parts)


def time_query(engine: BaselineEngine, query: Query) -> tuple[list[TriadicConcept], float]:
    """Run a query and report its wall-clock cost."""
    t0 = time.perf_counter()
    result = baseline_query(engine, query)
    return result, time.perf_counter() - t0
