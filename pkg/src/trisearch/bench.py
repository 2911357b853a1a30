"""Benchmark harness: structure creation and query latency for both engines.

Queries are sampled from real concepts (a random concept, then a random
non-empty subset of each requested component, capped at eight elements per
dimension to stay exploration-sized), so every sampled query has at least one
full match. Timing uses the monotonic performance counter; each cell of the
report is sampled at least three times and summarized as mean and standard
deviation in milliseconds. Timed runs are strictly sequential.
"""

from __future__ import annotations

import json
import random
import statistics
import time
from dataclasses import dataclass, field

from .baseline import baseline_query, build_baseline
from .context import TriadicContext
from .index import build_index
from .miner import ConceptSet, mine_concepts
from .query import Query, make_query, search

STRUCTURE_ROW = "structures"
QUERY_SHAPES: tuple[tuple[str, str, tuple[int, ...]], ...] = (
    ("q1_dim3", "(-,-,X3)", (3,)),
    ("q1_dim2", "(-,X2,-)", (2,)),
    ("q1_dim1", "(X1,-,-)", (1,)),
    ("q2_dim23", "(-,X2,X3)", (2, 3)),
    ("q2_dim13", "(X1,-,X3)", (1, 3)),
    ("q2_dim12", "(X1,X2,-)", (1, 2)),
    ("q3", "(X1,X2,X3)", (1, 2, 3)),
)
ROW_LABELS = {STRUCTURE_ROW: "Create data structure"} | {
    key: f"{display} query" for key, display, _ in QUERY_SHAPES
}
ENGINES = ("baseline", "indexed")
_MAX_QUERY_PART = 8


@dataclass
class BenchCell:
    samples_ms: list[float] = field(default_factory=list)

    @property
    def mean_ms(self) -> float:
        return statistics.fmean(self.samples_ms)

    @property
    def std_ms(self) -> float:
        return statistics.stdev(self.samples_ms) if len(self.samples_ms) > 1 else 0.0


@dataclass
class BenchReport:
    dataset: dict
    repetitions: int
    sample_size: int
    seed: int
    cells: dict[str, dict[str, BenchCell]]

    def cell(self, row: str, engine: str) -> BenchCell:
        return self.cells[row][engine]

    def to_json_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "repetitions": self.repetitions,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "rows": [STRUCTURE_ROW] + [key for key, _, _ in QUERY_SHAPES],
            "cells": {
                row: {
                    engine: {
                        "mean_ms": cell.mean_ms,
                        "std_ms": cell.std_ms,
                        "samples_ms": cell.samples_ms,
                    }
                    for engine, cell in engines.items()
                }
                for row, engines in self.cells.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def format_table(self) -> str:
        d = self.dataset
        sizes = "x".join(str(n) for n in d["sizes"])
        lines = [
            f"dataset: {sizes}, {d['incidences']} incidences, {d['concepts']} concepts",
            f"repetitions: {self.repetitions}, queries per shape: {self.sample_size}, "
            f"seed: {self.seed}",
            "",
            f"{'operation':<28}{'baseline':>22}{'indexed':>22}",
        ]
        for row in [STRUCTURE_ROW] + [key for key, _, _ in QUERY_SHAPES]:
            entries = []
            for engine in ENGINES:
                cell = self.cells[row][engine]
                entries.append(f"{_sig3(cell.mean_ms)} ms ± {_sig3(cell.std_ms)}")
            lines.append(f"{ROW_LABELS[row]:<28}{entries[0]:>22}{entries[1]:>22}")
        return "\n".join(lines)


def _sig3(value: float) -> str:
    return f"{value:.3g}"


def sample_query(concepts: ConceptSet, dims: tuple[int, ...], rng: random.Random) -> Query:
    """A random query of the given shape, drawn from a real concept."""
    eligible = [c for c in concepts if all(c.part(d) for d in dims)]
    if not eligible:
        raise ValueError(f"no concept has non-empty components in dimensions {dims}")
    concept = eligible[rng.randrange(len(eligible))]
    parts: list[frozenset[int]] = [frozenset(), frozenset(), frozenset()]
    for d in dims:
        component = concept.part(d)
        size = rng.randint(1, min(len(component), _MAX_QUERY_PART))
        parts[d - 1] = frozenset(rng.sample(component, size))
    return make_query((parts[0], parts[1], parts[2]))


def run_benchmark(
    ctx: TriadicContext,
    repetitions: int = 3,
    sample_size: int = 3,
    seed: int = 0,
    concepts: ConceptSet | None = None,
) -> BenchReport:
    """Time structure creation and all seven query shapes on both engines.

    Mining happens once, untimed (both engines take the concepts as given).
    Repetitions are clamped to at least three so every cell carries enough
    samples for a standard deviation.
    """
    repetitions = max(3, repetitions)
    if sample_size < 1:
        raise ValueError("sample_size must be at least 1")
    mine_start = time.perf_counter()
    if concepts is None:
        concepts = mine_concepts(ctx)
    mine_seconds = time.perf_counter() - mine_start
    dataset = {
        "sizes": list(ctx.sizes),
        "incidences": len(ctx.triples),
        "concepts": len(concepts),
        "mine_seconds": mine_seconds,
    }

    cells: dict[str, dict[str, BenchCell]] = {STRUCTURE_ROW: {e: BenchCell() for e in ENGINES}}
    for _ in range(repetitions):
        t0 = time.perf_counter()
        build_baseline(ctx, concepts)
        cells[STRUCTURE_ROW]["baseline"].samples_ms.append((time.perf_counter() - t0) * 1000)
        t0 = time.perf_counter()
        build_index(concepts)
        cells[STRUCTURE_ROW]["indexed"].samples_ms.append((time.perf_counter() - t0) * 1000)

    index = build_index(concepts)
    engine = build_baseline(ctx, concepts)
    rng = random.Random(seed)
    for key, _display, dims in QUERY_SHAPES:
        queries = [sample_query(concepts, dims, rng) for _ in range(sample_size)]
        cells[key] = {e: BenchCell() for e in ENGINES}
        for _ in range(repetitions):
            t0 = time.perf_counter()
            for q in queries:
                baseline_query(engine, q)
            elapsed = time.perf_counter() - t0
            cells[key]["baseline"].samples_ms.append(elapsed / len(queries) * 1000)
            t0 = time.perf_counter()
            for q in queries:
                search(index, concepts, q)
            elapsed = time.perf_counter() - t0
            cells[key]["indexed"].samples_ms.append(elapsed / len(queries) * 1000)
    return BenchReport(dataset, repetitions, sample_size, seed, cells)
