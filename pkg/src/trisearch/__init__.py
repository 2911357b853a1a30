"""Triadic concept mining and tolerant triple retrieval.

Pipeline: build a ternary context, mine every closed tri-set, index the
concepts' elements, then answer partial or complete triple queries ranked by
similarity. A derivation-based approximation engine is included for
comparison, along with a benchmark harness and an oracle validation suite.
"""

from .baseline import (
    BaselineEngine,
    baseline_query,
    baseline_query_1d,
    baseline_query_2d,
    baseline_query_3d,
    build_baseline,
)
from .bench import BenchReport, run_benchmark
from .context import (
    DyadicContext,
    ElementDictionary,
    TriadicContext,
    build_context,
    load_context,
    load_table,
    load_triples,
)
from .index import InvertedIndex, build_index, load_index, save_index
from .miner import (
    ConceptSet,
    TriadicConcept,
    context_from_concepts,
    factorize,
    mine_concepts,
    mine_concepts_bruteforce,
    read_store,
    write_store,
)
from .query import (
    Query,
    RankedHit,
    make_query,
    parse_query,
    relevant_concepts,
    relevant_concepts_scan,
    rerank,
    search,
)
from .validate import ValidationReport, run_validation

__version__ = "0.1.0"

__all__ = [
    "BaselineEngine",
    "BenchReport",
    "ConceptSet",
    "DyadicContext",
    "ElementDictionary",
    "InvertedIndex",
    "Query",
    "RankedHit",
    "TriadicConcept",
    "TriadicContext",
    "ValidationReport",
    "baseline_query",
    "baseline_query_1d",
    "baseline_query_2d",
    "baseline_query_3d",
    "build_baseline",
    "build_context",
    "build_index",
    "context_from_concepts",
    "factorize",
    "load_context",
    "load_index",
    "load_table",
    "load_triples",
    "make_query",
    "mine_concepts",
    "mine_concepts_bruteforce",
    "parse_query",
    "read_store",
    "relevant_concepts",
    "relevant_concepts_scan",
    "rerank",
    "run_benchmark",
    "run_validation",
    "save_index",
    "search",
    "write_store",
]
