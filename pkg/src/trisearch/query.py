"""Tolerant triple queries over the inverted index.

A query names elements in any subset of the three dimensions. Candidate
concepts are gathered by uniting posting lists; the tolerance parameter says
how many query elements a returned concept may miss. Candidates are then
ordered by a similarity score that weights each dimension by its share of
the query and rewards tight components (a matching component of the same
size scores higher than a superset).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .context import ElementDictionary
from .errors import DataFormatError
from .index import InvertedIndex
from .miner import ConceptSet, TriadicConcept

MODES = ("contains", "exact")
THETA_SCOPES = ("total", "per_dimension")


@dataclass(frozen=True)
class Query:
    """Resolved query: per-dimension id sets plus matching parameters."""

    parts: tuple[frozenset[int], frozenset[int], frozenset[int]]
    theta: int = 0
    mode: str = "contains"
    k: int | None = None
    theta_scope: str = "total"

    @property
    def size(self) -> int:
        return sum(len(p) for p in self.parts)

    def part(self, dimension: int) -> frozenset[int]:
        return self.parts[dimension - 1]


def make_query(
    parts: tuple[Iterable[int], Iterable[int], Iterable[int]],
    theta: int = 0,
    mode: str = "contains",
    k: int | None = None,
    theta_scope: str = "total",
) -> Query:
    """Validate and normalize query parameters; theta is clamped to the
    number of query elements."""
    sets = tuple(frozenset(p) for p in parts)
    size = sum(len(p) for p in sets)
    if size == 0:
        raise DataFormatError("query specifies no elements")
    if theta < 0:
        raise DataFormatError("tolerance must be non-negative")
    if mode not in MODES:
        raise DataFormatError(f"mode must be one of {MODES}, got {mode!r}")
    if theta_scope not in THETA_SCOPES:
        raise DataFormatError(f"theta scope must be one of {THETA_SCOPES}, got {theta_scope!r}")
    if k is not None and k < 1:
        raise DataFormatError("result cutoff k must be at least 1")
    return Query(sets, min(theta, size), mode, k, theta_scope)


def parse_query(
    text: str,
    dictionaries: tuple[ElementDictionary, ElementDictionary, ElementDictionary],
    theta: int = 0,
    mode: str = "contains",
    k: int | None = None,
    label_separator: str | None = None,
    theta_scope: str = "total",
) -> Query:
    """Parse ``(F1, F2, F3)`` where each field is ``-`` or a label list.

    With the default ``label_separator=None`` a field is read as concatenated
    single-character labels (``KP`` means K and P), which matches datasets
    whose labels are single letters or digits. Datasets with longer labels
    set a separator, e.g. ``|``, and write ``(o1|o2, i5, 2014-02)``. Fields
    themselves are always separated by commas, so ``,`` cannot be used as the
    label separator.
    """
    if label_separator == ",":
        raise DataFormatError("label separator ',' collides with the field separator")
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    fields = s.split(",")
    if len(fields) != 3:
        raise DataFormatError(
            f"expected three comma-separated fields in {text!r}, got {len(fields)}"
        )
    parts: list[frozenset[int]] = []
    for dimension, field in zip((1, 2, 3), fields):
        stripped = field.strip()
        if stripped in ("", "-"):
            parts.append(frozenset())
            continue
        if label_separator is None:
            labels = list(stripped.replace(" ", ""))
        else:
            labels = [piece.strip() for piece in stripped.split(label_separator)]
            labels = [piece for piece in labels if piece]
        d = dictionaries[dimension - 1]
        parts.append(frozenset(d.id_of(label) for label in labels))
    return make_query((parts[0], parts[1], parts[2]), theta, mode, k, theta_scope)


@dataclass(frozen=True)
class RankedHit:
    """A concept with its similarity score and overlap diagnostics."""

    concept_id: int
    score: float
    overlaps: tuple[int, int, int]
    missing: int


def _hit_threshold(query: Query) -> int:
    return max(1, query.size - query.theta)


def _admit(query: Query, concept: TriadicConcept, overlaps: tuple[int, int, int]) -> bool:
    total = sum(overlaps)
    if total < 1:
        return False
    if query.theta_scope == "total":
        if total < _hit_threshold(query):
            return False
    else:
        for i in range(3):
            wanted = len(query.parts[i])
            if wanted and wanted - overlaps[i] > query.theta:
                return False
    if query.mode == "exact":
        for i in range(3):
            qp = query.parts[i]
            if qp and frozenset(concept.parts[i]) != qp:
                return False
    return True


def _overlaps(query: Query, concept: TriadicConcept) -> tuple[int, int, int]:
    return tuple(
        len(query.parts[i].intersection(concept.parts[i])) if query.parts[i] else 0
        for i in range(3)
    )


def relevant_concepts(index: InvertedIndex, query: Query) -> dict[int, int]:
    """Candidate concept ids with their hit counts, via posting lists.

    A concept is kept when its hit count reaches ``|query| - theta`` (at
    least one element always has to match); exact mode additionally requires
    equality on every specified dimension. Concepts sharing no element with
    the query are never returned, whatever the tolerance.
    """
    if index.concepts is None:
        raise ValueError("index has no concept set attached")
    counts: Counter[int] = Counter()
    per_dim: list[Counter[int]] = [Counter(), Counter(), Counter()]
    for dimension in (1, 2, 3):
        for element in query.part(dimension):
            for cid in index.postings(dimension, element):
                counts[cid] += 1
                per_dim[dimension - 1][cid] += 1
    concepts = index.concepts
    out: dict[int, int] = {}
    for cid, total in counts.items():
        overlaps = (per_dim[0][cid], per_dim[1][cid], per_dim[2][cid])
        if _admit(query, concepts[cid], overlaps):
            out[cid] = total
    return out


def relevant_concepts_scan(concepts: ConceptSet, query: Query) -> dict[int, int]:
    """Oracle twin of :func:`relevant_concepts`: test every concept directly."""
    out: dict[int, int] = {}
    for concept in concepts:
        overlaps = _overlaps(query, concept)
        if _admit(query, concept, overlaps):
            out[concept.id] = sum(overlaps)
    return out


def score_hit(query: Query, concept: TriadicConcept) -> tuple[float, tuple[int, int, int]]:
    """Similarity of a concept to the query, with per-dimension overlaps.

    Per specified dimension: the overlap count, boosted by overlap divided by
    the larger of the query part and the concept part, then weighted by the
    dimension's share of the query.
    """
    qsize = query.size
    score = 0.0
    overlaps = []
    for i in range(3):
        qp = query.parts[i]
        if qp:
            inter = len(qp.intersection(concept.parts[i]))
            delta = inter + inter / max(len(qp), len(concept.parts[i]))
            score += delta * (len(qp) / qsize)
            overlaps.append(inter)
        else:
            overlaps.append(0)
    return score, (overlaps[0], overlaps[1], overlaps[2])


def rerank(
    candidates: Iterable[int] | Mapping[int, int], query: Query, concepts: ConceptSet
) -> list[RankedHit]:
    """Order candidate ids by score, descending.

    Ties break on the concept's components (extent, then intent, then modus,
    lexicographically on sorted ids), then on id, so output is deterministic.
    Re-ranking never adds or drops candidates.
    """
    hits = []
    for cid in candidates:
        concept = concepts[cid]
        score, overlaps = score_hit(query, concept)
        hit = RankedHit(cid, score, overlaps, query.size - sum(overlaps))
        hits.append((-score, concept.extent, concept.intent, concept.modus, cid, hit))
    hits.sort(key=lambda entry: entry[:5])
    return [entry[5] for entry in hits]


def search(index: InvertedIndex, concepts: ConceptSet, query: Query) -> list[RankedHit]:
    """Retrieve, rank, and truncate to the query's cutoff."""
    ranked = rerank(relevant_concepts(index, query), query, concepts)
    if query.k is not None:
        return ranked[: query.k]
    return ranked


# -- result records (shared by CLI and HTTP service) ---------------------------


def hit_record(hit: RankedHit, rank: int, concepts: ConceptSet) -> dict:
    """JSON-ready record for one ranked hit; scores carry two decimals."""
    concept = concepts[hit.concept_id]
    extent, intent, modus = concepts.label_parts(concept)
    return {
        "rank": rank,
        "concept": hit.concept_id,
        "score": round(hit.score, 2),
        "extent": extent,
        "intent": intent,
        "modus": modus,
        "overlap": list(hit.overlaps),
        "missing": hit.missing,
    }


def concept_record(concept: TriadicConcept, concepts: ConceptSet) -> dict:
    """JSON-ready record for an unscored concept (baseline answers)."""
    extent, intent, modus = concepts.label_parts(concept)
    return {
        "concept": concept.id,
        "extent": extent,
        "intent": intent,
        "modus": modus,
    }
