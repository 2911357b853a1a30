"""Cross-checks between the fast paths and their oracles.

Each check pits an optimized implementation against an independent
computation: the miner against subset-seed enumeration, posting-list
retrieval against a linear scan, stored scores against a recomputation of
the ranking formula in exact arithmetic. A failed check names the violated
invariant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .context import TriadicContext
from .index import build_index
from .miner import ConceptSet, mine_concepts, mine_concepts_bruteforce
from .query import make_query, relevant_concepts, relevant_concepts_scan, search


@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, ok, detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def format_lines(self) -> list[str]:
        out = []
        for name, ok, detail in self.checks:
            status = "pass" if ok else "FAIL"
            out.append(f"[{status}] {name}" + (f": {detail}" if detail else ""))
        return out


def _random_query(rng: random.Random, sizes: tuple[int, int, int]):
    while True:
        parts = tuple(
            frozenset(e for e in range(n) if rng.random() < 0.35) for n in sizes
        )
        if sum(len(p) for p in parts):
            return make_query(
                parts,
                theta=rng.randint(0, 3),
                mode=rng.choice(["contains", "exact"]),
                theta_scope=rng.choice(["total", "per_dimension"]),
            )


def run_validation(
    ctx: TriadicContext,
    store: ConceptSet | None = None,
    query_samples: int = 50,
    seed: int = 0,
    cap: int | None = None,
) -> ValidationReport:
    """Run the oracle suite on a context (and optionally a concept store)."""
    report = ValidationReport()
    concepts = mine_concepts(ctx)

    oracle = mine_concepts_bruteforce(ctx, cap=cap)
    mined_keys = concepts.keys()
    oracle_keys = oracle.keys()
    report.add(
        "miner matches brute-force enumeration",
        mined_keys == oracle_keys,
        f"mined {len(mined_keys)}, oracle {len(oracle_keys)}",
    )

    unsound = [c for c in concepts if not ctx.is_closed_triset(c.extent, c.intent, c.modus)]
    report.add(
        "every mined tri-set is closed",
        not unsound,
        f"{len(unsound)} open tri-sets" if unsound else f"{len(concepts)} concepts",
    )

    if store is not None:
        stored_labels = {
            tuple(tuple(part) for part in store.label_parts(c)) for c in store
        }
        mined_labels = {
            tuple(tuple(part) for part in concepts.label_parts(c)) for c in concepts
        }
        report.add(
            "store matches freshly mined concepts",
            stored_labels == mined_labels,
            f"store {len(stored_labels)}, mined {len(mined_labels)}",
        )
        bad = _open_store_concepts(ctx, store)
        report.add(
            "every stored concept is closed in the context",
            not bad,
            bad[0] if bad else "",
        )

    index = build_index(concepts)
    rng = random.Random(seed)
    mismatches = 0
    score_errors = 0
    for _ in range(query_samples):
        q = _random_query(rng, ctx.sizes)
        if relevant_concepts(index, q) != relevant_concepts_scan(concepts, q):
            mismatches += 1
        for hit in search(index, concepts, q):
            expected = Fraction(0)
            concept = concepts[hit.concept_id]
            for i in range(3):
                qp = q.parts[i]
                if not qp:
                    continue
                inter = len(qp.intersection(concept.parts[i]))
                delta = inter + Fraction(inter, max(len(qp), len(concept.parts[i])))
                expected += delta * Fraction(len(qp), q.size)
            if abs(hit.score - float(expected)) >= 1e-9:
                score_errors += 1
    report.add(
        "posting-list retrieval matches linear scan",
        mismatches == 0,
        f"{mismatches} mismatching queries of {query_samples}",
    )
    report.add(
        "scores recompute from the ranking formula",
        score_errors == 0,
        f"{score_errors} hits off by 1e-9 or more",
    )
    return report


def _open_store_concepts(ctx: TriadicContext, store: ConceptSet) -> list[str]:
    """Stored concepts that are not closed tri-sets of the context."""
    bad = []
    dims = ctx.dictionaries
    for concept in store:
        extent, intent, modus = store.label_parts(concept)
        try:
            ids = (
                [dims[0].id_of(x) for x in extent],
                [dims[1].id_of(x) for x in intent],
                [dims[2].id_of(x) for x in modus],
            )
        except Exception:
            bad.append(f"store concept {extent}|{intent}|{modus} uses labels absent from context")
            continue
        if not ctx.is_closed_triset(*ids):
            bad.append(
                "store concept "
                f"{','.join(extent)}|{','.join(intent)}|{','.join(modus)} is not closed"
            )
    return bad
