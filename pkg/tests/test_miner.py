import random

import pytest

from trisearch.context import build_context
from trisearch.errors import BruteForceCapError, DataFormatError
from trisearch.miner import (
    ConceptSet,
    factorize,
    mine_concepts,
    mine_concepts_bruteforce,
    context_from_concepts,
    read_store,
    write_store,
)

from conftest import concept_key_labels, random_label_context

# concepts named in the worked examples; all must be mined from the grid
NAMED_CONCEPTS = [
    ("256", "R", "abd"),
    ("256", "NPR", "ad"),
    ("146", "KNP", "ab"),
    ("146", "NP", "abd"),
    ("1346", "KP", "ab"),
    ("13456", "K", "ab"),
    ("123456", "KNPRST", "a"),
    ("123456", "", "abcd"),
    ("16", "R", "ac"),
    ("23456", "R", "ab"),
    ("3456", "KR", "ab"),
    ("246", "NR", "ab"),
    ("346", "KPR", "ab"),
    ("1246", "N", "abd"),
    ("1346", "P", "abd"),
    ("123456", "NP", "ad"),
]


class TestFactorize:
    def test_kr_ab_block(self):
        # pairs (K,a),(K,b),(R,a),(R,b) in a 6x4 universe
        pairs = {(3, 0), (3, 1), (2, 0), (2, 1)}
        rects = factorize(pairs, 6, 4)
        assert ((2, 3), (0, 1)) in rects
        # boundary rectangles: all rows x nothing, nothing x all columns
        assert (tuple(range(6)), ()) in rects
        assert ((), tuple(range(4))) in rects
        assert len(rects) == 3

    def test_empty_pairs(self):
        rects = factorize([], 3, 2)
        assert rects == [((), (0, 1)), ((0, 1, 2), ())]

    def test_diagonal(self):
        rects = factorize({(0, 0), (1, 1), (2, 2)}, 3, 3)
        singles = [r for r in rects if len(r[0]) == 1 and len(r[1]) == 1]
        assert sorted(singles) == [((0,), (0,)), ((1,), (1,)), ((2,), (2,))]
        assert ((), (0, 1, 2)) in rects
        assert ((0, 1, 2), ()) in rects
        assert len(rects) == 5

    def test_orientation_invariance(self):
        rng = random.Random(4)
        for _ in range(20):
            nr, nc = rng.randint(0, 5), rng.randint(0, 5)
            pairs = {
                (r, c) for r in range(nr) for c in range(nc) if rng.random() < 0.4
            }
            direct = factorize(pairs, nr, nc)
            flipped = factorize({(c, r) for r, c in pairs}, nc, nr)
            assert sorted((c, r) for r, c in direct) == sorted(flipped)

    def test_every_rectangle_is_maximal(self):
        rng = random.Random(5)
        for _ in range(10):
            pairs = {(r, c) for r in range(4) for c in range(4) if rng.random() < 0.5}
            for rows, cols in factorize(pairs, 4, 4):
                assert all((r, c) in pairs for r in rows for c in cols)
                for extra in set(range(4)) - set(rows):
                    assert not all((extra, c) in pairs for c in cols) or not cols
                for extra in set(range(4)) - set(cols):
                    assert not all((r, extra) in pairs for r in rows) or not rows


class TestMineConcepts:
    def test_named_concepts_present(self, purchases, purchase_concepts):
        labelled = {concept_key_labels(purchase_concepts, c) for c in purchase_concepts}
        for extent, intent, modus in NAMED_CONCEPTS:
            key = (tuple(extent), tuple(intent), tuple(modus))
            assert key in labelled, f"missing concept {extent}|{intent}|{modus}"

    def test_matches_bruteforce_on_purchases(self, purchases, purchase_concepts):
        oracle = mine_concepts_bruteforce(purchases)
        assert purchase_concepts.keys() == oracle.keys()

    def test_every_concept_is_closed(self, purchases, purchase_concepts):
        for c in purchase_concepts:
            assert purchases.is_closed_triset(c.extent, c.intent, c.modus)

    def test_full_cuboid(self):
        triples = [(o, a, c) for o in "12" for a in "xy" for c in "uv"]
        ctx = build_context(triples)
        cs = mine_concepts(ctx)
        assert ((0, 1), (0, 1), (0, 1)) in cs.keys()
        assert cs.keys() == mine_concepts_bruteforce(ctx).keys()

    def test_empty_context(self):
        cs = mine_concepts(build_context([]))
        assert cs.keys() == {((), (), ())}
        assert mine_concepts_bruteforce(build_context([])).keys() == cs.keys()

    def test_empty_relation_nonempty_dimensions(self):
        ctx = build_context([], labels=(["o1", "o2"], ["x"], ["u", "v"]))
        cs = mine_concepts(ctx)
        assert cs.keys() == {
            ((0, 1), (0,), ()),
            ((0, 1), (), (0, 1)),
            ((), (0,), (0, 1)),
        }

    def test_deterministic_ids(self, purchases):
        first = mine_concepts(purchases)
        second = mine_concepts(purchases)
        assert [c.key for c in first] == [c.key for c in second]
        assert [c.id for c in first] == list(range(len(first)))

    def test_random_contexts_match_bruteforce(self):
        rng = random.Random(99)
        for _ in range(40):
            ctx = random_label_context(
                rng, rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 3),
                rng.uniform(0.1, 0.9),
            )
            assert mine_concepts(ctx).keys() == mine_concepts_bruteforce(ctx).keys()

    def test_bruteforce_cap(self):
        ctx = random_label_context(random.Random(1), 8, 8, 8, 0.1)
        with pytest.raises(BruteForceCapError):
            mine_concepts_bruteforce(ctx, cap=100)

    def test_bruteforce_cap_env(self, monkeypatch):
        ctx = random_label_context(random.Random(1), 4, 4, 4, 0.3)
        monkeypatch.setenv("TRISEARCH_BRUTEFORCE_CAP", "10")
        with pytest.raises(BruteForceCapError):
            mine_concepts_bruteforce(ctx)


class TestConceptStore:
    def test_round_trip(self, tmp_path, purchases, purchase_concepts):
        path = tmp_path / "purchases.tcs"
        write_store(path, purchase_concepts)
        loaded = read_store(path)
        assert len(loaded) == len(purchase_concepts)
        original = {concept_key_labels(purchase_concepts, c) for c in purchase_concepts}
        again = {concept_key_labels(loaded, c) for c in loaded}
        assert original == again
        # line order defines ids
        assert [c.id for c in loaded] == list(range(len(loaded)))

    def test_store_line_format(self, tmp_path, purchases, purchase_concepts):
        path = tmp_path / "purchases.tcs"
        write_store(path, purchase_concepts)
        lines = path.read_text().splitlines()
        assert len(lines) == len(purchase_concepts)
        assert "1,3,4,6|K,P|a,b" in lines

    def test_empty_field_round_trips(self, tmp_path):
        ctx = build_context([], labels=(["o"], ["x"], []))
        cs = mine_concepts(ctx)
        path = tmp_path / "b.tcs"
        write_store(path, cs)
        loaded = read_store(path)
        assert len(loaded) == len(cs)

    def test_malformed_store(self, tmp_path):
        path = tmp_path / "bad.tcs"
        path.write_text("a|b\n")
        with pytest.raises(DataFormatError, match=":1"):
            read_store(path)

    def test_forbidden_label(self, tmp_path):
        ctx = build_context([("a|b", "x", "u")])
        cs = mine_concepts(ctx)
        with pytest.raises(DataFormatError):
            write_store(tmp_path / "bad.tcs", cs)


class TestContextFromConcepts:
    def test_recovers_incidence(self, purchases, purchase_concepts):
        rebuilt = context_from_concepts(purchase_concepts)
        # same label triples, possibly different id assignment
        def label_triples(ctx):
            d1, d2, d3 = ctx.dictionaries
            return {
                (d1.label_of(a), d2.label_of(b), d3.label_of(c))
                for a, b, c in ctx.triples
            }
        assert label_triples(rebuilt) == label_triples(purchases)

    def test_random_round_trip(self):
        rng = random.Random(3)
        for _ in range(10):
            ctx = random_label_context(rng, 4, 3, 3, rng.uniform(0.2, 0.8))
            cs = mine_concepts(ctx)
            rebuilt = context_from_concepts(cs)
            assert mine_concepts(rebuilt).keys() == {
                _relabel(cs, rebuilt, c) for c in cs
            }


def _relabel(source: ConceptSet, target_ctx, concept):
    """Map a concept's ids into the dictionary space of another context."""
    out = []
    for dim in (1, 2, 3):
        src = source.dictionaries[dim - 1]
        dst = target_ctx.dictionary(dim)
        out.append(tuple(sorted(dst.id_of(src.label_of(e)) for e in concept.part(dim))))
    return (out[0], out[1], out[2])
