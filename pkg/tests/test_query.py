import random
from fractions import Fraction

import pytest

from trisearch.errors import DataFormatError, UnknownLabelError
from trisearch.index import build_index
from trisearch.miner import mine_concepts
from trisearch.query import (
    make_query,
    parse_query,
    relevant_concepts,
    relevant_concepts_scan,
    rerank,
    score_hit,
    search,
)
from trisearch.synthetic import random_context

from conftest import concept_key_labels, ids_of


@pytest.fixture(scope="module")
def engine(purchases, purchase_concepts):
    return build_index(purchase_concepts)


def labelled_query(purchases, text, **kwargs):
    return parse_query(text, purchases.dictionaries, **kwargs)


def keys_of(purchase_concepts, ids):
    return {concept_key_labels(purchase_concepts, purchase_concepts[i]) for i in ids}


def lab(extent, intent, modus):
    return (tuple(extent), tuple(intent), tuple(modus))


class TestParseQuery:
    def test_single_dimension(self, purchases):
        q = labelled_query(purchases, "(-, KP, -)")
        assert q.parts[0] == frozenset()
        assert q.parts[1] == ids_of(purchases, 2, "KP")
        assert q.parts[2] == frozenset()

    def test_three_dimensions(self, purchases):
        q = labelled_query(purchases, "(3, R, c)")
        assert q.parts == (
            ids_of(purchases, 1, "3"),
            ids_of(purchases, 2, "R"),
            ids_of(purchases, 3, "c"),
        )

    def test_all_blank_is_an_error(self, purchases):
        with pytest.raises(DataFormatError, match="no elements"):
            labelled_query(purchases, "(-,-,-)")

    def test_unknown_label_names_dimension(self, purchases):
        with pytest.raises(UnknownLabelError, match="attributes"):
            labelled_query(purchases, "(-, KZ, -)")

    def test_negative_theta(self, purchases):
        with pytest.raises(DataFormatError, match="non-negative"):
            labelled_query(purchases, "(13,-,-)", theta=-1)

    def test_theta_clamped_to_query_size(self, purchases):
        q = labelled_query(purchases, "(13,-,-)", theta=99)
        assert q.theta == 2

    def test_separator_style(self):
        ctx = random_context(3, 3, 3, 1.0, seed=1)
        q = parse_query("(o0|o2, a1, c0)", ctx.dictionaries, label_separator="|")
        assert q.parts[0] == frozenset({0, 2})
        assert q.parts[1] == frozenset({1})

    def test_comma_separator_rejected(self, purchases):
        with pytest.raises(DataFormatError, match="collides"):
            labelled_query(purchases, "(13,-,-)", label_separator=",")

    def test_parens_optional_and_spaces_ignored(self, purchases):
        assert labelled_query(purchases, " 1 3 , - , - ") == labelled_query(
            purchases, "(13,-,-)"
        )

    def test_bad_mode_and_k(self, purchases):
        with pytest.raises(DataFormatError):
            labelled_query(purchases, "(13,-,-)", mode="fuzzy")
        with pytest.raises(DataFormatError):
            labelled_query(purchases, "(13,-,-)", k=0)


class TestRelevantConcepts:
    def test_pair_13_exact_tolerance_zero(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(13,-,-)", theta=0)
        got = relevant_concepts(engine, q)
        assert all(hits == 2 for hits in got.values())
        assert keys_of(purchase_concepts, got) == {
            lab("1346", "KP", "ab"),
            lab("1346", "P", "abd"),
            lab("13456", "K", "ab"),
            lab("123456", "NP", "ad"),
            lab("123456", "KNPRST", "a"),
            lab("123456", "", "abcd"),
        }

    def test_pair_13_tolerance_one_adds_the_single_hits(
        self, purchases, purchase_concepts, engine
    ):
        q0 = labelled_query(purchases, "(13,-,-)", theta=0)
        q1 = labelled_query(purchases, "(13,-,-)", theta=1)
        got0 = relevant_concepts(engine, q0)
        got1 = relevant_concepts(engine, q1)
        assert set(got0) <= set(got1)
        assert len(got1) == 13
        extra = keys_of(purchase_concepts, set(got1) - set(got0))
        assert extra == {
            lab("16", "R", "ac"),
            lab("146", "KNP", "ab"),
            lab("146", "NP", "abd"),
            lab("346", "KPR", "ab"),
            lab("3456", "KR", "ab"),
            lab("1246", "N", "abd"),
            lab("23456", "R", "ab"),
        }

    def test_exact_mode_146(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(146,-,-)", mode="exact")
        got = relevant_concepts(engine, q)
        assert keys_of(purchase_concepts, got) == {
            lab("146", "KNP", "ab"),
            lab("146", "NP", "abd"),
        }

    def test_zero_hit_concepts_never_returned(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(-, S, -)", theta=5)
        got = relevant_concepts(engine, q)
        s = purchases.dictionary(2).id_of("S")
        assert got
        assert all(s in purchase_concepts[cid].intent for cid in got)

    def test_monotone_tolerance(self, purchases, engine):
        previous: set = set()
        for theta in range(4):
            q = labelled_query(purchases, "(3, R, c)", theta=theta)
            current = set(relevant_concepts(engine, q))
            assert previous <= current
            previous = current

    def test_per_dimension_scope_differs_from_total(self, purchases, engine):
        total = labelled_query(purchases, "(13, R, -)", theta=1)
        per_dim = labelled_query(purchases, "(13, R, -)", theta=1, theta_scope="per_dimension")
        got_total = set(relevant_concepts(engine, total))
        got_per_dim = set(relevant_concepts(engine, per_dim))
        # total allows one missing element overall; per-dimension allows one
        # missing element in each dimension, which is strictly looser here
        assert got_total < got_per_dim

    def test_scan_oracle_equivalence_random(self):
        rng = random.Random(17)
        for trial in range(30):
            ctx = random_context(
                rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 4),
                rng.uniform(0.2, 0.8), seed=trial,
            )
            concepts = mine_concepts(ctx)
            index = build_index(concepts)
            n1, n2, n3 = ctx.sizes
            for _ in range(10):
                parts = tuple(
                    frozenset(e for e in range(n) if rng.random() < 0.4)
                    for n in (n1, n2, n3)
                )
                if sum(len(p) for p in parts) == 0:
                    continue
                q = make_query(
                    parts,
                    theta=rng.randint(0, 4),
                    mode=rng.choice(["contains", "exact"]),
                    theta_scope=rng.choice(["total", "per_dimension"]),
                )
                assert relevant_concepts(index, q) == relevant_concepts_scan(concepts, q)

    def test_empty_concept_set_scan(self, purchases):
        from trisearch.miner import ConceptSet

        empty = ConceptSet.build([], purchases.dictionaries)
        q = labelled_query(purchases, "(13,-,-)")
        assert relevant_concepts_scan(empty, q) == {}


def top(hits, concepts, n):
    return [concept_key_labels(concepts, concepts[h.concept_id]) for h in hits[:n]]


class TestRerank:
    def test_one_dimensional_example(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(-, KP, -)")
        hits = search(engine, purchase_concepts, q)
        assert top(hits, purchase_concepts, 3) == [
            lab("1346", "KP", "ab"),
            lab("146", "KNP", "ab"),
            lab("346", "KPR", "ab"),
        ]
        assert hits[0].score == pytest.approx(3.0, abs=1e-12)
        assert hits[1].score == pytest.approx(float(Fraction(8, 3)), abs=1e-12)
        assert hits[2].score == pytest.approx(float(Fraction(8, 3)), abs=1e-12)

    def test_two_dimensional_example(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(-, R, ab)")
        hits = search(engine, purchase_concepts, q)
        assert top(hits, purchase_concepts, 1) == [lab("23456", "R", "ab")]
        assert hits[0].score == pytest.approx(float(Fraction(8, 3)), abs=1e-12)
        second_third = {
            concept_key_labels(purchase_concepts, purchase_concepts[h.concept_id])
            for h in hits[1:3]
        }
        assert second_third == {lab("3456", "KR", "ab"), lab("246", "NR", "ab")}
        assert hits[1].score == pytest.approx(2.5, abs=1e-12)
        assert hits[2].score == pytest.approx(2.5, abs=1e-12)

    def test_three_dimensional_example(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(3, R, c)", theta=3)
        hits = search(engine, purchase_concepts, q)
        assert top(hits, purchase_concepts, 3) == [
            lab("16", "R", "ac"),
            lab("23456", "R", "ab"),
            lab("3456", "KR", "ab"),
        ]
        assert hits[0].score == pytest.approx(float(Fraction(7, 6)), abs=1e-12)
        assert hits[1].score == pytest.approx(float(Fraction(16, 15)), abs=1e-12)
        assert hits[2].score == pytest.approx(float(Fraction(11, 12)), abs=1e-12)
        # the all-objects/all-conditions concept lands at rank 5
        assert top(hits, purchase_concepts, 5)[4] == lab("123456", "", "abcd")

    def test_empty_component_contributes_zero(self, purchases, purchase_concepts):
        q = labelled_query(purchases, "(-, KP, -)")
        noise = purchase_concepts.find_labelled("123456", "", "abcd")
        score, overlaps = score_hit(q, noise)
        assert score == 0.0
        assert overlaps == (0, 0, 0)

    def test_exact_triple_ranks_first(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(346, KPR, ab)", theta=8)
        hits = search(engine, purchase_concepts, q)
        assert top(hits, purchase_concepts, 1) == [lab("346", "KPR", "ab")]

    def test_single_candidate_full_match(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(16, R, c)", theta=0)
        hits = search(engine, purchase_concepts, q)
        assert len(hits) == 1
        assert top(hits, purchase_concepts, 1) == [lab("16", "R", "ac")]

    def test_k_truncation(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(-, R, ab)", k=3)
        assert len(search(engine, purchase_concepts, q)) == 3

    def test_rerank_is_a_permutation(self, purchases, purchase_concepts, engine):
        q = labelled_query(purchases, "(3, R, c)", theta=3)
        candidates = relevant_concepts(engine, q)
        ranked = rerank(candidates, q, purchase_concepts)
        assert sorted(h.concept_id for h in ranked) == sorted(candidates)


class TestScoreProperties:
    def test_recompute_matches_formula(self, purchases, purchase_concepts, engine):
        for text, theta in (("(-, KP, -)", 2), ("(-, R, ab)", 3), ("(3, R, c)", 3)):
            q = labelled_query(purchases, text, theta=theta)
            for hit in search(engine, purchase_concepts, q):
                concept = purchase_concepts[hit.concept_id]
                expected = Fraction(0)
                for i in range(3):
                    qp = q.parts[i]
                    if not qp:
                        continue
                    inter = len(qp & frozenset(concept.parts[i]))
                    assert inter == hit.overlaps[i]
                    delta = inter + Fraction(inter, max(len(qp), len(concept.parts[i])))
                    expected += delta * Fraction(len(qp), q.size)
                assert abs(hit.score - float(expected)) < 1e-9

    def test_score_bound(self, purchases, purchase_concepts, engine):
        rng = random.Random(5)
        n1, n2, n3 = purchases.sizes
        for _ in range(50):
            parts = tuple(
                frozenset(e for e in range(n) if rng.random() < 0.4)
                for n in (n1, n2, n3)
            )
            if sum(map(len, parts)) == 0:
                continue
            q = make_query(parts, theta=rng.randint(0, 6))
            for hit in search(engine, purchase_concepts, q):
                assert 0 <= hit.score <= q.size + 1

    def test_exact_match_dominance(self):
        rng = random.Random(31)
        for trial in range(15):
            ctx = random_context(4, 4, 3, rng.uniform(0.3, 0.8), seed=100 + trial)
            concepts = mine_concepts(ctx)
            index = build_index(concepts)
            for concept in concepts:
                if not any(concept.parts):
                    continue
                parts = tuple(
                    frozenset(p) if p and rng.random() < 0.8 else frozenset()
                    for p in concept.parts
                )
                if sum(map(len, parts)) == 0:
                    continue
                q = make_query(parts, theta=q_size(parts))
                best, _ = score_hit(q, concept)
                for hit in search(index, concepts, q):
                    assert hit.score <= best + 1e-12


def q_size(parts):
    return sum(len(p) for p in parts)
