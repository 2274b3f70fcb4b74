import random
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from restpark.model import Triple, TriplePattern, iri, literal, pattern_matches, triple_key
from restpark.store import PageRequest, build_store, count_pattern, match_page, match_pattern
from strategies import SHAPES, random_pattern, random_triples, random_vocab, triple_lists

FILM_675 = iri("http://data.linkedmdb.org/resource/film/675")


def linear_scan(triples, pattern):
    return sorted({t for t in triples if pattern_matches(pattern, t)}, key=triple_key)


def test_empty_store():
    store = build_store([])
    assert len(store) == 0
    assert match_pattern(store, TriplePattern()) == []
    assert count_pattern(store, TriplePattern()) == 0


def test_dedup():
    t = Triple(iri("http://a"), iri("http://p"), literal("x"))
    assert len(build_store([t, t])) == 1


def test_dedup_against_set_oracle():
    rng = random.Random(5)
    base = random_triples(rng, 4500)
    ts = base + [rng.choice(base) for _ in range(500)]
    rng.shuffle(ts)
    assert len(build_store(ts)) == len(set(ts))


def test_rebuild_is_identical():
    rng = random.Random(9)
    ts = random_triples(rng, 300)
    shuffled = ts[:]
    rng.shuffle(shuffled)
    assert build_store(ts) == build_store(shuffled)


def test_indexes_are_coherent_and_sorted():
    rng = random.Random(1)
    store = build_store(random_triples(rng, 2000))
    orders = {"spo": (0, 1, 2), "pos": (1, 2, 0), "osp": (2, 0, 1)}
    sets = []
    for name, order in orders.items():
        triples = store.index_triples(name)
        keys = [tuple(triple_key(t)[i] for i in order) for t in triples]
        assert keys == sorted(keys)
        assert len(set(triples)) == len(triples)
        sets.append(set(triples))
    assert sets[0] == sets[1] == sets[2]


def test_subject_lookup_on_linkedmdb(fixture_triples, fixture_stores):
    got = match_pattern(fixture_stores["linkedmdb"], TriplePattern(FILM_675))
    assert got == linear_scan(fixture_triples["linkedmdb"], TriplePattern(FILM_675))
    assert len(got) == 13


def test_literal_object_lookup_on_dbpedia(fixture_triples, fixture_stores):
    p = TriplePattern(object=literal("William Shatner"))
    got = match_pattern(fixture_stores["dbpedia"], p)
    assert [t.subject.value for t in got] == ["http://dbpedia.org/resource/William_Shatner"]
    assert got == linear_scan(fixture_triples["dbpedia"], p)


def test_all_wildcard_enumerates_everything(fixture_stores):
    store = fixture_stores["dblp"]
    assert len(match_pattern(store, TriplePattern())) == len(store) == 32


@pytest.mark.parametrize("shape", SHAPES, ids=lambda s: "".join("spo"[i] if b else "?" for i, b in enumerate(s)))
def test_every_shape_matches_linear_scan(shape):
    rng = random.Random(hash(shape) & 0xFFFF)
    vocab = random_vocab(rng)
    ts = random_triples(rng, 3000, vocab)
    store = build_store(ts)
    for _ in range(150):
        p = random_pattern(rng, shape, ts, vocab)
        want = linear_scan(ts, p)
        assert match_pattern(store, p) == want
        assert count_pattern(store, p) == len(want)


def test_count_agrees_with_linear_scan_counting():
    rng = random.Random(2)
    vocab = random_vocab(rng)
    ts = random_triples(rng, 5000, vocab)
    store = build_store(ts)
    distinct = set(ts)
    for i in range(1000):
        p = random_pattern(rng, SHAPES[i % 8], ts, vocab)
        assert count_pattern(store, p) == sum(pattern_matches(p, t) for t in distinct)


def test_fully_bound_count_is_one(fixture_stores):
    store = fixture_stores["dbpedia"]
    t = next(iter(store))
    assert count_pattern(store, TriplePattern(*t)) == 1
    assert t in store


def test_unsatisfiable_patterns():
    store = build_store([Triple(iri("http://a"), iri("http://p"), literal("x"))])
    assert match_pattern(store, TriplePattern(literal("x"))) == []
    assert count_pattern(store, TriplePattern(predicate=literal("x"))) == 0


def test_determinism():
    rng = random.Random(4)
    store = build_store(random_triples(rng, 500))
    p = TriplePattern(predicate=iri("http://example.org/p/3"))
    assert match_pattern(store, p) == match_pattern(store, p)


class TestPaging:
    def seven(self):
        # 7 matches for predicate p
        ts = [Triple(iri(f"http://s/{i}"), iri("http://p"), literal(str(i))) for i in range(7)]
        ts.append(Triple(iri("http://s/0"), iri("http://q"), literal("other")))
        return build_store(ts), TriplePattern(predicate=iri("http://p"))

    def test_zero_matches(self):
        r = match_page(build_store([]), TriplePattern(), PageRequest(1, 10))
        assert (r.triples, r.total_count, r.has_next) == ((), 0, False)

    def test_pages_of_three(self):
        store, p = self.seven()
        full = match_pattern(store, p)
        pages = [match_page(store, p, PageRequest(n, 3)) for n in (1, 2, 3)]
        assert [len(r.triples) for r in pages] == [3, 3, 1]
        assert [r.has_next for r in pages] == [True, True, False]
        assert all(r.total_count == 7 for r in pages)
        # slice oracle
        assert [list(r.triples) for r in pages] == [full[0:3], full[3:6], full[6:9]]

    def test_beyond_end(self):
        store, p = self.seven()
        r = match_page(store, p, PageRequest(99, 3))
        assert r.triples == () and r.total_count == 7 and not r.has_next

    @pytest.mark.parametrize("page, size", [(0, 10), (1, 0), (1, 10001), (-1, 5)])
    def test_invalid_requests(self, page, size):
        with pytest.raises(ValueError):
            PageRequest(page, size)

    @settings(max_examples=60, deadline=None)
    @given(triple_lists, st.integers(1, 7), st.integers(0, 7))
    def test_pages_partition_result(self, ts, size, shape_index):
        store = build_store(ts)
        shape = SHAPES[shape_index]
        pattern = TriplePattern(*(t if b else None for t, b in zip(ts[0] if ts else (None,) * 3, shape)))
        full = match_pattern(store, pattern)
        n_pages = max(1, ceil(len(full) / size))
        joined = []
        for n in range(1, n_pages + 1):
            r = match_page(store, pattern, PageRequest(n, size))
            assert len(r.triples) <= size
            assert r.has_next == (n * size < r.total_count)
            joined.extend(r.triples)
        assert joined == full
