import random
from functools import cmp_to_key

import pytest
from hypothesis import given

from restpark.model import (
    BLANK, IRI, LITERAL, XSD_STRING, Term, TermError, Triple, TriplePattern, blank, compare_terms,
    format_term, iri, literal, parse_term, pattern_matches,
)
from strategies import random_pattern, random_triples, random_vocab, terms, triples

FILM_675 = "http://data.linkedmdb.org/resource/film/675"
SAME_AS = "http://www.w3.org/2002/07/owl#sameAs"


class TestParseTerm:
    def test_iri(self):
        assert parse_term(f"<{FILM_675}>") == iri(FILM_675)

    def test_plain_literal_gets_xsd_string(self):
        t = parse_term('"William Shatner"')
        assert t == Term(LITERAL, "William Shatner", None, XSD_STRING)

    def test_escaped_quote_with_language(self):
        t = parse_term(r'"a\"b"@en')
        assert (t.value, t.language, t.datatype) == ('a"b', "en", None)

    @pytest.mark.parametrize("text, value", [
        (r'"tab\there"', "tab\there"),
        (r'"nl\nx\r"', "nl\nx\r"),
        (r'"back\\slash"', "back\\slash"),
        (r'"été"', "été"),
        (r'"\U0001F596"', "\U0001F596"),
    ])
    def test_escapes(self, text, value):
        assert parse_term(text).value == value

    def test_typed_literal(self):
        t = parse_term('"1931-03-22"^^<http://www.w3.org/2001/XMLSchema#date>')
        assert t.datatype == "http://www.w3.org/2001/XMLSchema#date"

    def test_language_is_lowercased(self):
        assert parse_term('"colour"@EN-gb') == literal("colour", language="en-gb")

    def test_blank(self):
        assert parse_term("_:b0") == blank("b0")

    @pytest.mark.parametrize("text", [
        "", "http://no.brackets", "<http://a b>", "<>", "<relative/iri>", '"unterminated',
        '"x"@', '"x"^^xsd:string', "_:", "_:-bad", '"bad \\q escape"', r'"\uD800"', "<http://a> ",
    ])
    def test_malformed(self, text):
        with pytest.raises(TermError):
            parse_term(text)

    def test_allowed_kinds(self):
        with pytest.raises(TermError, match="literal not allowed"):
            parse_term('"x"', {IRI, BLANK})


class TestTermInvariants:
    def test_simple_literal_collapse(self):
        assert literal("x") == literal("x", datatype=XSD_STRING)
        assert compare_terms(literal("x"), literal("x", datatype=XSD_STRING)) == 0

    def test_language_and_datatype_exclusive(self):
        with pytest.raises(TermError):
            literal("x", language="en", datatype="http://example.org/dt")

    @pytest.mark.parametrize("value", ["http://a b", "http://a<b", "http://a{b}", "http://a|b", "http://a^b",
                                       "http://a`b", "http://a\"b", "http://a\x01b", "http://a\\b", ""])
    def test_iri_forbidden_characters(self, value):
        with pytest.raises(TermError):
            iri(value)

    def test_triple_positions(self):
        with pytest.raises(TermError):
            Triple(literal("x"), iri("http://p"), iri("http://o"))
        with pytest.raises(TermError):
            Triple(iri("http://s"), blank("p"), iri("http://o"))

    def test_literal_subject_pattern_is_constructible(self):
        p = TriplePattern(literal("x"))
        assert not p.satisfiable


class TestFormatTerm:
    def test_iri(self):
        assert format_term(iri(SAME_AS)) == f"<{SAME_AS}>"

    def test_plain_literal_has_no_datatype_suffix(self):
        assert format_term(literal("William Shatner")) == '"William Shatner"'

    def test_blank(self):
        assert format_term(blank("b0")) == "_:b0"

    def test_escaping(self):
        assert format_term(literal('a"b\\c\nd', language="en")) == r'"a\"b\\c\nd"@en'

    @given(terms)
    def test_round_trip(self, term):
        assert parse_term(format_term(term)) == term

    @given(terms)
    def test_canonical_text_is_fixed_point(self, term):
        text = format_term(term)
        assert format_term(parse_term(text)) == text


class TestCompareTerms:
    def test_reflexive(self):
        assert compare_terms(iri("http://a"), iri("http://a")) == 0

    def test_kind_rank(self):
        assert compare_terms(iri("http://z"), blank("a")) < 0
        assert compare_terms(blank("z"), literal("a")) < 0

    def test_language_then_datatype(self):
        assert compare_terms(literal("a", language="de"), literal("a", language="en")) < 0
        assert compare_terms(literal("a"), literal("a", language="en")) < 0  # no tag sorts first

    @given(terms, terms, terms)
    def test_total_order(self, a, b, c):
        ab, ba = compare_terms(a, b), compare_terms(b, a)
        assert ab == -ba
        assert (ab == 0) == (a == b)
        if ab <= 0 and compare_terms(b, c) <= 0:
            assert compare_terms(a, c) <= 0

    def test_sort_agrees_with_insertion_sort(self):
        rng = random.Random(7)
        _, _, pool = random_vocab(rng)
        for _ in range(20):
            items = [rng.choice(pool) for _ in range(100)]
            fast = sorted(items, key=cmp_to_key(compare_terms))
            # brute-force insertion sort using only pairwise comparisons
            slow = []
            for t in items:
                i = 0
                while i < len(slow) and compare_terms(slow[i], t) <= 0:
                    i += 1
                slow.insert(i, t)
            assert fast == slow
            assert sorted(fast, key=cmp_to_key(compare_terms)) == fast


class TestPatternMatches:
    t = Triple(iri(FILM_675), iri("http://data.linkedmdb.org/resource/movie/actor"), iri("http://x/actor"))

    def test_all_wildcard(self):
        assert pattern_matches(TriplePattern(), self.t)

    def test_subject_bound(self):
        assert pattern_matches(TriplePattern(iri(FILM_675)), self.t)
        assert not pattern_matches(TriplePattern(iri("http://data.linkedmdb.org/resource/film/676")), self.t)

    @given(triples)
    def test_fully_bound_matches_self(self, t):
        assert pattern_matches(TriplePattern(*t), t)

    @given(triples, triples)
    def test_fully_bound_matches_only_equal(self, t, u):
        assert pattern_matches(TriplePattern(*t), u) == (t == u)

    def test_against_per_position_oracle(self):
        rng = random.Random(11)
        vocab = random_vocab(rng)
        store = random_triples(rng, 500, vocab)
        for i in range(1000):
            shape = [(i >> k) & 1 for k in range(3)]
            p = random_pattern(rng, shape, store, vocab)
            got = {t for t in store if pattern_matches(p, t)}
            want = set()
            for t in store:
                ok = True
                for bound, term in zip((p.subject, p.predicate, p.object), (t.subject, t.predicate, t.object)):
                    if bound is not None and (bound.kind, bound.value, bound.language, bound.datatype) != (
                        term.kind, term.value, term.language, term.datatype
                    ):
                        ok = False
                if ok:
                    want.add(t)
            assert got == want
