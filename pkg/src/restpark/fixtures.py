"""Checks for the bundled LinkedMDB-, DBpedia- and DBLP-like sample datasets."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .model import IRI, LITERAL, Term, TriplePattern, iri, literal
from .ntriples import NTriplesError, read_file
from .store import TripleStore

FILES = ("linkedmdb.nt", "dbpedia.nt", "dblp.nt")
MIN_TRIPLES, MAX_TRIPLES = 20, 60

STAR_TREK = iri("http://data.linkedmdb.org/resource/film/675")
ACTOR_NAME = iri("http://data.linkedmdb.org/resource/movie/actor_name")
SHATNER_NAME = literal("William Shatner")
SHATNER_VARIANT = literal("William  Shatner")

DCT_SUBJECT = iri("http://purl.org/dc/terms/subject")
BCS_FELLOWS = iri("http://dbpedia.org/resource/Category:Fellows_of_the_British_Computer_Society")
# /page/ rather than /resource/, as printed in the original worked example
TIMBL_DBPEDIA = iri("http://dbpedia.org/page/Tim_Berners-Lee")
TIMBL_DBLP = iri("http://www4.wiwiss.fu-berlin.de/dblp/Tim_Berners-Lee")
DBLP_AUTHORITY = "www4.wiwiss.fu-berlin.de"

OWL_SAME_AS = iri("http://www.w3.org/2002/07/owl#sameAs")
FOAF_NAME = iri("http://xmlns.com/foaf/0.1/name")
FOAF_MADE = iri("http://xmlns.com/foaf/0.1/made")
DC_TITLE = iri("http://purl.org/dc/elements/1.1/title")
DBO_BIRTH_DATE = iri("http://dbpedia.org/ontology/birthDate")


class FixtureError(Exception):
    def __init__(self, failures: list[str]):
        super().__init__("fixture checks failed: " + "; ".join(failures))
        self.failures = failures


@dataclass
class FixtureReport:
    directory: Path
    sizes: dict[str, int] = field(default_factory=dict)
    checks: list[str] = field(default_factory=list)


def _host(term: Term) -> str:
    from urllib.parse import urlsplit

    return urlsplit(term.value).netloc.lower() if term.kind == IRI else ""


def validate_fixtures(directory) -> FixtureReport:
    directory = Path(directory)
    report = FixtureReport(directory)
    failures: list[str] = []
    stores: dict[str, TripleStore] = {}

    for name in FILES:
        path = directory / name
        if not path.is_file():
            failures.append(f"{name}: missing")
            continue
        try:
            triples = read_file(path, strict=True).triples
        except (NTriplesError, UnicodeDecodeError) as exc:
            failures.append(f"{name}: does not parse strictly ({exc})")
            continue
        store = stores[name] = TripleStore(triples)
        report.sizes[name] = len(store)
        if not MIN_TRIPLES <= len(store) <= MAX_TRIPLES:
            failures.append(f"{name}: {len(store)} triples, expected {MIN_TRIPLES}..{MAX_TRIPLES}")
    if failures:
        raise FixtureError(failures)

    def check(label: str, ok: bool) -> None:
        (report.checks if ok else failures).append(label)

    lmdb, dbp, dblp = (stores[n] for n in FILES)

    names = [t.object for t in lmdb.match(TriplePattern(STAR_TREK, ACTOR_NAME))]
    check("linkedmdb: film/675 has >= 3 actor-name literals", sum(n.kind == LITERAL for n in names) >= 3)
    check('linkedmdb: film/675 lists "William Shatner"', SHATNER_NAME in names)
    check('linkedmdb: double-space "William  Shatner" variant present', lmdb.count(TriplePattern(None, None, SHATNER_VARIANT)) > 0)

    fellows = [t.subject for t in dbp.match(TriplePattern(None, DCT_SUBJECT, BCS_FELLOWS))]
    check("dbpedia: >= 2 BCS Fellows", len(set(fellows)) >= 2)
    check("dbpedia: Tim Berners-Lee is a BCS Fellow", TIMBL_DBPEDIA in fellows)
    links = [t.object for t in dbp.match(TriplePattern(TIMBL_DBPEDIA, OWL_SAME_AS))]
    check("dbpedia: Tim Berners-Lee sameAs a DBLP IRI", any(_host(t) == DBLP_AUTHORITY for t in links))
    check("dbpedia: Tim Berners-Lee has a non-DBLP sameAs distractor", any(_host(t) != DBLP_AUTHORITY for t in links))

    actors = {t.subject for n in names for t in dbp.match(TriplePattern(None, None, n))}
    check(
        "dbpedia: matched actor resources carry birthDate literals",
        bool(actors) and any(
            t.object.kind == LITERAL for a in actors for t in dbp.match(TriplePattern(a, DBO_BIRTH_DATE))
        ),
    )

    papers = [t.object for t in dblp.match(TriplePattern(TIMBL_DBLP, FOAF_MADE))]
    check(
        "dblp: Tim Berners-Lee has titled papers",
        any(dblp.count(TriplePattern(p, DC_TITLE)) for p in papers),
    )

    if failures:
        raise FixtureError(failures)
    return report
