"""Minimal RESTful retrieval of RDF triples: ``GET /restpark?subject=&predicate=&object=``."""

from .client import Endpoint, RestparkClient, build_url, query_all, query_page
from .federation import BindingTable, QueryPlan, filter_host, load_plan, project_terms, run_plan
from .jsonld import decode_graph, encode_graph
from .model import Term, Triple, TriplePattern, blank, compare_terms, format_term, iri, literal, parse_term, pattern_matches
from .ntriples import parse_document, serialize_document
from .service import handle_request, parse_query_params, serve_in_background
from .store import PageRequest, PageResult, TripleStore, build_store, count_pattern, match_page, match_pattern

__version__ = "0.1.0"

__all__ = [
    "BindingTable", "Endpoint", "PageRequest", "PageResult", "QueryPlan", "RestparkClient", "Term",
    "Triple", "TriplePattern", "TripleStore", "blank", "build_store", "build_url", "compare_terms",
    "count_pattern", "decode_graph", "encode_graph", "filter_host", "format_term", "handle_request",
    "iri", "literal", "load_plan", "match_page", "match_pattern", "parse_document", "parse_query_params",
    "parse_term", "pattern_matches", "project_terms", "query_all", "query_page", "run_plan",
    "serialize_document", "serve_in_background",
]
