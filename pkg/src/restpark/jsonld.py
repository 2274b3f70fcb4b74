"""Flattened, context-free JSON-LD encoding of triple lists.

Documents look like::

    {"@graph":[{"@id":"http://s","http://p":[{"@id":"http://o"},{"@value":"x","@language":"en"}]}]}

Subjects are emitted in canonical term order, predicate keys in code-point
order and value lists in canonical term order, so output bytes depend only
on the triple set.
"""

from __future__ import annotations

import json
from itertools import groupby
from typing import Iterable

from .model import BLANK, IRI, XSD_STRING, Term, TermError, Triple, blank, iri, literal, triple_key

MEDIA_TYPE = "application/ld+json"


class JsonLdError(ValueError):
    pass


def _node_ref(term: Term) -> str:
    return f"_:{term.value}" if term.kind == BLANK else term.value


def _value_object(term: Term) -> dict:
    if term.kind in (IRI, BLANK):
        return {"@id": _node_ref(term)}
    obj = {"@value": term.value}
    if term.language is not None:
        obj["@language"] = term.language
    elif term.datatype != XSD_STRING:
        obj["@type"] = term.datatype
    return obj


def encode_graph(triples: Iterable[Triple]) -> str:
    ordered = sorted(set(triples), key=triple_key)
    graph = []
    for subject, group in groupby(ordered, key=lambda t: t.subject):
        node = {"@id": _node_ref(subject)}
        # SPO order already sorts predicates by IRI text, then objects canonically
        for predicate, rows in groupby(group, key=lambda t: t.predicate):
            node[predicate.value] = [_value_object(t.object) for t in rows]
        graph.append(node)
    return json.dumps({"@graph": graph}, ensure_ascii=False, separators=(",", ":"))


def _decode_ref(ref) -> Term:
    if not isinstance(ref, str) or not ref:
        raise JsonLdError(f"node reference must be a non-empty string, got {ref!r}")
    if ref.startswith("_:"):
        return blank(ref[2:])
    return iri(ref)


def _decode_value(obj) -> Term:
    if not isinstance(obj, dict):
        raise JsonLdError(f"value must be an object, got {obj!r}")
    keys = set(obj)
    if "@id" in keys:
        if keys != {"@id"}:
            raise JsonLdError(f"unexpected keys beside @id: {sorted(keys - {'@id'})}")
        return _decode_ref(obj["@id"])
    if "@value" not in keys:
        raise JsonLdError("value object lacks @value or @id")
    unknown = keys - {"@value", "@language", "@type"}
    if unknown:
        raise JsonLdError(f"unknown keywords in value object: {sorted(unknown)}")
    if "@language" in keys and "@type" in keys:
        raise JsonLdError("value object has both @language and @type")
    value = obj["@value"]
    if not isinstance(value, str):
        raise JsonLdError(f"@value must be a string, got {value!r}")
    lang, dtype = obj.get("@language"), obj.get("@type")
    if lang is not None and not isinstance(lang, str) or dtype is not None and not isinstance(dtype, str):
        raise JsonLdError("@language and @type must be strings")
    return literal(value, language=lang, datatype=dtype)


def _no_duplicates(pairs):
    obj = dict(pairs)
    if len(obj) != len(pairs):
        raise JsonLdError("duplicate key in JSON object")
    return obj


def decode_graph(document: str | bytes) -> list[Triple]:
    """Decode a document in the flattened profile back into triples, in document order."""
    try:
        doc = json.loads(document, object_pairs_hook=_no_duplicates)
    except ValueError as exc:
        raise JsonLdError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"@graph"}:
        raise JsonLdError('top level must be an object with the single key "@graph"')
    if not isinstance(doc["@graph"], list):
        raise JsonLdError("@graph must be an array")
    triples = []
    try:
        for node in doc["@graph"]:
            if not isinstance(node, dict):
                raise JsonLdError(f"graph entry must be an object, got {node!r}")
            if "@id" not in node:
                raise JsonLdError("node object missing @id")
            subject = _decode_ref(node["@id"])
            for key, values in node.items():
                if key == "@id":
                    continue
                if key.startswith("@"):
                    raise JsonLdError(f"unknown keyword {key!r}")
                predicate = iri(key)
                if not isinstance(values, list):
                    raise JsonLdError(f"values of {key!r} must be an array")
                for v in values:
                    triples.append(Triple(subject, predicate, _decode_value(v)))
    except TermError as exc:
        raise JsonLdError(str(exc)) from None
    return triples
